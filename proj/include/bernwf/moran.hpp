#pragma once

#include <cstdint>
#include <vector>

#include "bernwf/measures.hpp"
#include "bernwf/rng.hpp"
#include "bernwf/stats.hpp"

namespace bernwf {

// Frequency chain of the size-K Moran counterpart: i counts type-a
// individuals. Only the chain is simulated; every mechanism of the
// individual-based model is a measurable function of i.
struct MoranState {
    int K = 2;
    int i = 0;
    double clock = 0.0;

    double freq() const { return static_cast<double>(i) / K; }
};

// Per-class event rates at a state. Self-replacements of the single-
// offspring mechanism are collapsed into the effective +-1 rates;
// measure-driven events keep their full rate and may resolve to no change.
struct MoranRates {
    double neutral_up = 0.0;
    double neutral_down = 0.0;
    double large_total = 0.0;
    double selection_total = 0.0;
    double env_total = 0.0;
    double mut_up = 0.0;
    double mut_down = 0.0;
    double coord_total = 0.0;

    double total() const {
        return neutral_up + neutral_down + large_total + selection_total + env_total + mut_up +
               mut_down + coord_total;
    }
};

MoranRates moran_rates(const MoranState& state, const ModelParams& params);

// One transition: exponential waiting time, event class choice, outcome.
void moran_step(MoranState& state, const ModelParams& params, Rng& rng);

// State at chain time t_chain (use t_chain = K*t to match the SDE at t).
int moran_value_at(const ModelParams& params, int K, int i0, double t_chain, Rng& rng);

struct MoranFixation {
    Estimate fixed_at_K;
    double mean_events = 0.0;
};

// P(absorption at i = K) from i0; mutation-free models only.
MoranFixation moran_fixation(const ModelParams& params, int K, int i0, std::size_t reps,
                             std::uint64_t seed);

struct MoranSdeRow {
    int k = 0;
    Estimate moran;
    Estimate sde;
    double z = 0.0;
};

// Moments of the rescaled chain at Kt against the SDE at t.
std::vector<MoranSdeRow> moran_vs_sde(const ModelParams& params, int K, double x0, double t,
                                      int max_moment, std::size_t reps, std::uint64_t seed,
                                      double sde_dt = 1e-3);

}  // namespace bernwf
