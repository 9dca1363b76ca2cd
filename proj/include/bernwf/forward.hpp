#pragma once

#include <cstdint>
#include <vector>

#include "bernwf/measures.hpp"
#include "bernwf/rng.hpp"
#include "bernwf/stats.hpp"

namespace bernwf {

struct ForwardConfig {
    double x0 = 0.5;
    double t_end = 1.0;
    double dt = 1e-3;

    void check() const;   // throws std::invalid_argument
};

// One jump channel of the SDE driven by an atom of Lambda-tail, mu or nu.
// Rates are state-independent, so the jump stream is a plain Poisson
// process thinned over channels.
struct JumpChannel {
    enum class Kind { neutral, environment, coordinated };
    Kind kind = Kind::neutral;
    double r = 0.0;      // signed atom location
    double rate = 0.0;   // w/r^2 (neutral) or w/|r| (environment, coordinated)
};

std::vector<JumpChannel> jump_catalog(const ModelParams& params);

struct ForwardPath {
    struct JumpRecord {
        double t = 0.0;
        JumpChannel::Kind kind = JumpChannel::Kind::neutral;
        double r = 0.0;
    };
    std::vector<double> times;
    std::vector<double> values;
    std::vector<JumpRecord> jumps;
};

// Full trajectory (grid values plus jump log), for trace output.
ForwardPath simulate_path(const ForwardConfig& cfg, const ModelParams& params, Rng& rng);

// Values X_t at the given sorted query times (all <= cfg.t_end), without
// storing the trajectory.
std::vector<double> simulate_values(const ForwardConfig& cfg, const ModelParams& params,
                                    const std::vector<double>& query_times, Rng& rng);

// Ensemble estimate of E[X_{t_end}^k].
Estimate moment_estimate(const ForwardConfig& cfg, const ModelParams& params, int k,
                         std::size_t reps, std::uint64_t seed);

struct FixationEstimate {
    Estimate fixed_at_one;        // fraction of replicas absorbed at 1
    double unresolved = 0.0;      // fraction not absorbed by t_end
};

// Fraction of paths absorbed at 1; only meaningful without mutations.
FixationEstimate forward_fixation(const ForwardConfig& cfg, const ModelParams& params,
                                  std::size_t reps, std::uint64_t seed);

}  // namespace bernwf
