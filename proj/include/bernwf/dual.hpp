#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bernwf/measures.hpp"
#include "bernwf/operators.hpp"
#include "bernwf/rng.hpp"
#include "bernwf/stats.hpp"

namespace bernwf {

// State of the labeled Bernstein coefficient process. The label records the
// type of the last mutation/environment event; it never feeds back into the
// rates and is carried for trace output.
struct DualState {
    CoefficientVector v;
    Allele label = Allele::a;
    double clock = 0.0;

    int lines() const { return static_cast<int>(v.size()) - 1; }
    bool absorbed() const { return v.size() == 1; }
};

struct DualEvent {
    enum class Kind { coalesce, select, mutation, environment };
    Kind kind = Kind::coalesce;
    int size = 0;            // k for coalescence, ell otherwise
    Allele type = Allele::a; // meaningful for mutation/environment
    double rate = 0.0;
};

const char* to_string(DualEvent::Kind kind);

// All transitions available from a state with n lines, zero-rate entries
// omitted. The total equals total_dual_rate(params, n) up to roundoff.
struct EventCatalog {
    std::vector<DualEvent> events;
    double total_rate = 0.0;
};

EventCatalog enumerate_events(const ModelParams& params, int n);

// Individual catalog rates (also reused by the Lyapunov drift computation).
double coalesce_event_rate(const ModelParams& params, int n, int k);
double select_event_rate(const ModelParams& params, int n, int ell);
double mut_event_rate(const ModelParams& params, int n, int ell, Allele c);
double env_event_rate(const ModelParams& params, int n, int ell, Allele c);

struct DualSimOptions {
    int l_max = 10000;
    std::optional<double> env_mc_se_budget;  // Monte Carlo fallback for big env ops
    bool force = false;                      // bypass rate-balance refusals in estimators
};

// Raised when the line count exceeds l_max. Under the rate-balance
// condition (see check_assumption) the line count is positive recurrent or
// absorbing, so hitting the guard indicates a misconfigured model.
class ExplosionError : public std::runtime_error {
  public:
    explicit ExplosionError(const std::string& what) : std::runtime_error(what) {}
};

struct StepResult {
    DualEvent event;
    double wait = 0.0;
};

// Advances the chain by one event: exponential waiting time at the total
// rate, categorical event choice, operator application, label update.
// Returns nullopt if no event has positive rate (state untouched), or if
// the next event would fall past t_cap (clock moved to t_cap). Throws
// std::logic_error on an absorbed state.
std::optional<StepResult> step(const ModelParams& params, DualState& state, Rng& rng,
                               const DualSimOptions& opts = {},
                               double t_cap = std::numeric_limits<double>::infinity());

struct DualEventCounts {
    std::uint64_t coalesce = 0;
    std::uint64_t select = 0;
    std::uint64_t mut_a = 0;
    std::uint64_t mut_A = 0;
    std::uint64_t env_a = 0;
    std::uint64_t env_A = 0;

    std::uint64_t total() const { return coalesce + select + mut_a + mut_A + env_a + env_A; }
};

struct DualPathSummary {
    DualState final_state;
    bool absorbed = false;
    double absorb_time = std::numeric_limits<double>::quiet_NaN();
    double final_value = std::numeric_limits<double>::quiet_NaN();  // scalar state if absorbed
    DualEventCounts counts;
};

using DualObserver = std::function<void(const DualState&, const DualEvent&)>;

// Runs the chain until t_end or absorption. Without mutations the path
// invariants (constant first/last coefficient, sup-norm non-expansion) are
// verified at every step.
DualPathSummary simulate_until(const ModelParams& params, const CoefficientVector& v0,
                               double t_end, const DualSimOptions& opts, Rng& rng,
                               const DualObserver& on_event = nullptr);

// Time-average estimate of E[H(x, V_infinity^{0,1})] from a single path
// started at e_1, with a batch-means confidence interval. Only valid in the
// mutation-free positive-recurrent regime; refuses otherwise.
Estimate stationary_functional(const ModelParams& params, double x, double burn_in,
                               double horizon, int batches, const DualSimOptions& opts, Rng& rng);

struct LyapunovRow {
    int n = 0;
    double delta = 0.0;
    double f = 0.0;
    double drift = 0.0;
};

struct LyapunovReport {
    std::vector<LyapunovRow> rows;           // n from n_lo to n_hi
    std::optional<int> onset;                // first n0 with drift < 0 on [n0, min(10 n0, n_hi)]
};

// Exact drift of the Lyapunov function f under the line-counting generator,
// tabulated over [n_lo, n_hi]. The onset is only reported when the full
// window [n0, 10 n0] fits below n_hi.
LyapunovReport lyapunov_report(const ModelParams& params, int n_lo, int n_hi);

}  // namespace bernwf
