#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bernwf/dual.hpp"
#include "bernwf/forward.hpp"
#include "bernwf/measures.hpp"
#include "bernwf/operators.hpp"
#include "bernwf/stats.hpp"

namespace bernwf {

struct DualityOptions {
    double dt = 1e-3;                               // forward Euler step
    DualSimOptions dual{10000, 0.01};               // MC env fallback on by default here
};

struct DualityGap {
    Estimate lhs;   // forward side: E_x[H(X_t, v)]
    Estimate rhs;   // dual side:    E_v[H(x, V_t)]
    double z = 0.0;
};

// Monte Carlo check of the duality identity at a single (x, v, t).
DualityGap duality_gap(const ModelParams& params, double x, const CoefficientVector& v,
                       double t, std::size_t reps, std::uint64_t seed,
                       const DualityOptions& opts = {});

struct DualityCell {
    double x = 0.0;
    double t = 0.0;
    std::size_t v_index = 0;
    Estimate lhs;
    Estimate rhs;
    double z = 0.0;
};

// Full grid sharing forward ensembles across v and dual ensembles across x;
// this is what the CLI and the acceptance checks run.
std::vector<DualityCell> duality_grid(const ModelParams& params, const std::vector<double>& xs,
                                      const std::vector<double>& ts,
                                      const std::vector<CoefficientVector>& vs, std::size_t reps,
                                      std::uint64_t seed, const DualityOptions& opts = {});

// |A H(.,w)(x) - B H(x,.)(w)|: the generator-level duality residual,
// computed in closed form on the forward side and through the operator
// catalog on the dual side. Exact env operators require dim(w) <= 7.
double generator_residual(const ModelParams& params, double x, const CoefficientVector& w);

struct FixationOptions {
    std::optional<double> burn_in;       // default: 10% of horizon
    double horizon = 2000.0;
    int batches = 20;
    bool with_forward = true;
    std::size_t forward_reps = 20000;
    double forward_dt = 1e-3;
    double forward_t_end = 200.0;
    std::uint64_t seed = 1;
    DualSimOptions dual;
};

struct FixationResult {
    Estimate dual_estimate;                      // E[H(x, V_infinity^{0,1})]
    std::optional<FixationEstimate> forward;     // fraction of paths absorbed at 1
};

// Fixation probability f(x) via the dual stationary functional, with an
// optional forward-simulation cross-estimate. Mutation-free regime only.
FixationResult fixation_probability(const ModelParams& params, double x,
                                    const FixationOptions& opts = {});

struct MomentTable {
    std::vector<Estimate> rho;   // rho[0] = 1 exactly

    int max_n() const { return static_cast<int>(rho.size()) - 1; }
};

// Stationary moments rho_n = E_{e_n}[V_infinity] by direct absorption
// simulation; requires mutations and the rate-balance condition.
MomentTable stationary_moments(const ModelParams& params, int n_max, std::size_t reps,
                               std::uint64_t seed, const DualSimOptions& opts = {});

// E_v[V_infinity] expressed through the moment table.
Estimate expected_absorbed_value(const CoefficientVector& v, const MomentTable& rho);

struct RecursionCoeffs {
    double alpha_n = 0.0;
    std::vector<double> alpha_nk;   // k = 0 .. max(n+kappa-1, 2n)
};

// Exact coefficients of the stationary-moment recursion (n <= 20).
RecursionCoeffs recursion_coeffs(const ModelParams& params, int n);

struct RecursionResidual {
    double residual = 0.0;
    double se = 0.0;
    double ci_scaled = 0.0;   // |residual| / se
};

RecursionResidual recursion_residual(const ModelParams& params, int n, const MomentTable& rho);

}  // namespace bernwf
