#pragma once

#include <optional>
#include <vector>

#include "bernwf/rng.hpp"
#include "bernwf/selection.hpp"

namespace bernwf {

// State of the Bernstein coefficient process: v_0..v_n in the Bernstein
// basis of degree n = dim - 1.
using CoefficientVector = std::vector<double>;

// Policy for the environmental operators, whose entries are expectations
// over the hypergeometric-pairing law. Exact enumeration is available for
// n + ell <= 12; above that an unbiased Monte Carlo entry estimate can be
// enabled by giving a per-entry standard-error budget.
struct EnvOpPolicy {
    std::optional<double> mc_se_budget;   // nullopt: refuse beyond exact range
    Rng* rng = nullptr;                   // required when mc_se_budget is set
};

// Coalescence C^{n,k}: dim n+1 -> n-k+2, for 2 <= k <= n.
CoefficientVector coalesce(const CoefficientVector& v, int k);

// Selective branching D^{n,ell}: dim n+1 -> n+ell, for 2 <= ell <= kappa.
CoefficientVector select_branch(const CoefficientVector& v, int ell, const SelectionKernel& sel);

// Mutation operators M^{n,k}_a (suffix shift) and M^{n,k}_A (prefix
// truncation): dim n+1 -> n-k+1, for 1 <= k <= n.
CoefficientVector mut_a(const CoefficientVector& v, int k);
CoefficientVector mut_A(const CoefficientVector& v, int k);

// Environmental branching S^{n,ell}_a / S^{n,ell}_A: dim n+1 -> n+ell+1,
// for 1 <= ell <= n.
CoefficientVector env_a(const CoefficientVector& v, int ell, const EnvOpPolicy& policy = {});
CoefficientVector env_A(const CoefficientVector& v, int ell, const EnvOpPolicy& policy = {});

// Duality functional H(x, w): the Bernstein polynomial with coefficients w
// evaluated at x.
double bernstein_eval(double x, const CoefficientVector& w);

// First and second x-derivatives of H(x, w), via finite differences of the
// coefficients (exact, not numerical differentiation).
double bernstein_derivative(double x, const CoefficientVector& w);
double bernstein_second_derivative(double x, const CoefficientVector& w);

}  // namespace bernwf
