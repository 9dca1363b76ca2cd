#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bernwf/selection.hpp"

namespace bernwf {

// Allowed support for the atoms of a measure.
enum class Support {
    unit_half_open,   // (0,1]   (Lambda tail)
    signed_open,      // (-1,1) \ {0}   (mu and nu)
};

struct Atom {
    double location = 0.0;
    double weight = 0.0;
};

// Finite measure given by finitely many weighted point masses. All rate
// integrals over such a measure reduce to exact finite sums.
class AtomicMeasure {
  public:
    AtomicMeasure() = default;

    // Merges duplicate locations and validates support and weights.
    // Throws std::invalid_argument on violation.
    AtomicMeasure(std::vector<Atom> atoms, Support support);

    const std::vector<Atom>& atoms() const { return atoms_; }
    bool empty() const { return atoms_.empty(); }

    double mass() const;

    static AtomicMeasure zero(Support support) { return AtomicMeasure({}, support); }

  private:
    std::vector<Atom> atoms_;
};

// Full parameter set of the model: neutral reproduction (lambda0 atom at 0
// plus an atomic tail on (0,1]), environment mu, coordinated mutation nu,
// individual mutation rates, and the selection kernel.
struct ModelParams {
    double lambda0 = 0.0;
    AtomicMeasure lambda_tail = AtomicMeasure::zero(Support::unit_half_open);
    AtomicMeasure mu = AtomicMeasure::zero(Support::signed_open);
    AtomicMeasure nu = AtomicMeasure::zero(Support::signed_open);
    double theta_a = 0.0;
    double theta_A = 0.0;
    SelectionKernel sel = SelectionKernel::neutral();

    double theta() const { return theta_a + theta_A; }
    bool has_mutations() const { return theta() > 0.0 || !nu.empty(); }

    // Throws std::invalid_argument if any invariant is violated.
    void validate() const;
};

enum class Allele { a, A };

inline char allele_char(Allele c) { return c == Allele::a ? 'a' : 'A'; }

// --- rate integrals -------------------------------------------------------

// Rate at which a fixed group of ell among n lines coalesces.
double lambda_rate(const ModelParams& p, int n, int ell);

// Coordinated-mutation rate m^c_{n,ell} (driven by nu).
double mut_rate(const ModelParams& p, int n, int ell, Allele c);

// Environmental branching rate sigma^c_{n,ell} (driven by mu).
double env_rate(const ModelParams& p, int n, int ell, Allele c);

// --- recurrence condition diagnostics --------------------------------------

double b_beta(const ModelParams& p);

// Integral of |log(1-r)|/r^2 against Lambda; atoms at 0 or 1 contribute
// +infinity.
double c_lambda(const ModelParams& p);

struct AssumptionReport {
    double branch_intensity = 0.0;   // b(beta)
    double coalescence_strength = 0.0;  // c(Lambda), may be +inf
    double mu_mass = 0.0;
    double nu_mass = 0.0;
    double theta = 0.0;
    bool holds = false;
};

// Checks the rate-balance condition b + mu_mass < c + nu_mass + theta
// that guarantees positive recurrence / absorption of the dual.
AssumptionReport check_assumption(const ModelParams& p);

// Total transition rate out of a dual state with n lines.
double total_dual_rate(const ModelParams& p, int n);

// Constant C with total_dual_rate(n) <= C n^2 (Lambda mass on [0,1) plus
// mu, nu masses, theta and total selection rate).
double rate_bound_constant(const ModelParams& p);

}  // namespace bernwf
