#pragma once

#include <string>
#include <vector>

namespace bernwf {

// Frequency-dependent selection mechanism: interactions of size ell in
// {2,..,kappa} fire at rate beta_ell, and a group with i carriers propagates
// the first type with probability p[ell][i].
struct SelectionKernel {
    int kappa = 2;
    std::vector<double> beta;             // beta[j] is the rate for ell = j + 2
    std::vector<std::vector<double>> p;   // p[j][i], i = 0..ell, for ell = j + 2

    // Kernel with all rates zero (selection switched off).
    static SelectionKernel neutral();

    double beta_at(int ell) const { return beta.at(static_cast<std::size_t>(ell - 2)); }
    double p_at(int ell, int i) const {
        return p.at(static_cast<std::size_t>(ell - 2)).at(static_cast<std::size_t>(i));
    }

    double beta_total() const;            // sum of beta_ell
    double branch_intensity() const;      // sum of beta_ell * (ell - 1)

    // Selection polynomial, evaluated through its Bernstein form.
    double d_poly(double x) const;

    // All invariant violations in human-readable form; empty means valid.
    std::vector<std::string> validate() const;
};

}  // namespace bernwf
