#pragma once

// Test-only oracles, kept independent of the library implementation paths
// they are used to check.

#include <cmath>
#include <vector>

#include "bernwf/operators.hpp"
#include "bernwf/selection.hpp"

namespace bernwf::testing {

inline double binom_oracle(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return c;
}

// Closed-form pmf for the hypergeometric pairing: count red-position
// subsets by (pairs hit, red singletons) instead of enumerating them.
// total balls, `pairs` pairs (rest singletons), `red` red balls.
inline std::vector<double> hp_pmf_oracle(int total, int pairs, int red) {
    int groups = total - pairs;
    std::vector<double> pmf(static_cast<std::size_t>(groups) + 1, 0.0);
    double cases = binom_oracle(total, red);
    for (int j = 0; j <= pairs; ++j) {          // pairs containing >= 1 red
        for (int s = 0; s + j <= groups; ++s) {  // red singletons
            int in_pairs = red - s;              // red balls inside the j pairs
            int doubles = in_pairs - j;          // pairs holding two reds
            if (doubles < 0 || doubles > j) continue;
            double ways = binom_oracle(pairs, j) * binom_oracle(j, doubles) *
                          std::pow(2.0, j - doubles) * binom_oracle(total - 2 * pairs, s);
            pmf[static_cast<std::size_t>(j + s)] += ways / cases;
        }
    }
    return pmf;
}

// R^a_{n,ell,i} with the ell = 0 convention (no pairs: R = i).
inline std::vector<double> ra_pmf_oracle(int n, int ell, int i) {
    if (ell == 0) {
        std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
        pmf[static_cast<std::size_t>(i)] = 1.0;
        return pmf;
    }
    return hp_pmf_oracle(n + ell, ell, i);
}

// Monomial-coefficient expansion of the selection polynomial; evaluation by
// Horner's rule.
inline double d_poly_monomial_oracle(const SelectionKernel& sel, double x) {
    std::vector<double> coef(static_cast<std::size_t>(sel.kappa) + 1, 0.0);
    for (int ell = 2; ell <= sel.kappa; ++ell) {
        double b = sel.beta_at(ell);
        for (int i = 0; i <= ell; ++i) {
            double base = b * binom_oracle(ell, i) * (sel.p_at(ell, i) - static_cast<double>(i) / ell);
            for (int j = 0; j <= ell - i; ++j) {
                double sign = (j % 2 == 0) ? 1.0 : -1.0;
                coef[static_cast<std::size_t>(i + j)] += base * sign * binom_oracle(ell - i, j);
            }
        }
    }
    double acc = 0.0;
    for (int k = sel.kappa; k >= 0; --k) acc = acc * x + coef[static_cast<std::size_t>(k)];
    return acc;
}

// Operator as an explicit matrix, built column-by-column from unit vectors.
template <typename Op>
std::vector<std::vector<double>> operator_matrix(int n, Op&& op) {
    std::vector<std::vector<double>> columns;
    for (int j = 0; j <= n; ++j) {
        CoefficientVector e(static_cast<std::size_t>(n) + 1, 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        columns.push_back(op(e));
    }
    std::size_t rows = columns.front().size();
    std::vector<std::vector<double>> mat(rows, std::vector<double>(columns.size()));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < columns.size(); ++c) mat[r][c] = columns[c][r];
    return mat;
}

}  // namespace bernwf::testing
