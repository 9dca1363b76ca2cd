#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace bernwf {

// Binomial coefficients. Exact 64-bit integer arithmetic up to n = 62
// (C(62,31) < 2^63); log-gamma with exponentiation above that.
inline double log_binom(int n, int k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    if (n <= 62) {
        std::uint64_t c = 1;
        for (int i = 1; i <= k; ++i) {
            c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
        }
        return static_cast<double>(c);
    }
    return std::exp(log_binom(n, k));
}

// pow with the 0^0 = 1 convention used throughout the rate integrals.
inline double pow_conv(double base, int expnt) {
    if (expnt == 0) return 1.0;
    return std::pow(base, expnt);
}

}  // namespace bernwf
