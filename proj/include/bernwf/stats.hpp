#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bernwf {

// Point estimate with a symmetric confidence half-width.
struct Estimate {
    double mean = 0.0;
    double se = 0.0;      // standard error of the mean
    double half = 0.0;    // CI half-width (z or t multiple of se)
    std::size_t n = 0;

    double lo() const { return mean - half; }
    double hi() const { return mean + half; }
};

// 97.5% Student-t quantiles for small degrees of freedom; normal beyond.
inline double t_quantile_975(std::size_t df) {
    static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                                   2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                                   2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                                   2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
    if (df == 0) return std::numeric_limits<double>::infinity();
    if (df <= 30) return table[df - 1];
    return 1.96;
}

inline Estimate mean_estimate(const std::vector<double>& xs, double z = 1.96) {
    Estimate e;
    e.n = xs.size();
    if (xs.empty()) return e;
    double s = 0.0;
    for (double x : xs) s += x;
    e.mean = s / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - e.mean) * (x - e.mean);
        double var = ss / static_cast<double>(xs.size() - 1);
        e.se = std::sqrt(var / static_cast<double>(xs.size()));
    }
    e.half = z * e.se;
    return e;
}

// Binomial proportion with normal-approximation CI.
inline Estimate proportion_estimate(std::size_t successes, std::size_t n, double z = 1.96) {
    Estimate e;
    e.n = n;
    if (n == 0) return e;
    e.mean = static_cast<double>(successes) / static_cast<double>(n);
    e.se = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(n));
    e.half = z * e.se;
    return e;
}

// Batch-means interval for a time-average computed from `batch_means`.
inline Estimate batch_means_estimate(const std::vector<double>& batch_means) {
    Estimate e = mean_estimate(batch_means, 1.0);
    e.half = t_quantile_975(batch_means.size() > 0 ? batch_means.size() - 1 : 0) * e.se;
    return e;
}

inline double z_score(const Estimate& a, const Estimate& b) {
    double denom = std::sqrt(a.se * a.se + b.se * b.se);
    if (denom == 0.0) return (a.mean == b.mean) ? 0.0 : std::numeric_limits<double>::infinity();
    return (a.mean - b.mean) / denom;
}

}  // namespace bernwf
