#include "bernwf/distributions.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bernwf/binom.hpp"

namespace bernwf {

std::vector<double> binom_pmf(int n, double x) {
    if (n < 0 || x < 0.0 || x > 1.0) throw std::invalid_argument("binom_pmf: bad parameters");
    std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 0; i <= n; ++i) {
        pmf[static_cast<std::size_t>(i)] = binom(n, i) * pow_conv(x, i) * pow_conv(1.0 - x, n - i);
    }
    return pmf;
}

int binom_sample(int n, double x, Rng& rng) {
    if (n < 0 || x < 0.0 || x > 1.0) throw std::invalid_argument("binom_sample: bad parameters");
    if (n == 0 || x == 0.0) return 0;
    if (x == 1.0) return n;
    if (x > 0.5) return n - binom_sample(n, 1.0 - x, rng);
    // Inversion along the pmf recurrence; x <= 1/2 keeps (1-x)^n away from
    // underflow for the population sizes used here.
    double u = uniform01(rng);
    double p = std::pow(1.0 - x, n);
    double cdf = p;
    int i = 0;
    while (u > cdf && i < n) {
        p *= static_cast<double>(n - i) / (i + 1) * (x / (1.0 - x));
        ++i;
        cdf += p;
    }
    return i;
}

std::vector<double> hyp_pmf(int n, int k, int j) {
    if (n < 0 || k < 0 || j < 0 || n < std::max(k, j))
        throw std::invalid_argument("hyp_pmf: need n >= max(k, j) >= 0");
    int hi = std::min(k, j);
    int lo = std::max(0, j + k - n);
    std::vector<double> pmf(static_cast<std::size_t>(hi) + 1, 0.0);
    double denom = binom(n, j);
    for (int i = lo; i <= hi; ++i) {
        pmf[static_cast<std::size_t>(i)] = binom(k, i) * binom(n - k, j - i) / denom;
    }
    return pmf;
}

namespace {

int sample_from_pmf(const std::vector<double>& pmf, Rng& rng) {
    double u = uniform01(rng);
    double cdf = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        cdf += pmf[i];
        if (u <= cdf) return static_cast<int>(i);
    }
    return static_cast<int>(pmf.size()) - 1;
}

}  // namespace

int hyp_sample(int n, int k, int j, Rng& rng) { return sample_from_pmf(hyp_pmf(n, k, j), rng); }

void HPParams::check() const {
    if (pairs < 1 || 2 * pairs > total || red < 0 || red > total) {
        std::ostringstream os;
        os << "HPParams(total=" << total << ", pairs=" << pairs << ", red=" << red
           << ") violates 1 <= pairs, 2 pairs <= total, 0 <= red <= total";
        throw std::invalid_argument(os.str());
    }
}

namespace {

// Number of groups holding at least one red ball when the red positions are
// given as a bitmask. Positions {2m, 2m+1} for m < pairs form the pairs.
int count_red_groups(unsigned mask, int total, int pairs) {
    int count = 0;
    for (int m = 0; m < pairs; ++m) {
        if (mask & (3u << (2 * m))) ++count;
    }
    for (int pos = 2 * pairs; pos < total; ++pos) {
        if (mask & (1u << pos)) ++count;
    }
    return count;
}

std::vector<double> hp_pmf_enumerate(int total, int pairs, int red) {
    int groups = total - pairs;
    std::vector<double> pmf(static_cast<std::size_t>(groups) + 1, 0.0);
    // A uniform shuffle of distinguishable balls puts the red ones on a
    // uniformly random size-`red` subset of positions.
    std::vector<int> idx(static_cast<std::size_t>(red));
    std::iota(idx.begin(), idx.end(), 0);
    double cases = binom(total, red);
    for (;;) {
        unsigned mask = 0;
        for (int p : idx) mask |= 1u << p;
        pmf[static_cast<std::size_t>(count_red_groups(mask, total, pairs))] += 1.0 / cases;
        // next combination
        int i = red - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == total - red + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < red; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return pmf;
}

}  // namespace

std::vector<double> hp_pmf(const HPParams& params) {
    params.check();
    if (params.total > kHpExactLimit) {
        std::ostringstream os;
        os << "hp_pmf: total=" << params.total << " too large for exact pmf (limit "
           << kHpExactLimit << ")";
        throw std::invalid_argument(os.str());
    }
    // All pmfs in the exact regime fit in a small memoized table.
    static const std::map<std::array<int, 3>, std::vector<double>> table = [] {
        std::map<std::array<int, 3>, std::vector<double>> t;
        for (int total = 2; total <= kHpExactLimit; ++total)
            for (int pairs = 1; 2 * pairs <= total; ++pairs)
                for (int red = 0; red <= total; ++red)
                    t[{total, pairs, red}] = hp_pmf_enumerate(total, pairs, red);
        return t;
    }();
    return table.at({params.total, params.pairs, params.red});
}

int hp_sample(const HPParams& params, Rng& rng) {
    params.check();
    std::vector<char> ball(static_cast<std::size_t>(params.total), 0);
    std::fill(ball.begin(), ball.begin() + params.red, 1);
    std::shuffle(ball.begin(), ball.end(), rng);
    int count = 0;
    for (int m = 0; m < params.pairs; ++m) {
        if (ball[static_cast<std::size_t>(2 * m)] || ball[static_cast<std::size_t>(2 * m + 1)])
            ++count;
    }
    for (int pos = 2 * params.pairs; pos < params.total; ++pos) {
        if (ball[static_cast<std::size_t>(pos)]) ++count;
    }
    return count;
}

int ra_sample(int n, int ell, int i, Rng& rng) { return hp_sample({n + ell, ell, i}, rng); }

std::vector<double> ra_pmf(int n, int ell, int i) { return hp_pmf({n + ell, ell, i}); }

int rA_sample(int n, int ell, int i, Rng& rng) {
    return n - hp_sample({n + ell, ell, n + ell - i}, rng);
}

std::vector<double> rA_pmf(int n, int ell, int i) {
    std::vector<double> hp = hp_pmf({n + ell, ell, n + ell - i});
    std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
    for (int m = 0; m <= n; ++m) pmf[static_cast<std::size_t>(m)] = hp[static_cast<std::size_t>(n - m)];
    return pmf;
}

}  // namespace bernwf
