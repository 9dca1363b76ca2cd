#include "bernwf/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bernwf/binom.hpp"
#include "bernwf/distributions.hpp"

namespace bernwf {

namespace {

int degree_of(const CoefficientVector& v) {
    if (v.empty()) throw std::invalid_argument("coefficient vector must have dim >= 1");
    return static_cast<int>(v.size()) - 1;
}

}  // namespace

CoefficientVector coalesce(const CoefficientVector& v, int k) {
    int n = degree_of(v);
    if (n < 2 || k < 2 || k > n) throw std::invalid_argument("coalesce requires 2 <= k <= n");
    int m = n - k + 1;   // output degree
    CoefficientVector out(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) {
        double w = static_cast<double>(i) / m;
        out[static_cast<std::size_t>(i)] =
            w * v[static_cast<std::size_t>(i + k - 1)] + (1.0 - w) * v[static_cast<std::size_t>(i)];
    }
    return out;
}

CoefficientVector select_branch(const CoefficientVector& v, int ell, const SelectionKernel& sel) {
    int n = degree_of(v);
    if (n < 1 || ell < 2 || ell > sel.kappa)
        throw std::invalid_argument("select_branch requires 2 <= ell <= kappa and n >= 1");
    CoefficientVector out(static_cast<std::size_t>(n + ell));
    for (int i = 0; i <= n + ell - 1; ++i) {
        // K ~ Hyp(n+ell-1, i, ell): type-a lines falling into the branching
        // group when i of the n+ell-1 lines carry type a.
        std::vector<double> pk = hyp_pmf(n + ell - 1, i, ell);
        double e = 0.0;
        for (int K = 0; K < static_cast<int>(pk.size()); ++K) {
            double prob = pk[static_cast<std::size_t>(K)];
            if (prob == 0.0) continue;
            double pa = sel.p_at(ell, K);
            e += prob * (pa * v[static_cast<std::size_t>(i + 1 - K)] +
                         (1.0 - pa) * v[static_cast<std::size_t>(i - K)]);
        }
        out[static_cast<std::size_t>(i)] = e;
    }
    return out;
}

CoefficientVector mut_a(const CoefficientVector& v, int k) {
    int n = degree_of(v);
    if (k < 1 || k > n) throw std::invalid_argument("mut_a requires 1 <= k <= n");
    return CoefficientVector(v.begin() + k, v.end());
}

CoefficientVector mut_A(const CoefficientVector& v, int k) {
    int n = degree_of(v);
    if (k < 1 || k > n) throw std::invalid_argument("mut_A requires 1 <= k <= n");
    return CoefficientVector(v.begin(), v.end() - k);
}

namespace {

enum class EnvSide { a, A };

CoefficientVector env_apply(const CoefficientVector& v, int ell, EnvSide side,
                            const EnvOpPolicy& policy) {
    int n = degree_of(v);
    if (ell < 1 || ell > n) throw std::invalid_argument("env operator requires 1 <= ell <= n");
    CoefficientVector out(static_cast<std::size_t>(n + ell) + 1);
    if (n + ell <= kHpExactLimit) {
        for (int i = 0; i <= n + ell; ++i) {
            std::vector<double> pr =
                side == EnvSide::a ? ra_pmf(n, ell, i) : rA_pmf(n, ell, i);
            double e = 0.0;
            for (int m = 0; m <= n; ++m) e += pr[static_cast<std::size_t>(m)] * v[static_cast<std::size_t>(m)];
            out[static_cast<std::size_t>(i)] = e;
        }
        return out;
    }
    if (!policy.mc_se_budget.has_value() || policy.rng == nullptr) {
        std::ostringstream os;
        os << "env operator at n=" << n << ", ell=" << ell << " exceeds exact limit n+ell <= "
           << kHpExactLimit << "; enable Monte Carlo operator mode with an SE budget";
        throw std::invalid_argument(os.str());
    }
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    double spread = (*hi - *lo) / 2.0;
    long samples = 1;
    if (spread > 0.0) {
        double target = spread / *policy.mc_se_budget;
        samples = std::clamp(static_cast<long>(std::ceil(target * target)), 16L, 1000000L);
    }
    Rng& rng = *policy.rng;
    // i = 0 and i = n+ell are degenerate (no red / all red); keep them exact
    out.front() = v.front();
    out.back() = v.back();
    for (int i = 1; i < n + ell; ++i) {
        double acc = 0.0;
        for (long s = 0; s < samples; ++s) {
            int r = side == EnvSide::a ? ra_sample(n, ell, i, rng) : rA_sample(n, ell, i, rng);
            acc += v[static_cast<std::size_t>(r)];
        }
        out[static_cast<std::size_t>(i)] = acc / static_cast<double>(samples);
    }
    return out;
}

}  // namespace

CoefficientVector env_a(const CoefficientVector& v, int ell, const EnvOpPolicy& policy) {
    return env_apply(v, ell, EnvSide::a, policy);
}

CoefficientVector env_A(const CoefficientVector& v, int ell, const EnvOpPolicy& policy) {
    return env_apply(v, ell, EnvSide::A, policy);
}

double bernstein_eval(double x, const CoefficientVector& w) {
    int m = degree_of(w);
    double acc = 0.0;
    for (int i = 0; i <= m; ++i) {
        acc += w[static_cast<std::size_t>(i)] * binom(m, i) * pow_conv(x, i) *
               pow_conv(1.0 - x, m - i);
    }
    return acc;
}

double bernstein_derivative(double x, const CoefficientVector& w) {
    int m = degree_of(w);
    if (m == 0) return 0.0;
    CoefficientVector diff(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        diff[static_cast<std::size_t>(i)] =
            w[static_cast<std::size_t>(i + 1)] - w[static_cast<std::size_t>(i)];
    return m * bernstein_eval(x, diff);
}

double bernstein_second_derivative(double x, const CoefficientVector& w) {
    int m = degree_of(w);
    if (m <= 1) return 0.0;
    CoefficientVector diff2(static_cast<std::size_t>(m) - 1);
    for (int i = 0; i + 2 <= m; ++i)
        diff2[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i + 2)] -
                                             2.0 * w[static_cast<std::size_t>(i + 1)] +
                                             w[static_cast<std::size_t>(i)];
    return static_cast<double>(m) * (m - 1) * bernstein_eval(x, diff2);
}

}  // namespace bernwf
