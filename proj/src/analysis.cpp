#include "bernwf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bernwf/binom.hpp"
#include "bernwf/parallel.hpp"

namespace bernwf {

namespace {

// Dual states at the sorted query times (right-continuous path).
std::vector<CoefficientVector> dual_states_at(const ModelParams& params,
                                              const CoefficientVector& v0,
                                              const std::vector<double>& ts,
                                              const DualSimOptions& opts, Rng& rng) {
    std::vector<CoefficientVector> out;
    out.reserve(ts.size());
    DualState state{v0, Allele::a, 0.0};
    for (double tau : ts) {
        while (state.clock < tau && !state.absorbed()) {
            auto res = step(params, state, rng, opts, tau);
            if (!res) {
                state.clock = std::max(state.clock, tau);
                break;
            }
        }
        out.push_back(state.v);
    }
    return out;
}

}  // namespace

std::vector<DualityCell> duality_grid(const ModelParams& params, const std::vector<double>& xs,
                                      const std::vector<double>& ts,
                                      const std::vector<CoefficientVector>& vs, std::size_t reps,
                                      std::uint64_t seed, const DualityOptions& opts) {
    if (!std::is_sorted(ts.begin(), ts.end()))
        throw std::invalid_argument("duality_grid: query times must be ascending");
    const std::size_t nx = xs.size(), nt = ts.size(), nv = vs.size();

    // forward side: one ensemble per x, reused across t and v
    std::vector<std::vector<Estimate>> lhs(nv * nt, std::vector<Estimate>(nx));
    for (std::size_t xi = 0; xi < nx; ++xi) {
        ForwardConfig cfg;
        cfg.x0 = xs[xi];
        cfg.t_end = ts.empty() ? 0.0 : ts.back();
        cfg.dt = opts.dt;
        std::vector<std::vector<double>> values(reps);
        for_each_replica(reps, [&](std::size_t rep) {
            Rng rng = make_rng(derive_seed(seed, 1000 + xi), rep);
            values[rep] = simulate_values(cfg, params, ts, rng);
        });
        std::vector<double> hv(reps);
        for (std::size_t vi = 0; vi < nv; ++vi) {
            for (std::size_t ti = 0; ti < nt; ++ti) {
                for (std::size_t rep = 0; rep < reps; ++rep)
                    hv[rep] = bernstein_eval(values[rep][ti], vs[vi]);
                lhs[vi * nt + ti][xi] = mean_estimate(hv);
            }
        }
    }

    // dual side: one ensemble per v, reused across t and x
    std::vector<std::vector<Estimate>> rhs(nv * nt, std::vector<Estimate>(nx));
    for (std::size_t vi = 0; vi < nv; ++vi) {
        std::vector<std::vector<CoefficientVector>> states(reps);
        for_each_replica(reps, [&](std::size_t rep) {
            Rng rng = make_rng(derive_seed(seed, 2000 + vi), rep);
            states[rep] = dual_states_at(params, vs[vi], ts, opts.dual, rng);
        });
        std::vector<double> hv(reps);
        for (std::size_t ti = 0; ti < nt; ++ti) {
            for (std::size_t xi = 0; xi < nx; ++xi) {
                for (std::size_t rep = 0; rep < reps; ++rep)
                    hv[rep] = bernstein_eval(xs[xi], states[rep][ti]);
                rhs[vi * nt + ti][xi] = mean_estimate(hv);
            }
        }
    }

    std::vector<DualityCell> cells;
    cells.reserve(nv * nt * nx);
    for (std::size_t vi = 0; vi < nv; ++vi)
        for (std::size_t ti = 0; ti < nt; ++ti)
            for (std::size_t xi = 0; xi < nx; ++xi) {
                DualityCell c;
                c.x = xs[xi];
                c.t = ts[ti];
                c.v_index = vi;
                c.lhs = lhs[vi * nt + ti][xi];
                c.rhs = rhs[vi * nt + ti][xi];
                c.z = z_score(c.lhs, c.rhs);
                cells.push_back(c);
            }
    return cells;
}

DualityGap duality_gap(const ModelParams& params, double x, const CoefficientVector& v, double t,
                       std::size_t reps, std::uint64_t seed, const DualityOptions& opts) {
    if (t == 0.0) {
        // both sides equal H(x, v) exactly
        double h = bernstein_eval(x, v);
        Estimate e;
        e.mean = h;
        e.n = reps;
        return {e, e, 0.0};
    }
    auto cells = duality_grid(params, {x}, {t}, {v}, reps, seed, opts);
    return {cells.front().lhs, cells.front().rhs, cells.front().z};
}

double generator_residual(const ModelParams& params, double x, const CoefficientVector& w) {
    const int m = static_cast<int>(w.size()) - 1;
    if (m < 0) throw std::invalid_argument("generator_residual: empty coefficient vector");
    if (m + 1 > 7)
        throw std::invalid_argument("generator_residual: dim(w) > 7 exceeds exact env mode");
    const double h0 = bernstein_eval(x, w);
    auto f = [&](double y) { return bernstein_eval(y, w); };

    // forward generator applied to H(., w) at x
    double a_side = 0.0;
    a_side += 0.5 * params.lambda0 * x * (1.0 - x) * bernstein_second_derivative(x, w);
    for (const Atom& at : params.lambda_tail.atoms()) {
        double r = at.location;
        a_side += at.weight / (r * r) *
                  (x * (f(x + r * (1.0 - x)) - h0) + (1.0 - x) * (f(x - r * x) - h0));
    }
    double fprime = bernstein_derivative(x, w);
    a_side += params.sel.d_poly(x) * fprime;
    a_side += (params.theta_a * (1.0 - x) - params.theta_A * x) * fprime;
    for (const Atom& at : params.mu.atoms()) {
        a_side += at.weight / std::abs(at.location) *
                  (f(x + at.location * x * (1.0 - x)) - h0);
    }
    for (const Atom& at : params.nu.atoms()) {
        double jumped = at.location >= 0.0 ? x + at.location * (1.0 - x)
                                           : x + at.location * x;
        a_side += at.weight / std::abs(at.location) * (f(jumped) - h0);
    }

    // dual rate matrix applied to H(x, .) at w
    double b_side = 0.0;
    EventCatalog cat = enumerate_events(params, m);
    for (const DualEvent& ev : cat.events) {
        CoefficientVector wn;
        switch (ev.kind) {
            case DualEvent::Kind::coalesce: wn = coalesce(w, ev.size); break;
            case DualEvent::Kind::select: wn = select_branch(w, ev.size, params.sel); break;
            case DualEvent::Kind::mutation:
                wn = ev.type == Allele::a ? mut_a(w, ev.size) : mut_A(w, ev.size);
                break;
            case DualEvent::Kind::environment:
                wn = ev.type == Allele::a ? env_a(w, ev.size) : env_A(w, ev.size);
                break;
        }
        b_side += ev.rate * (bernstein_eval(x, wn) - h0);
    }
    return std::abs(a_side - b_side);
}

FixationResult fixation_probability(const ModelParams& params, double x,
                                    const FixationOptions& opts) {
    if (params.has_mutations())
        throw std::invalid_argument("fixation_probability requires the mutation-free regime");
    double burn = opts.burn_in.value_or(0.1 * opts.horizon);
    Rng rng = make_rng(derive_seed(opts.seed, 11), 0);
    FixationResult out;
    out.dual_estimate =
        stationary_functional(params, x, burn, opts.horizon, opts.batches, opts.dual, rng);
    if (opts.with_forward) {
        ForwardConfig cfg;
        cfg.x0 = x;
        cfg.t_end = opts.forward_t_end;
        cfg.dt = opts.forward_dt;
        out.forward = forward_fixation(cfg, params, opts.forward_reps, derive_seed(opts.seed, 12));
    }
    return out;
}

MomentTable stationary_moments(const ModelParams& params, int n_max, std::size_t reps,
                               std::uint64_t seed, const DualSimOptions& opts) {
    if (!params.has_mutations())
        throw std::invalid_argument("stationary_moments requires mutations (theta or nu nonzero)");
    if (!opts.force && !check_assumption(params).holds)
        throw std::invalid_argument(
            "stationary_moments refused: rate-balance condition fails (see check_assumption)");
    if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
    MomentTable table;
    table.rho.resize(static_cast<std::size_t>(n_max) + 1);
    table.rho[0].mean = 1.0;   // e_0 is already the absorbed scalar 1
    table.rho[0].n = reps;
    for (int n = 1; n <= n_max; ++n) {
        std::vector<double> vals(reps);
        for_each_replica(reps, [&](std::size_t rep) {
            Rng rng = make_rng(derive_seed(seed, 100 + static_cast<std::uint64_t>(n)), rep);
            CoefficientVector en(static_cast<std::size_t>(n) + 1, 0.0);
            en.back() = 1.0;
            DualPathSummary sum = simulate_until(params, en, 1e9, opts, rng);
            if (!sum.absorbed)
                throw std::runtime_error("stationary_moments: dual path failed to absorb");
            vals[rep] = sum.final_value;
        });
        table.rho[static_cast<std::size_t>(n)] = mean_estimate(vals);
    }
    return table;
}

Estimate expected_absorbed_value(const CoefficientVector& v, const MomentTable& rho) {
    const int n = static_cast<int>(v.size()) - 1;
    if (n < 0) throw std::invalid_argument("expected_absorbed_value: empty vector");
    if (n > rho.max_n())
        throw std::invalid_argument("expected_absorbed_value: moment table too short");
    Estimate out;
    double var = 0.0;
    for (int k = 0; k <= n; ++k) {
        double coef = 0.0;
        for (int i = 0; i <= k; ++i) {
            double sign = ((k - i) % 2 == 0) ? 1.0 : -1.0;
            coef += binom(n, i) * binom(n - i, k - i) * sign * v[static_cast<std::size_t>(i)];
        }
        const Estimate& rk = rho.rho[static_cast<std::size_t>(k)];
        out.mean += coef * rk.mean;
        var += coef * coef * rk.se * rk.se;
    }
    out.se = std::sqrt(var);
    out.half = 1.96 * out.se;
    out.n = rho.rho.back().n;
    return out;
}

RecursionCoeffs recursion_coeffs(const ModelParams& params, int n) {
    if (n < 1 || n > 20)
        throw std::invalid_argument("recursion_coeffs: exact binomial range is 1 <= n <= 20");
    const int kappa = params.sel.kappa;
    const int kmax = std::max(n + kappa - 1, 2 * n);
    RecursionCoeffs rc;
    rc.alpha_n = total_dual_rate(params, n);
    rc.alpha_nk.assign(static_cast<std::size_t>(kmax) + 1, 0.0);

    for (int k = 0; k <= n - 1; ++k) {
        double a = binom(n, k) * (mut_rate(params, n, n - k, Allele::a) +
                                  (k == n - 1 ? params.theta_a : 0.0));
        if (k >= 1) a += binom(n, k - 1) * lambda_rate(params, n, n - k + 1);
        rc.alpha_nk[static_cast<std::size_t>(k)] = a;
    }
    for (int k = n; k <= kmax; ++k) {
        double a = 0.0;
        if (k <= n + kappa - 1) {
            for (int ell = std::max(2, k + 1 - n); ell <= kappa; ++ell) {
                double inner = 0.0;
                for (int i = n; i <= k; ++i) {
                    if (i + 1 - n > ell || i > n + ell - 1) continue;
                    double b = binom(n + ell - 1 - i, k - i) * binom(ell, n + ell - 1 - i);
                    if (b == 0.0) continue;
                    double sign = ((k - i) % 2 == 0) ? 1.0 : -1.0;
                    inner += sign * params.sel.p_at(ell, i + 1 - n) * b;
                }
                a += n * params.sel.beta_at(ell) * inner;
            }
        }
        if (k <= 2 * n) {
            if (k >= n + 1) a += binom(n, k - n) * env_rate(params, n, k - n, Allele::A);
            for (int ell = std::max(1, k - n); ell <= n; ++ell) {
                double sigma_a = env_rate(params, n, ell, Allele::a);
                if (sigma_a == 0.0) continue;
                double inner = 0.0;
                for (int i = n; i <= k; ++i) {
                    double b = binom(n + ell - i, k - i) * binom(ell, n + ell - i);
                    if (b == 0.0) continue;
                    double sign = ((k - i) % 2 == 0) ? 1.0 : -1.0;
                    inner += sign * std::pow(2.0, n + ell - i) * b;
                }
                a += binom(n, ell) * sigma_a * inner;
            }
        }
        rc.alpha_nk[static_cast<std::size_t>(k)] = a;
    }
    return rc;
}

RecursionResidual recursion_residual(const ModelParams& params, int n, const MomentTable& rho) {
    RecursionCoeffs rc = recursion_coeffs(params, n);
    const int kmax = static_cast<int>(rc.alpha_nk.size()) - 1;
    if (rho.max_n() < kmax)
        throw std::invalid_argument("recursion_residual: moment table too short");
    double resid = rc.alpha_n * rho.rho[static_cast<std::size_t>(n)].mean;
    double var = 0.0;
    for (int k = 0; k <= kmax; ++k) {
        resid -= rc.alpha_nk[static_cast<std::size_t>(k)] * rho.rho[static_cast<std::size_t>(k)].mean;
        double coef = -rc.alpha_nk[static_cast<std::size_t>(k)] + (k == n ? rc.alpha_n : 0.0);
        double se = rho.rho[static_cast<std::size_t>(k)].se;
        var += coef * coef * se * se;
    }
    RecursionResidual out;
    out.residual = std::abs(resid);
    out.se = std::sqrt(var);
    out.ci_scaled = out.se > 0.0 ? out.residual / out.se
                                 : (out.residual == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    return out;
}

}  // namespace bernwf
