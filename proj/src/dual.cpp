#include "bernwf/dual.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bernwf/binom.hpp"

namespace bernwf {

namespace {

// C(n,k) * w * r^er * (1-r)^e1mr, switching to log space above the exact
// binomial range so that huge-n states never overflow.
double weighted_binom_term(int n, int k, double w, double r, int er, int e1mr) {
    if (n <= 62) return binom(n, k) * w * pow_conv(r, er) * pow_conv(1.0 - r, e1mr);
    if ((er > 0 && r == 0.0) || (e1mr > 0 && r == 1.0)) return 0.0;
    double lt = log_binom(n, k) + std::log(w);
    if (er > 0) lt += er * std::log(r);
    if (e1mr > 0) lt += e1mr * std::log1p(-r);
    return std::exp(lt);
}

const AtomicMeasure& signed_measure(const ModelParams& params, DualEvent::Kind kind) {
    return kind == DualEvent::Kind::mutation ? params.nu : params.mu;
}

}  // namespace

const char* to_string(DualEvent::Kind kind) {
    switch (kind) {
        case DualEvent::Kind::coalesce: return "coalesce";
        case DualEvent::Kind::select: return "select";
        case DualEvent::Kind::mutation: return "mutation";
        case DualEvent::Kind::environment: return "environment";
    }
    return "?";
}

double coalesce_event_rate(const ModelParams& params, int n, int k) {
    double rate = (k == 2) ? binom(n, 2) * params.lambda0 : 0.0;
    for (const Atom& a : params.lambda_tail.atoms())
        rate += weighted_binom_term(n, k, a.weight, a.location, k - 2, n - k);
    return rate;
}

double select_event_rate(const ModelParams& params, int n, int ell) {
    return n * params.sel.beta_at(ell);
}

namespace {

double signed_group_event_rate(const ModelParams& params, DualEvent::Kind kind, int n, int ell,
                               Allele c) {
    double rate = 0.0;
    for (const Atom& a : signed_measure(params, kind).atoms()) {
        bool matches = (c == Allele::a) ? a.location > 0.0 : a.location < 0.0;
        if (!matches) continue;
        rate += weighted_binom_term(n, ell, a.weight, std::abs(a.location), ell - 1, n - ell);
    }
    return rate;
}

}  // namespace

double mut_event_rate(const ModelParams& params, int n, int ell, Allele c) {
    double rate = signed_group_event_rate(params, DualEvent::Kind::mutation, n, ell, c);
    if (ell == 1) rate += n * (c == Allele::a ? params.theta_a : params.theta_A);
    return rate;
}

double env_event_rate(const ModelParams& params, int n, int ell, Allele c) {
    return signed_group_event_rate(params, DualEvent::Kind::environment, n, ell, c);
}

EventCatalog enumerate_events(const ModelParams& params, int n) {
    EventCatalog cat;
    if (n <= 0) return cat;
    auto push = [&cat](DualEvent::Kind kind, int size, Allele type, double rate) {
        if (rate <= 0.0) return;
        cat.events.push_back({kind, size, type, rate});
        cat.total_rate += rate;
    };
    for (int k = 2; k <= n; ++k)
        push(DualEvent::Kind::coalesce, k, Allele::a, coalesce_event_rate(params, n, k));
    for (int ell = 2; ell <= params.sel.kappa; ++ell)
        push(DualEvent::Kind::select, ell, Allele::a, select_event_rate(params, n, ell));
    for (int ell = 1; ell <= n; ++ell) {
        for (Allele c : {Allele::a, Allele::A}) {
            push(DualEvent::Kind::mutation, ell, c, mut_event_rate(params, n, ell, c));
            push(DualEvent::Kind::environment, ell, c, env_event_rate(params, n, ell, c));
        }
    }
    return cat;
}

std::optional<StepResult> step(const ModelParams& params, DualState& state, Rng& rng,
                               const DualSimOptions& opts, double t_cap) {
    if (state.absorbed()) throw std::logic_error("step on absorbed dual state");
    EventCatalog cat = enumerate_events(params, state.lines());
    if (cat.total_rate <= 0.0) return std::nullopt;
    double wait = std::exponential_distribution<double>(cat.total_rate)(rng);
    if (state.clock + wait > t_cap) {
        state.clock = t_cap;
        return std::nullopt;
    }
    double u = uniform01(rng) * cat.total_rate;
    const DualEvent* chosen = &cat.events.back();
    double cdf = 0.0;
    for (const DualEvent& ev : cat.events) {
        cdf += ev.rate;
        if (u <= cdf) {
            chosen = &ev;
            break;
        }
    }
    EnvOpPolicy policy;
    policy.mc_se_budget = opts.env_mc_se_budget;
    policy.rng = &rng;
    switch (chosen->kind) {
        case DualEvent::Kind::coalesce:
            state.v = coalesce(state.v, chosen->size);
            break;
        case DualEvent::Kind::select:
            state.v = select_branch(state.v, chosen->size, params.sel);
            break;
        case DualEvent::Kind::mutation:
            state.v = chosen->type == Allele::a ? mut_a(state.v, chosen->size)
                                                : mut_A(state.v, chosen->size);
            state.label = chosen->type;
            break;
        case DualEvent::Kind::environment:
            state.v = chosen->type == Allele::a ? env_a(state.v, chosen->size, policy)
                                                : env_A(state.v, chosen->size, policy);
            state.label = chosen->type;
            break;
    }
    state.clock += wait;
    if (state.lines() > opts.l_max) {
        std::ostringstream os;
        os << "dual line count " << state.lines() << " exceeded l_max=" << opts.l_max
           << "; the branching/environment intensity likely dominates "
              "coalescence/mutation (see check_assumption)";
        throw ExplosionError(os.str());
    }
    return StepResult{*chosen, wait};
}

namespace {

double sup_norm(const CoefficientVector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

void count_event(DualEventCounts& counts, const DualEvent& ev) {
    switch (ev.kind) {
        case DualEvent::Kind::coalesce: ++counts.coalesce; break;
        case DualEvent::Kind::select: ++counts.select; break;
        case DualEvent::Kind::mutation:
            ev.type == Allele::a ? ++counts.mut_a : ++counts.mut_A;
            break;
        case DualEvent::Kind::environment:
            ev.type == Allele::a ? ++counts.env_a : ++counts.env_A;
            break;
    }
}

}  // namespace

DualPathSummary simulate_until(const ModelParams& params, const CoefficientVector& v0,
                               double t_end, const DualSimOptions& opts, Rng& rng,
                               const DualObserver& on_event) {
    DualPathSummary out;
    DualState state{v0, Allele::a, 0.0};
    const bool frozen_boundary = !params.has_mutations() && v0.size() >= 2;
    const double front0 = v0.empty() ? 0.0 : v0.front();
    const double back0 = v0.empty() ? 0.0 : v0.back();
    const double sup0 = sup_norm(v0);
    while (!state.absorbed() && state.clock < t_end) {
        auto res = step(params, state, rng, opts, t_end);
        if (!res) {
            state.clock = t_end;
            break;
        }
        if (on_event) on_event(state, res->event);
        count_event(out.counts, res->event);
        if (frozen_boundary &&
            (state.v.front() != front0 || state.v.back() != back0)) {
            throw std::logic_error("dual invariant breach: boundary coefficients changed "
                                   "in a mutation-free model");
        }
        if (sup_norm(state.v) > sup0 + 1e-12 * (1.0 + sup0)) {
            throw std::logic_error("dual invariant breach: sup-norm expanded");
        }
    }
    out.absorbed = state.absorbed();
    if (out.absorbed) {
        out.absorb_time = state.clock;
        out.final_value = state.v.front();
    }
    out.final_state = std::move(state);
    return out;
}

Estimate stationary_functional(const ModelParams& params, double x, double burn_in,
                               double horizon, int batches, const DualSimOptions& opts,
                               Rng& rng) {
    if (params.has_mutations())
        throw std::invalid_argument(
            "stationary_functional requires the mutation-free regime (theta = 0, nu = 0)");
    if (!opts.force && !check_assumption(params).holds)
        throw std::invalid_argument(
            "stationary_functional refused: rate-balance condition fails (see check_assumption)");
    if (batches < 2 || horizon <= 0.0 || burn_in < 0.0)
        throw std::invalid_argument("stationary_functional: bad burn_in/horizon/batches");

    const double t_total = burn_in + horizon;
    const double width = horizon / batches;
    std::vector<double> acc(static_cast<std::size_t>(batches), 0.0);
    DualState state{{0.0, 1.0}, Allele::a, 0.0};
    for (;;) {
        double h = bernstein_eval(x, state.v);
        double seg_start = state.clock;
        auto res = step(params, state, rng, opts, t_total);
        double seg_end = res ? state.clock : t_total;
        // deposit h over [seg_start, seg_end) into the batch bins
        double lo = std::max(seg_start, burn_in);
        if (lo < seg_end) {
            int b0 = std::min(batches - 1, static_cast<int>((lo - burn_in) / width));
            int b1 = std::min(batches - 1, static_cast<int>((seg_end - burn_in) / width));
            for (int b = b0; b <= b1; ++b) {
                double bin_lo = burn_in + b * width;
                double bin_hi = bin_lo + width;
                double overlap = std::min(seg_end, bin_hi) - std::max(lo, bin_lo);
                if (overlap > 0.0) acc[static_cast<std::size_t>(b)] += h * overlap;
            }
        }
        if (!res || state.clock >= t_total) break;
    }
    for (double& a : acc) a /= width;
    return batch_means_estimate(acc);
}

LyapunovReport lyapunov_report(const ModelParams& params, int n_lo, int n_hi) {
    if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("lyapunov_report: need 1 <= n_lo <= n_hi");
    if (params.lambda0 == 0.0 && params.lambda_tail.empty())
        throw std::invalid_argument("lyapunov_report requires a nonzero Lambda");

    const int kappa = params.sel.kappa;
    const int m_hi = std::max(2 * n_hi, n_hi + kappa - 1);

    // delta(k) and the running sums of f
    std::vector<double> delta(static_cast<std::size_t>(m_hi) + 1, 0.0);
    std::vector<double> f(static_cast<std::size_t>(m_hi) + 1, 0.0);
    for (int k = 2; k <= m_hi; ++k) {
        double d = binom(k, 2) * params.lambda0;
        for (const Atom& a : params.lambda_tail.atoms()) {
            double r = a.location;
            double arg = 1.0 - r + (1.0 - pow_conv(1.0 - r, k)) / k;
            d += -static_cast<double>(k) * a.weight * std::log(arg) / (r * r);
        }
        delta[static_cast<std::size_t>(k)] = d;
        f[static_cast<std::size_t>(k)] =
            f[static_cast<std::size_t>(k - 1)] + k / d * std::log(k / (k - 1.0));
    }

    LyapunovReport rep;
    rep.rows.reserve(static_cast<std::size_t>(n_hi - n_lo) + 1);
    for (int n = n_lo; n <= n_hi; ++n) {
        double drift = 0.0;
        double fn = f[static_cast<std::size_t>(n)];
        for (int k = 2; k <= n; ++k)
            drift += coalesce_event_rate(params, n, k) * (f[static_cast<std::size_t>(n - k + 1)] - fn);
        for (int ell = 2; ell <= kappa; ++ell)
            drift += select_event_rate(params, n, ell) * (f[static_cast<std::size_t>(n + ell - 1)] - fn);
        for (int ell = 1; ell <= n; ++ell) {
            double env = env_event_rate(params, n, ell, Allele::a) +
                         env_event_rate(params, n, ell, Allele::A);
            drift += env * (f[static_cast<std::size_t>(n + ell)] - fn);
            double mut = mut_event_rate(params, n, ell, Allele::a) +
                         mut_event_rate(params, n, ell, Allele::A);
            drift += mut * (f[static_cast<std::size_t>(n - ell)] - fn);
        }
        rep.rows.push_back({n, n >= 2 ? delta[static_cast<std::size_t>(n)] : 0.0, fn, drift});
    }
    auto drift_at = [&rep, n_lo](int n) { return rep.rows[static_cast<std::size_t>(n - n_lo)].drift; };
    for (int n0 = n_lo; n0 <= n_hi; ++n0) {
        if (10 * n0 > n_hi) break;
        bool all_neg = true;
        for (int n = n0; n <= 10 * n0 && all_neg; ++n) all_neg = drift_at(n) < 0.0;
        if (all_neg) {
            rep.onset = n0;
            break;
        }
    }
    return rep;
}

}  // namespace bernwf
