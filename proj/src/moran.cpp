#include "bernwf/moran.hpp"

#include <cmath>
#include <stdexcept>

#include "bernwf/distributions.hpp"
#include "bernwf/forward.hpp"
#include "bernwf/parallel.hpp"

namespace bernwf {

MoranRates moran_rates(const MoranState& state, const ModelParams& params) {
    const int K = state.K;
    const int i = state.i;
    MoranRates r;
    double swap = params.lambda0 * i * (K - i) / (2.0 * K);
    r.neutral_up = swap;
    r.neutral_down = swap;
    for (const Atom& a : params.lambda_tail.atoms())
        r.large_total += a.weight / (a.location * a.location * K);
    r.selection_total = params.sel.beta_total();   // K individuals at rate beta/K each
    for (const Atom& a : params.mu.atoms()) r.env_total += a.weight / (std::abs(a.location) * K);
    r.mut_up = params.theta_a * (K - i) / K;
    r.mut_down = params.theta_A * i / K;
    for (const Atom& a : params.nu.atoms()) r.coord_total += a.weight / (std::abs(a.location) * K);
    return r;
}

namespace {

const Atom& pick_atom(const AtomicMeasure& m, int K, Rng& rng, double total) {
    double u = uniform01(rng) * total;
    double cdf = 0.0;
    for (const Atom& a : m.atoms()) {
        cdf += a.weight / (std::abs(a.location) * K);
        if (u <= cdf) return a;
    }
    return m.atoms().back();
}

const Atom& pick_large_atom(const AtomicMeasure& m, int K, Rng& rng, double total) {
    double u = uniform01(rng) * total;
    double cdf = 0.0;
    for (const Atom& a : m.atoms()) {
        double rate = a.weight / (a.location * a.location * K);
        cdf += rate;
        if (u <= cdf) return a;
    }
    return m.atoms().back();
}

int pick_selection_ell(const SelectionKernel& sel, Rng& rng) {
    double u = uniform01(rng) * sel.beta_total();
    double cdf = 0.0;
    for (int ell = 2; ell <= sel.kappa; ++ell) {
        cdf += sel.beta_at(ell);
        if (u <= cdf) return ell;
    }
    return sel.kappa;
}

}  // namespace

void moran_step(MoranState& state, const ModelParams& params, Rng& rng) {
    MoranRates rates = moran_rates(state, params);
    double total = rates.total();
    if (total <= 0.0) throw std::logic_error("moran_step: no events available");
    state.clock += std::exponential_distribution<double>(total)(rng);

    const int K = state.K;
    int& i = state.i;
    double u = uniform01(rng) * total;
    if ((u -= rates.neutral_up) <= 0.0) {
        ++i;
        return;
    }
    if ((u -= rates.neutral_down) <= 0.0) {
        --i;
        return;
    }
    if ((u -= rates.large_total) <= 0.0) {
        const Atom& a = pick_large_atom(params.lambda_tail, K, rng, rates.large_total);
        int killed_a = binom_sample(i, a.location, rng);
        int killed_A = binom_sample(K - i, a.location, rng);
        bool parent_a = uniform01(rng) <= state.freq();
        i = parent_a ? i + killed_A : i - killed_a;
        return;
    }
    if ((u -= rates.selection_total) <= 0.0) {
        int ell = pick_selection_ell(params.sel, rng);
        bool founder_a = uniform01(rng) <= state.freq();
        int group_a = (founder_a ? 1 : 0) +
                      hyp_sample(K - 1, i - (founder_a ? 1 : 0), ell - 1, rng);
        bool new_a = uniform01(rng) <= params.sel.p_at(ell, group_a);
        i += (new_a ? 1 : 0) - (founder_a ? 1 : 0);
        return;
    }
    if ((u -= rates.env_total) <= 0.0) {
        const Atom& a = pick_atom(params.mu, K, rng, rates.env_total);
        if (a.location > 0.0) {
            int newborn = binom_sample(i, a.location, rng);
            int replaced_a = hyp_sample(K, i, newborn, rng);
            i += newborn - replaced_a;
        } else {
            int newborn = binom_sample(K - i, -a.location, rng);
            int replaced_a = hyp_sample(K, i, newborn, rng);
            i -= replaced_a;
        }
        return;
    }
    if ((u -= rates.mut_up) <= 0.0) {
        ++i;
        return;
    }
    if ((u -= rates.mut_down) <= 0.0) {
        --i;
        return;
    }
    {
        const Atom& a = pick_atom(params.nu, K, rng, rates.coord_total);
        if (a.location > 0.0)
            i += binom_sample(K - i, a.location, rng);
        else
            i -= binom_sample(i, -a.location, rng);
    }
}

int moran_value_at(const ModelParams& params, int K, int i0, double t_chain, Rng& rng) {
    if (K < 2 || i0 < 0 || i0 > K) throw std::invalid_argument("need K >= 2 and 0 <= i0 <= K");
    MoranState state{K, i0, 0.0};
    while (state.clock < t_chain) {
        MoranRates rates = moran_rates(state, params);
        double total = rates.total();
        if (total <= 0.0) break;
        // peek at the holding time before committing to the event
        MoranState trial = state;
        moran_step(trial, params, rng);
        if (trial.clock > t_chain) break;
        state = trial;
    }
    return state.i;
}

MoranFixation moran_fixation(const ModelParams& params, int K, int i0, std::size_t reps,
                             std::uint64_t seed) {
    if (K < 2 || i0 < 0 || i0 > K) throw std::invalid_argument("need K >= 2 and 0 <= i0 <= K");
    if (params.has_mutations())
        throw std::invalid_argument("moran_fixation requires the mutation-free regime");
    std::vector<char> fixed(reps, 0);
    std::vector<double> events(reps, 0.0);
    for_each_replica(reps, [&](std::size_t rep) {
        Rng rng = make_rng(seed, rep);
        MoranState state{K, i0, 0.0};
        std::uint64_t n_events = 0;
        while (state.i != 0 && state.i != K) {
            moran_step(state, params, rng);
            ++n_events;
        }
        fixed[rep] = state.i == K;
        events[rep] = static_cast<double>(n_events);
    });
    std::size_t wins = 0;
    double ev = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        wins += fixed[r];
        ev += events[r];
    }
    MoranFixation out;
    out.fixed_at_K = proportion_estimate(wins, reps);
    out.mean_events = ev / static_cast<double>(reps);
    return out;
}

std::vector<MoranSdeRow> moran_vs_sde(const ModelParams& params, int K, double x0, double t,
                                      int max_moment, std::size_t reps, std::uint64_t seed,
                                      double sde_dt) {
    int i0 = static_cast<int>(std::lround(x0 * K));
    std::vector<double> freqs(reps);
    for_each_replica(reps, [&](std::size_t rep) {
        Rng rng = make_rng(derive_seed(seed, 1), rep);
        freqs[rep] = static_cast<double>(moran_value_at(params, K, i0, K * t, rng)) / K;
    });
    ForwardConfig cfg;
    cfg.x0 = x0;
    cfg.t_end = t;
    cfg.dt = sde_dt;
    std::vector<MoranSdeRow> rows;
    for (int k = 1; k <= max_moment; ++k) {
        std::vector<double> powd(reps);
        for (std::size_t r = 0; r < reps; ++r) powd[r] = std::pow(freqs[r], k);
        MoranSdeRow row;
        row.k = k;
        row.moran = mean_estimate(powd);
        row.sde = moment_estimate(cfg, params, k, reps, derive_seed(seed, 2));
        row.z = z_score(row.moran, row.sde);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace bernwf
