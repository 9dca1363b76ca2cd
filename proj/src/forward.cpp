#include "bernwf/forward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bernwf/parallel.hpp"

namespace bernwf {

void ForwardConfig::check() const {
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw std::invalid_argument("x0 must lie in [0,1]");
    if (!(dt > 0.0) || !(t_end >= 0.0) || dt > std::max(t_end, dt))
        throw std::invalid_argument("need 0 < dt and t_end >= 0");
}

std::vector<JumpChannel> jump_catalog(const ModelParams& params) {
    std::vector<JumpChannel> channels;
    for (const Atom& a : params.lambda_tail.atoms())
        channels.push_back({JumpChannel::Kind::neutral, a.location,
                            a.weight / (a.location * a.location)});
    for (const Atom& a : params.mu.atoms())
        channels.push_back({JumpChannel::Kind::environment, a.location,
                            a.weight / std::abs(a.location)});
    for (const Atom& a : params.nu.atoms())
        channels.push_back({JumpChannel::Kind::coordinated, a.location,
                            a.weight / std::abs(a.location)});
    return channels;
}

namespace {

class PathStepper {
  public:
    PathStepper(const ForwardConfig& cfg, const ModelParams& params, Rng& rng)
        : params_(params),
          channels_(jump_catalog(params)),
          rng_(rng),
          x_(cfg.x0),
          can_absorb_(!params.has_mutations()) {
        for (const JumpChannel& c : channels_) jump_rate_ += c.rate;
        next_jump_ = draw_next_jump(0.0);
    }

    double x() const { return x_; }
    double t() const { return t_; }
    bool frozen() const { return can_absorb_ && (x_ == 0.0 || x_ == 1.0); }

    // One operator-splitting step of length h: Euler for the diffusion and
    // drift, then every jump clock that rings inside (t, t+h].
    template <typename JumpSink>
    void advance(double h, JumpSink&& on_jump) {
        if (!frozen()) {
            double drift = params_.sel.d_poly(x_) + params_.theta_a * (1.0 - x_) -
                           params_.theta_A * x_;
            double diff2 = params_.lambda0 * x_ * (1.0 - x_);
            double z = diff2 > 0.0 ? normal_(rng_) : 0.0;
            x_ += drift * h + std::sqrt(diff2 * h) * z;
            x_ = std::clamp(x_, 0.0, 1.0);
        }
        double t_next = t_ + h;
        while (next_jump_ <= t_next) {
            if (!frozen()) {
                const JumpChannel& c = pick_channel();
                apply_jump(c);
                on_jump(next_jump_, c);
            }
            next_jump_ = draw_next_jump(next_jump_);
        }
        t_ = t_next;
    }

    void advance(double h) {
        advance(h, [](double, const JumpChannel&) {});
    }

  private:
    double draw_next_jump(double from) {
        if (jump_rate_ <= 0.0) return std::numeric_limits<double>::infinity();
        return from + std::exponential_distribution<double>(jump_rate_)(rng_);
    }

    const JumpChannel& pick_channel() {
        double u = uniform01(rng_) * jump_rate_;
        double cdf = 0.0;
        for (const JumpChannel& c : channels_) {
            cdf += c.rate;
            if (u <= cdf) return c;
        }
        return channels_.back();
    }

    void apply_jump(const JumpChannel& c) {
        switch (c.kind) {
            case JumpChannel::Kind::neutral: {
                // compensator-free form: the u-draw decides the parental type
                double u = uniform01(rng_);
                if (u <= x_)
                    x_ += c.r * (1.0 - x_);
                else
                    x_ -= c.r * x_;
                break;
            }
            case JumpChannel::Kind::environment:
                x_ += c.r * x_ * (1.0 - x_);
                break;
            case JumpChannel::Kind::coordinated:
                if (c.r >= 0.0)
                    x_ += c.r * (1.0 - x_);
                else
                    x_ += c.r * x_;
                break;
        }
    }

    const ModelParams& params_;
    std::vector<JumpChannel> channels_;
    Rng& rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    double x_ = 0.0;
    double t_ = 0.0;
    double jump_rate_ = 0.0;
    double next_jump_ = 0.0;
    bool can_absorb_ = false;
};

}  // namespace

ForwardPath simulate_path(const ForwardConfig& cfg, const ModelParams& params, Rng& rng) {
    cfg.check();
    ForwardPath path;
    PathStepper sim(cfg, params, rng);
    path.times.push_back(0.0);
    path.values.push_back(sim.x());
    while (sim.t() < cfg.t_end) {
        double h = std::min(cfg.dt, cfg.t_end - sim.t());
        sim.advance(h, [&path](double tj, const JumpChannel& c) {
            path.jumps.push_back({tj, c.kind, c.r});
        });
        path.times.push_back(sim.t());
        path.values.push_back(sim.x());
    }
    return path;
}

std::vector<double> simulate_values(const ForwardConfig& cfg, const ModelParams& params,
                                    const std::vector<double>& query_times, Rng& rng) {
    cfg.check();
    std::vector<double> out;
    out.reserve(query_times.size());
    PathStepper sim(cfg, params, rng);
    std::size_t qi = 0;
    auto flush = [&](double t_now, double x_now) {
        while (qi < query_times.size() && query_times[qi] <= t_now + 1e-12) {
            out.push_back(x_now);
            ++qi;
        }
    };
    flush(0.0, sim.x());
    while (sim.t() < cfg.t_end && qi < query_times.size()) {
        double h = std::min(cfg.dt, cfg.t_end - sim.t());
        sim.advance(h);
        flush(sim.t(), sim.x());
        if (sim.frozen()) break;
    }
    while (qi < query_times.size()) {
        out.push_back(sim.x());
        ++qi;
    }
    return out;
}

Estimate moment_estimate(const ForwardConfig& cfg, const ModelParams& params, int k,
                         std::size_t reps, std::uint64_t seed) {
    cfg.check();
    if (k < 0) throw std::invalid_argument("moment order must be nonnegative");
    std::vector<double> samples(reps);
    for_each_replica(reps, [&](std::size_t i) {
        Rng rng = make_rng(seed, i);
        double x = simulate_values(cfg, params, {cfg.t_end}, rng).front();
        samples[i] = std::pow(x, k);
    });
    return mean_estimate(samples);
}

FixationEstimate forward_fixation(const ForwardConfig& cfg, const ModelParams& params,
                                  std::size_t reps, std::uint64_t seed) {
    cfg.check();
    if (params.has_mutations())
        throw std::invalid_argument("forward_fixation requires the mutation-free regime");
    std::vector<char> at_one(reps, 0);
    std::vector<char> resolved(reps, 0);
    for_each_replica(reps, [&](std::size_t i) {
        Rng rng = make_rng(seed, i);
        PathStepper sim(cfg, params, rng);
        while (sim.t() < cfg.t_end && !sim.frozen()) sim.advance(cfg.dt);
        resolved[i] = sim.frozen();
        at_one[i] = sim.x() == 1.0;
    });
    FixationEstimate est;
    std::size_t ones = 0, res = 0;
    for (std::size_t i = 0; i < reps; ++i) {
        ones += at_one[i];
        res += resolved[i];
    }
    est.fixed_at_one = proportion_estimate(ones, reps);
    est.unresolved = 1.0 - static_cast<double>(res) / static_cast<double>(reps);
    return est;
}

}  // namespace bernwf
