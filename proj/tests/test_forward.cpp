#include <doctest.h>

#include <cmath>

#include "bernwf/forward.hpp"
#include "test_models.hpp"

using namespace bernwf;
using namespace bernwf::testing;

TEST_CASE("force-free paths stay put at the boundary") {
    ModelParams empty;
    for (double x0 : {0.0, 1.0}) {
        ForwardConfig cfg;
        cfg.x0 = x0;
        cfg.t_end = 2.0;
        cfg.dt = 0.01;
        Rng rng = make_rng(1);
        ForwardPath path = simulate_path(cfg, empty, rng);
        for (double v : path.values) CHECK(v == x0);
        CHECK(path.jumps.empty());
    }
}

TEST_CASE("neutral diffusion is a martingale") {
    ForwardConfig cfg;
    cfg.x0 = 0.5;
    cfg.t_end = 1.0;
    Estimate e = moment_estimate(cfg, neutral_model(), 1, 20000, 31);
    CHECK(std::abs(e.mean - 0.5) <= 4.0 * e.se);
}

TEST_CASE("single environment atom gives a pure jump process") {
    ModelParams p;
    p.mu = AtomicMeasure({{0.5, 0.5}}, Support::signed_open);   // channel rate w/|r| = 1
    ForwardConfig cfg;
    cfg.x0 = 0.5;
    cfg.t_end = 3.0;
    cfg.dt = 0.01;
    Rng rng = make_rng(17);
    ForwardPath path = simulate_path(cfg, p, rng);
    // values only change through x -> x + x(1-x)/2
    double x = 0.5;
    std::size_t ji = 0;
    for (const auto& j : path.jumps) {
        CHECK(j.kind == JumpChannel::Kind::environment);
        x += 0.5 * x * (1.0 - x);
        ++ji;
    }
    CHECK(path.values.back() == doctest::Approx(x).epsilon(1e-12));
    // jump count over many paths is Poisson(t * rate = 3)
    std::size_t total = 0;
    for (std::size_t rep = 0; rep < 2000; ++rep) {
        Rng r2 = make_rng(18, rep);
        total += simulate_path(cfg, p, r2).jumps.size();
    }
    double mean = static_cast<double>(total) / 2000.0;
    CHECK(std::abs(mean - 3.0) <= 4.0 * std::sqrt(3.0 / 2000.0));
}

TEST_CASE("trajectories stay in the unit interval") {
    ForwardConfig cfg;
    cfg.x0 = 0.8;
    cfg.t_end = 2.0;
    cfg.dt = 5e-3;
    for (std::size_t rep = 0; rep < 20; ++rep) {
        Rng rng = make_rng(19, rep);
        ForwardPath path = simulate_path(cfg, full_model(), rng);
        for (double v : path.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("moment at t = 0 is exact") {
    ForwardConfig cfg;
    cfg.x0 = 0.3;
    cfg.t_end = 0.0;
    Estimate e = moment_estimate(cfg, full_model(), 3, 100, 20);
    CHECK(e.mean == doctest::Approx(0.027).epsilon(1e-14));
    CHECK(e.se <= 1e-15);
}

TEST_CASE("halving dt moves moments less than the joint CI") {
    ForwardConfig coarse;
    coarse.x0 = 0.4;
    coarse.t_end = 0.5;
    coarse.dt = 2e-3;
    ForwardConfig fine = coarse;
    fine.dt = 1e-3;
    for (const ModelParams& p : {neutral_model(), genic_model(), full_model()}) {
        Estimate a = moment_estimate(coarse, p, 1, 20000, 21);
        Estimate b = moment_estimate(fine, p, 1, 20000, 22);
        double joint = std::sqrt(a.se * a.se + b.se * b.se);
        CHECK(std::abs(a.mean - b.mean) <= 4.0 * joint);
    }
}

TEST_CASE("neutral fixation fraction approximates x0") {
    ForwardConfig cfg;
    cfg.x0 = 0.3;
    cfg.t_end = 60.0;
    cfg.dt = 1e-3;
    FixationEstimate est = forward_fixation(cfg, neutral_model(), 2000, 23);
    CHECK(est.unresolved <= 0.01);
    CHECK(std::abs(est.fixed_at_one.mean - 0.3) <= 4.0 * est.fixed_at_one.se + 0.01);
    CHECK_THROWS_AS(forward_fixation(cfg, full_model(), 10, 24), std::invalid_argument);
}
