#include <doctest.h>

#include <cmath>

#include "bernwf/dual.hpp"
#include "test_models.hpp"

using namespace bernwf;
using namespace bernwf::testing;

TEST_CASE("event catalog") {
    CHECK(enumerate_events(full_model(), 0).events.empty());

    ModelParams t;
    t.theta_a = 0.3;
    t.theta_A = 0.5;
    EventCatalog cat = enumerate_events(t, 1);
    REQUIRE(cat.events.size() == 2);
    for (const DualEvent& ev : cat.events) {
        CHECK(ev.kind == DualEvent::Kind::mutation);
        CHECK(ev.size == 1);
        CHECK(ev.rate == doctest::Approx(ev.type == Allele::a ? 0.3 : 0.5));
    }

    EventCatalog kingman = enumerate_events(neutral_model(), 2);
    REQUIRE(kingman.events.size() == 1);
    CHECK(kingman.events.front().kind == DualEvent::Kind::coalesce);
    CHECK(kingman.events.front().rate == doctest::Approx(1.0));
}

TEST_CASE("catalog totals equal the closed-form rate sum") {
    for (const ModelParams& p :
         {neutral_model(), genic_model(), full_model(), lyapunov_model()}) {
        for (int n = 0; n <= 200; ++n) {
            double total = enumerate_events(p, n).total_rate;
            double closed = total_dual_rate(p, n);
            CHECK(std::abs(total - closed) <= 1e-12 * std::max(1.0, closed));
        }
    }
}

TEST_CASE("step contract") {
    Rng rng = make_rng(1);
    DualState absorbed{{0.7}, Allele::a, 0.0};
    CHECK_THROWS_AS(step(neutral_model(), absorbed, rng), std::logic_error);

    DualState frozen{{0.0, 1.0}, Allele::a, 0.0};
    CHECK_FALSE(step(neutral_model(), frozen, rng).has_value());
    CHECK(frozen.clock == 0.0);
}

TEST_CASE("theta-only dual from e_1 absorbs to a Bernoulli(theta_a/theta) scalar") {
    ModelParams p;
    p.theta_a = 0.3;
    p.theta_A = 0.7;
    std::size_t reps = 20000, ones = 0;
    double time_sum = 0.0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
        Rng rng = make_rng(77, rep);
        DualPathSummary sum = simulate_until(p, {0.0, 1.0}, 1e9, {}, rng);
        REQUIRE(sum.absorbed);
        REQUIRE((sum.final_value == 0.0 || sum.final_value == 1.0));
        ones += sum.final_value == 1.0;
        time_sum += sum.absorb_time;
    }
    double frac = static_cast<double>(ones) / reps;
    double se = std::sqrt(0.3 * 0.7 / reps);
    CHECK(std::abs(frac - 0.3) <= 4 * se);
    // absorb time is Exp(1): mean 1
    CHECK(std::abs(time_sum / reps - 1.0) <= 4.0 / std::sqrt(static_cast<double>(reps)));
}

TEST_CASE("mutation-free paths keep the boundary coefficients") {
    // the simulator asserts the invariants internally at every step
    ModelParams p = genic_model();
    for (std::size_t rep = 0; rep < 50; ++rep) {
        Rng rng = make_rng(5, rep);
        DualPathSummary sum = simulate_until(p, {0.25, 0.5, 0.9}, 20.0, {}, rng);
        CHECK_FALSE(sum.absorbed);
        CHECK(sum.final_state.v.front() == 0.25);
        CHECK(sum.final_state.v.back() == 0.9);
    }
}

TEST_CASE("explosion guard fires on a branching-dominated model") {
    ModelParams p = violating_model();
    DualSimOptions opts;
    opts.l_max = 64;
    bool exploded = false;
    for (std::size_t rep = 0; rep < 20 && !exploded; ++rep) {
        Rng rng = make_rng(6, rep);
        try {
            simulate_until(p, {0.0, 1.0}, 1e4, opts, rng);
        } catch (const ExplosionError& e) {
            exploded = true;
            CHECK(std::string(e.what()).find("check_assumption") != std::string::npos);
        }
    }
    CHECK(exploded);
}

TEST_CASE("full reference model: dual paths from e_5 absorb quickly") {
    ModelParams p = full_model();
    DualSimOptions opts;
    opts.env_mc_se_budget = 0.01;
    std::size_t absorbed = 0;
    for (std::size_t rep = 0; rep < 500; ++rep) {
        Rng rng = make_rng(8, rep);
        DualPathSummary sum = simulate_until(p, {0, 0, 0, 0, 0, 1.0}, 1000.0, opts, rng);
        absorbed += sum.absorbed;
        if (sum.absorbed) {
            CHECK(sum.final_value >= 0.0);
            CHECK(sum.final_value <= 1.0);
        }
    }
    CHECK(absorbed == 500);
}

TEST_CASE("stationary functional") {
    SUBCASE("pure coalescent dual never leaves e_1") {
        Rng rng = make_rng(9);
        Estimate est = stationary_functional(neutral_model(), 0.37, 10.0, 100.0, 10, {}, rng);
        CHECK(est.mean == doctest::Approx(0.37).epsilon(1e-12));
        CHECK(est.se == doctest::Approx(0.0));
    }
    SUBCASE("boundary values are exact") {
        Rng rng = make_rng(10);
        CHECK(stationary_functional(genic_model(), 0.0, 5.0, 50.0, 5, {}, rng).mean == 0.0);
        Rng rng2 = make_rng(10);
        CHECK(stationary_functional(genic_model(), 1.0, 5.0, 50.0, 5, {}, rng2).mean == 1.0);
    }
    SUBCASE("refuses mutations and unbalanced rates") {
        Rng rng = make_rng(11);
        CHECK_THROWS_AS(stationary_functional(full_model(), 0.5, 1.0, 10.0, 5, {}, rng),
                        std::invalid_argument);
        CHECK_THROWS_AS(stationary_functional(violating_model(), 0.5, 1.0, 10.0, 5, {}, rng),
                        std::invalid_argument);
    }
}

TEST_CASE("lyapunov drift table") {
    SUBCASE("theta pushes the drift negative for n >= 2") {
        ModelParams p;
        p.lambda0 = 1.0;
        p.theta_a = 0.5;
        p.theta_A = 0.5;
        LyapunovReport rep = lyapunov_report(p, 1, 60);
        for (const auto& row : rep.rows)
            if (row.n >= 2) CHECK(row.drift < 0.0);
        REQUIRE(rep.onset.has_value());
        CHECK(*rep.onset <= 6);
    }
    SUBCASE("balanced reference model has an onset") {
        LyapunovReport rep = lyapunov_report(lyapunov_model(), 1, 500);
        REQUIRE(rep.onset.has_value());
        CHECK(*rep.onset <= 50);
    }
    SUBCASE("violating model never stabilizes") {
        LyapunovReport rep = lyapunov_report(violating_model(), 1, 500);
        CHECK_FALSE(rep.onset.has_value());
    }
    SUBCASE("n = 1 row is finite") {
        LyapunovReport rep = lyapunov_report(lyapunov_model(), 1, 10);
        CHECK(std::isfinite(rep.rows.front().drift));
    }
}
