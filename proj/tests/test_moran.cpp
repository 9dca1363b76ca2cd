#include <doctest.h>

#include <cmath>

#include "bernwf/moran.hpp"
#include "test_models.hpp"

using namespace bernwf;
using namespace bernwf::testing;

TEST_CASE("per-class rates at small K match hand computations") {
    ModelParams p = full_model();
    for (int K = 2; K <= 5; ++K) {
        for (int i = 0; i <= K; ++i) {
            MoranRates r = moran_rates({K, i, 0.0}, p);
            CHECK(r.neutral_up == doctest::Approx(1.0 * i * (K - i) / (2.0 * K)));
            CHECK(r.neutral_down == doctest::Approx(r.neutral_up));
            CHECK(r.large_total == doctest::Approx(0.5 / (0.4 * 0.4 * K)));
            CHECK(r.selection_total == doctest::Approx(0.5));
            CHECK(r.env_total == doctest::Approx((0.15 / 0.25 + 0.1 / 0.3) / K));
            CHECK(r.mut_up == doctest::Approx(0.4 * (K - i) / K));
            CHECK(r.mut_down == doctest::Approx(0.6 * i / K));
            CHECK(r.coord_total == doctest::Approx((0.2 / 0.35 + 0.15 / 0.2) / K));
        }
    }
}

TEST_CASE("absorbing boundary without inflow") {
    ModelParams p = neutral_model();
    MoranRates r0 = moran_rates({10, 0, 0.0}, p);
    CHECK(r0.total() == 0.0);
    MoranRates rK = moran_rates({10, 10, 0.0}, p);
    CHECK(rK.total() == 0.0);
}

TEST_CASE("neutral Moran fixation probability is i0/K") {
    MoranFixation fix = moran_fixation(neutral_model(), 40, 12, 4000, 55);
    double target = 12.0 / 40.0;
    CHECK(std::abs(fix.fixed_at_K.mean - target) <= 3.5 * fix.fixed_at_K.se);
}

TEST_CASE("two-way interaction with p_1 = 1 boosts fixation above neutral") {
    MoranFixation fix = moran_fixation(genic_model(1.0), 100, 50, 3000, 56);
    double diffusion = (1.0 - std::exp(-2.0 * 0.5)) / (1.0 - std::exp(-2.0));
    CHECK(std::abs(fix.fixed_at_K.mean - diffusion) <= 0.05);
    CHECK(fix.fixed_at_K.mean > 0.55);
}

TEST_CASE("moran_fixation refuses mutation models") {
    CHECK_THROWS_AS(moran_fixation(full_model(), 20, 10, 10, 57), std::invalid_argument);
}

TEST_CASE("rescaled chain moments track the SDE") {
    ModelParams p = theta_model(0.5, 0.5);
    auto rows = moran_vs_sde(p, 100, 0.5, 0.5, 2, 3000, 58);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) CHECK(std::abs(row.z) <= 4.0);
}
