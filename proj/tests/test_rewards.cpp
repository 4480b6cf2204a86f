#include <doctest.h>

#include <cmath>

#include "cbet/errors.hpp"
#include "cbet/rewards.hpp"
#include "cbet/rng.hpp"

using namespace cbet;

namespace {
RewardSpec spec_of(RewardKind k) {
    RewardSpec s;
    s.kind = k;
    return s;
}
}  // namespace

TEST_CASE("formula spot checks") {
    CHECK(intrinsic_reward(spec_of(RewardKind::CBET), 1, 1) == doctest::Approx(0.5));
    CHECK(intrinsic_reward(spec_of(RewardKind::CBET), 3, 1) == doctest::Approx(0.25));
    CHECK(intrinsic_reward(spec_of(RewardKind::CountOnly), 4, 1) == doctest::Approx(0.5));
    CHECK(intrinsic_reward(spec_of(RewardKind::ChangeOnly), 7, 4) == doctest::Approx(0.5));
    CHECK(intrinsic_reward(spec_of(RewardKind::Product), 4, 9) == doctest::Approx(1.0 / 6.0));
    CHECK(intrinsic_reward(spec_of(RewardKind::WeightedSum), 4, 16) ==
          doctest::Approx(0.5 / 2.0 + 0.5 / 4.0));
    CHECK(intrinsic_reward(spec_of(RewardKind::WeightedSumSquared), 4, 16) ==
          doctest::Approx(std::pow(0.5 / 2.0 + 0.5 / 4.0, 2)));
    CHECK(intrinsic_reward(spec_of(RewardKind::SqrtOfSum), 7, 9) == doctest::Approx(0.25));
}

TEST_CASE("the unsquared variant aliases sqrt-of-sum") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const uint64_t ns = 1 + rng.uniform_int(1000);
        const uint64_t nc = 1 + rng.uniform_int(1000);
        CHECK(intrinsic_reward(spec_of(RewardKind::CBETUnsquared), ns, nc) ==
              intrinsic_reward(spec_of(RewardKind::SqrtOfSum), ns, nc));
    }
}

TEST_CASE("counts below one are a contract violation") {
    CHECK_THROWS_AS(intrinsic_reward(spec_of(RewardKind::CBET), 0, 1), ContractViolation);
    CHECK_THROWS_AS(intrinsic_reward(spec_of(RewardKind::CountOnly), 1, 0), ContractViolation);
}

TEST_CASE("strict monotonicity in each used count argument") {
    Rng rng(8);
    const RewardKind kinds[] = {RewardKind::CBET,       RewardKind::Product,
                                RewardKind::WeightedSum, RewardKind::WeightedSumSquared,
                                RewardKind::SqrtOfSum};
    for (RewardKind k : kinds) {
        for (int i = 0; i < 200; ++i) {
            const uint64_t ns = 1 + rng.uniform_int(500);
            const uint64_t nc = 1 + rng.uniform_int(500);
            const double base = intrinsic_reward(spec_of(k), ns, nc);
            CHECK(intrinsic_reward(spec_of(k), ns + 1, nc) < base);
            CHECK(intrinsic_reward(spec_of(k), ns, nc + 1) < base);
        }
    }
    for (int i = 0; i < 200; ++i) {
        const uint64_t ns = 1 + rng.uniform_int(500);
        const double base = intrinsic_reward(spec_of(RewardKind::CountOnly), ns, 1);
        CHECK(intrinsic_reward(spec_of(RewardKind::CountOnly), ns + 1, 1) < base);
        CHECK(intrinsic_reward(spec_of(RewardKind::CountOnly), ns, 999) == base);
    }
}

TEST_CASE("boundedness with post-increment counts") {
    Rng rng(12);
    for (int i = 0; i < 500; ++i) {
        const uint64_t ns = 1 + rng.uniform_int(10000);
        const uint64_t nc = 1 + rng.uniform_int(10000);
        const double cbet = intrinsic_reward(spec_of(RewardKind::CBET), ns, nc);
        CHECK(cbet > 0.0);
        CHECK(cbet <= 0.5);
        const double count = intrinsic_reward(spec_of(RewardKind::CountOnly), ns, nc);
        CHECK(count > 0.0);
        CHECK(count <= 1.0);
    }
}

TEST_CASE("heat-map ordering: anti-diagonal equality vs imbalance preference") {
    // For fixed n_state + n_change the interest reward is constant...
    CHECK(intrinsic_reward(spec_of(RewardKind::CBET), 1, 9) ==
          intrinsic_reward(spec_of(RewardKind::CBET), 5, 5));
    CHECK(intrinsic_reward(spec_of(RewardKind::CBET), 2, 8) ==
          intrinsic_reward(spec_of(RewardKind::CBET), 8, 2));
    // ...while the weighted sum prefers imbalanced pairs.
    CHECK(intrinsic_reward(spec_of(RewardKind::WeightedSum), 1, 9) >
          intrinsic_reward(spec_of(RewardKind::WeightedSum), 5, 5));
    CHECK(intrinsic_reward(spec_of(RewardKind::WeightedSumSquared), 1, 9) >
          intrinsic_reward(spec_of(RewardKind::WeightedSumSquared), 5, 5));
}

TEST_CASE("scaled step bookkeeping") {
    RewardSpec spec = spec_of(RewardKind::CBET);
    spec.scale = 0.005;
    const IntrinsicStep step = make_intrinsic_step(spec, 1, 1);
    CHECK(step.r_raw == doctest::Approx(0.5));
    CHECK(step.r_scaled == doctest::Approx(0.0025));
    CHECK(step.n_state == 1);
    CHECK(step.n_change == 1);
}

TEST_CASE("reward trend windows") {
    SUBCASE("constant rewards give a constant trend") {
        const std::vector<double> rewards(100, 0.25);
        const auto trend = reward_trend(rewards, 10);
        REQUIRE(trend.size() == 10);
        for (double v : trend) CHECK(v == doctest::Approx(0.25));
    }
    SUBCASE("empty input gives empty output") {
        CHECK(reward_trend({}, 10).empty());
    }
    SUBCASE("no-reset count-only rewards on a two-state loop decay like 1/sqrt(t)") {
        // Hopping between two states forever: visit counts alternate, so the
        // reward at step t is 1/sqrt(ceil(t/2)); window means must match the
        // closed form and shrink at the 1/sqrt rate.
        std::vector<double> rewards;
        uint64_t n_a = 0, n_b = 0;
        for (int t = 0; t < 4000; ++t) {
            const uint64_t n = (t % 2 == 0) ? ++n_a : ++n_b;
            rewards.push_back(1.0 / std::sqrt(static_cast<double>(n)));
        }
        const auto trend = reward_trend(rewards, 200);
        for (size_t w = 1; w < trend.size(); ++w) CHECK(trend[w] < trend[w - 1]);
        const double ratio = trend[15] / trend[3];
        // Centers of windows 3 and 15 are at t=700 and t=3100.
        const double expected = std::sqrt(700.0 / 3100.0);
        CHECK(ratio == doctest::Approx(expected).epsilon(0.05));
    }
}

TEST_CASE("reward kind names round trip") {
    for (int k = 0; k <= static_cast<int>(RewardKind::CBETUnsquared); ++k) {
        const auto kind = static_cast<RewardKind>(k);
        const auto parsed = reward_kind_from_name(reward_kind_name(kind));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == kind);
    }
}
