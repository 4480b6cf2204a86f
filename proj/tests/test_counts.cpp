#include <doctest.h>

#include "cbet/counts.hpp"

using namespace cbet;

TEST_CASE("observe is increment-then-read") {
    CountTable t;
    CHECK(t.observe("x") == 1);
    CHECK(t.observe("x") == 2);
    CHECK(t.observe("y") == 1);
    CHECK(t.total_increments() == 3);
    CHECK(t.count("x") == 2);
    CHECK(t.count("missing") == 0);
}

TEST_CASE("uniform bookkeeping: 1000 observes of 10 codes") {
    CountTable t;
    for (int round = 0; round < 100; ++round)
        for (int code = 0; code < 10; ++code) t.observe("code" + std::to_string(code));
    CHECK(t.distinct_codes() == 10);
    for (int code = 0; code < 10; ++code) CHECK(t.count("code" + std::to_string(code)) == 100);
    CHECK(t.increments_since_reset() == 1000);
}

TEST_CASE("reset policy gating") {
    Rng rng(1);
    CountTable t;
    t.observe("a");

    SUBCASE("mode none never resets") {
        for (int i = 0; i < 1000; ++i) CHECK_FALSE(t.maybe_reset(rng, {ResetMode::None, 0.5}));
        CHECK(t.count("a") == 1);
    }
    SUBCASE("episodic resets only at boundaries") {
        CHECK_FALSE(t.maybe_reset(rng, {ResetMode::Episodic, 0.0}, false));
        CHECK(t.count("a") == 1);
        CHECK(t.maybe_reset(rng, {ResetMode::Episodic, 0.0}, true));
        CHECK(t.count("a") == 0);
        CHECK(t.resets_performed() == 1);
    }
    SUBCASE("after a reset the first observe returns 1 again") {
        t.observe("a");
        t.maybe_reset(rng, {ResetMode::Episodic, 0.0}, true);
        CHECK(t.observe("a") == 1);
    }
}

TEST_CASE("random resets at p=0.001 over 100k steps fall in the binomial range") {
    Rng rng(424242);
    CountTable t;
    const ResetPolicy policy{ResetMode::RandomPerStep, 0.001};
    int resets = 0;
    for (int i = 0; i < 100000; ++i)
        if (t.maybe_reset(rng, policy)) ++resets;
    CHECK(resets >= 60);
    CHECK(resets <= 140);
    CHECK(t.resets_performed() == static_cast<uint64_t>(resets));
}

TEST_CASE("counts are monotone non-decreasing without resets") {
    Rng rng(9);
    CountTable t;
    uint64_t last = 0;
    for (int i = 0; i < 500; ++i) {
        const uint64_t now = t.observe("k");
        CHECK(now == last + 1);
        last = now;
        t.maybe_reset(rng, {ResetMode::None, 0.0});
    }
}

TEST_CASE("reset probability warning threshold") {
    CHECK_FALSE(reset_policy_warning({ResetMode::RandomPerStep, 0.001}, 0.99).has_value());
    CHECK_FALSE(reset_policy_warning({ResetMode::RandomPerStep, 0.01}, 0.99).has_value());
    CHECK(reset_policy_warning({ResetMode::RandomPerStep, 0.02}, 0.99).has_value());
    CHECK_FALSE(reset_policy_warning({ResetMode::None, 0.9}, 0.99).has_value());
}

TEST_CASE("reset mode names round trip") {
    for (ResetMode m : {ResetMode::None, ResetMode::Episodic, ResetMode::RandomPerStep}) {
        const auto parsed = reset_mode_from_name(reset_mode_name(m));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == m);
    }
}
