#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cbet/rng.hpp"

using namespace cbet;

TEST_CASE("splitmix64 is deterministic and seed-sensitive") {
    CHECK(splitmix64(42) == splitmix64(42));
    CHECK(splitmix64(42) != splitmix64(43));
    CHECK(mix_seed(1, 2) != mix_seed(2, 1));
}

TEST_CASE("rng streams are reproducible") {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.u64() == b.u64());
}

TEST_CASE("uniform_int stays in range and covers values") {
    Rng rng(7);
    std::array<int, 5> hits{};
    for (int i = 0; i < 5000; ++i) {
        const uint64_t v = rng.uniform_int(5);
        REQUIRE(v < 5);
        ++hits[v];
    }
    for (int h : hits) CHECK(h > 800);
}

TEST_CASE("normal draws have roughly standard moments") {
    Rng rng(11);
    double sum = 0, sq = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sq += x * x;
    }
    CHECK(std::abs(sum / n) < 0.05);
    CHECK(std::abs(sq / n - 1.0) < 0.05);
}

TEST_CASE("rng state save/load resumes the stream") {
    Rng a(99);
    for (int i = 0; i < 17; ++i) a.u64();
    a.normal();  // leaves a cached Box-Muller value
    std::stringstream ss;
    a.save(ss);
    Rng b;
    b.load(ss);
    for (int i = 0; i < 50; ++i) CHECK(a.u64() == b.u64());
    CHECK(a.normal() == b.normal());
}
