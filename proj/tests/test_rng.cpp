#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "cvqkd/rng.hpp"
#include "cvqkd/stats.hpp"

TEST_CASE("identical seeds give identical sequences") {
    cvqkd::Rng a(42);
    cvqkd::Rng b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("substream is a pure function of its arguments") {
    auto a = cvqkd::Rng::substream(7, cvqkd::Stream::alice_phase, 3);
    auto b = cvqkd::Rng::substream(7, cvqkd::Stream::alice_phase, 3);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("substreams differ across stream ids, blocks, and master seeds") {
    auto base = cvqkd::Rng::substream(7, cvqkd::Stream::alice_phase, 0);
    auto other_stream = cvqkd::Rng::substream(7, cvqkd::Stream::bob_basis, 0);
    auto other_block = cvqkd::Rng::substream(7, cvqkd::Stream::alice_phase, 1);
    auto other_seed = cvqkd::Rng::substream(8, cvqkd::Stream::alice_phase, 0);

    const std::uint64_t first = base.next_u64();
    CHECK(first != other_stream.next_u64());
    CHECK(first != other_block.next_u64());
    CHECK(first != other_seed.next_u64());
}

TEST_CASE("uniform_u32 respects its bound and covers all residues") {
    cvqkd::Rng rng(99);
    std::vector<int> counts(4, 0);
    const int n = 40000;
    for (int i = 0; i < n; ++i) {
        const std::uint32_t v = rng.uniform_u32(4);
        REQUIRE(v < 4);
        ++counts[v];
    }
    // Each residue should appear with frequency 1/4; 5 sigma of a binomial
    // with p = 1/4 over 40000 draws is about 433.
    for (int c : counts) CHECK(std::abs(c - n / 4) < 450);
}

TEST_CASE("uniform doubles stay in the half-open unit interval with matching moments") {
    cvqkd::Rng rng(2024);
    const int n = 200000;
    std::vector<double> xs;
    xs.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        xs.push_back(u);
    }
    // Mean 1/2 (sd of the estimate ~ 0.00065), variance 1/12.
    CHECK(cvqkd::mean(xs) == doctest::Approx(0.5).epsilon(0.01));
    CHECK(cvqkd::sample_variance(xs) == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("gaussian moments match a standard normal") {
    cvqkd::Rng rng(5150);
    const int n = 200000;
    std::vector<double> xs;
    xs.reserve(n);
    for (int i = 0; i < n; ++i) xs.push_back(rng.gaussian());
    const double m = cvqkd::mean(xs);
    const double v = cvqkd::sample_variance(xs);
    CHECK(std::abs(m) < 0.012);          // 5 sigma of the mean estimator
    CHECK(v == doctest::Approx(1.0).epsilon(0.02));

    double third = 0.0, fourth = 0.0;
    for (double x : xs) {
        third += x * x * x;
        fourth += x * x * x * x;
    }
    third /= n;
    fourth /= n;
    CHECK(std::abs(third) < 0.05);
    CHECK(fourth == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("scaled gaussian applies mean and standard deviation") {
    cvqkd::Rng rng(31337);
    const int n = 100000;
    std::vector<double> xs;
    xs.reserve(n);
    for (int i = 0; i < n; ++i) xs.push_back(rng.gaussian(3.0, 0.5));
    CHECK(cvqkd::mean(xs) == doctest::Approx(3.0).epsilon(0.005));
    CHECK(std::sqrt(cvqkd::sample_variance(xs)) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("bernoulli frequency tracks its probability") {
    cvqkd::Rng rng(8080);
    const int n = 100000;
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += rng.bernoulli(0.2) ? 1 : 0;
    // 5 sigma of Binomial(1e5, 0.2) is about 632.
    CHECK(std::abs(hits - 20000) < 650);
}

TEST_CASE("distinct substreams look statistically independent") {
    auto a = cvqkd::Rng::substream(11, cvqkd::Stream::channel_noise, 0);
    auto b = cvqkd::Rng::substream(11, cvqkd::Stream::channel_noise, 1);
    const int n = 50000;
    double dot = 0.0;
    for (int i = 0; i < n; ++i) dot += (a.uniform() - 0.5) * (b.uniform() - 0.5);
    // Correlation of independent uniforms: sd of the dot sum is sqrt(n)/12.
    CHECK(std::abs(dot) < 5.0 * std::sqrt(static_cast<double>(n)) / 12.0);
}
