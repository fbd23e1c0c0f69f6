#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cvqkd/rng.hpp"
#include "cvqkd/stats.hpp"

TEST_CASE("mean and sample variance on a hand-computed set") {
    std::vector<double> xs{2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
    CHECK(cvqkd::mean(xs) == doctest::Approx(5.0).epsilon(1e-15));
    // Sum of squared deviations is 32, n-1 = 7.
    CHECK(cvqkd::sample_variance(xs) == doctest::Approx(32.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("sample variance rejects fewer than two points") {
    std::vector<double> one{1.0};
    CHECK_THROWS_AS((void)cvqkd::sample_variance(one), std::invalid_argument);
}

TEST_CASE("linear fit recovers an exact line") {
    std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0};
    std::vector<double> y;
    for (double xi : x) y.push_back(2.5 * xi - 0.75);
    const auto fit = cvqkd::linear_fit(x, y);
    CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(fit.intercept == doctest::Approx(-0.75).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("linear fit on a hand-computed noisy set") {
    // OLS on (1,2), (2,2), (3,4): slope = 1, intercept = 2/3.
    std::vector<double> x{1.0, 2.0, 3.0};
    std::vector<double> y{2.0, 2.0, 4.0};
    const auto fit = cvqkd::linear_fit(x, y);
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(fit.intercept == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    // SSres = 2/3, SStot = 8/3, r^2 = 1 - 1/4.
    CHECK(fit.r_squared == doctest::Approx(0.75).epsilon(1e-13));
}

TEST_CASE("linear fit input validation") {
    std::vector<double> x{1.0, 2.0};
    std::vector<double> y{1.0};
    CHECK_THROWS_AS((void)cvqkd::linear_fit(x, y), std::invalid_argument);
    std::vector<double> same{3.0, 3.0, 3.0};
    std::vector<double> ys{1.0, 2.0, 3.0};
    CHECK_THROWS_AS((void)cvqkd::linear_fit(same, ys), std::invalid_argument);
}

TEST_CASE("KS test accepts identical-distribution samples and rejects shifted ones") {
    cvqkd::Rng rng = cvqkd::Rng::substream(1234, cvqkd::Stream::generic, 0);
    std::vector<double> a, b, shifted;
    for (int i = 0; i < 4000; ++i) {
        a.push_back(rng.gaussian(0.0, 1.0));
        b.push_back(rng.gaussian(0.0, 1.0));
        shifted.push_back(rng.gaussian(1.0, 1.0));
    }
    const auto same = cvqkd::ks_two_sample(a, b);
    CHECK(same.p_value > 0.01);
    CHECK(same.statistic < 0.06);

    const auto diff = cvqkd::ks_two_sample(a, shifted);
    CHECK(diff.p_value < 1e-6);
    CHECK(diff.statistic > 0.3);
}

TEST_CASE("KS statistic on a tiny hand-checkable pair") {
    // F1 jumps at 1,2,3; F2 jumps at 2.5,3.5. Max gap is 2/3 (just before 2.5).
    std::vector<double> a{1.0, 2.0, 3.0};
    std::vector<double> b{2.5, 3.5};
    const auto r = cvqkd::ks_two_sample(a, b);
    CHECK(r.statistic == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("histogram bins edges and counts") {
    std::vector<double> xs{0.1, 0.2, 0.9, 1.5, 2.0, 2.5, -1.0, 5.0};
    const auto h = cvqkd::histogram(xs, 4, 0.0, 2.0);
    REQUIRE(h.edges.size() == 5);
    REQUIRE(h.counts.size() == 4);
    CHECK(h.edges.front() == doctest::Approx(0.0));
    CHECK(h.edges.back() == doctest::Approx(2.0));
    // Bins are half-open [lo, hi): 0.1, 0.2 -> bin 0; 0.9 -> bin 1; 1.5 -> bin 3.
    // 2.0 sits on the closed upper boundary and is excluded.
    CHECK(h.counts[0] == doctest::Approx(2.0));
    CHECK(h.counts[1] == doctest::Approx(1.0));
    CHECK(h.counts[2] == doctest::Approx(0.0));
    CHECK(h.counts[3] == doctest::Approx(1.0));
    double total = 0.0;
    for (double c : h.counts) total += c;
    CHECK(total == doctest::Approx(4.0));
}
