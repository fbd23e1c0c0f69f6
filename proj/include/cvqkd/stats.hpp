#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cvqkd {

double mean(std::span<const double> xs);

/// Unbiased sample variance (n-1 denominator). Requires xs.size() >= 2.
double sample_variance(std::span<const double> xs);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares y = slope*x + intercept. Requires >= 2 distinct x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct KsResult {
    double statistic = 0.0;  // sup |F1 - F2|
    double p_value = 0.0;    // asymptotic Kolmogorov distribution
};

/// Two-sample Kolmogorov-Smirnov test. Inputs need not be sorted.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct Histogram {
    std::vector<double> edges;   // size bins+1
    std::vector<double> counts;  // size bins
};

Histogram histogram(std::span<const double> xs, std::size_t bins, double lo, double hi);

}  // namespace cvqkd
