#include "cvqkd/math.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace cvqkd {

namespace {

// erf via Maclaurin series; used for |x| < 2 where the alternating terms
// stay small enough that cancellation costs at most ~2 digits.
double erf_series(double x) {
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x2 / n;
        const double contrib = term / (2 * n + 1);
        sum += contrib;
        if (std::fabs(contrib) < 1e-18 * std::fabs(sum)) break;
    }
    return sum * 2.0 / kSqrtPi;
}

// Laplace continued fraction for erfc(x)*sqrt(pi)*exp(x^2), x >= 2,
// evaluated with the modified Lentz algorithm:
//   1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
double erfc_continued_fraction(double x) {
    const double tiny = 1e-300;
    double f = x;
    double c = x;
    double d = 0.0;
    for (int n = 1; n < 300; ++n) {
        const double a = n * 0.5;
        d = x + a * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = x + a / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-17) break;
    }
    return std::exp(-x * x) / (kSqrtPi * f);
}

}  // namespace

double erfc(double x) {
    if (std::isnan(x)) return x;
    if (x < 0.0) return 2.0 - erfc(-x);
    if (x == 0.0) return 1.0;
    if (x < 2.0) return 1.0 - erf_series(x);
    if (x > 26.6) return 0.0;  // underflows double
    return erfc_continued_fraction(x);
}

double xlog2x(double x) {
    if (x <= 0.0) return 0.0;
    return x * std::log2(x);
}

double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -xlog2x(p) - xlog2x(1.0 - p);
}

void symmetric_eigenvalues(std::span<const double> matrix, std::size_t dim,
                           std::span<double> eigenvalues_out) {
    if (matrix.size() != dim * dim || eigenvalues_out.size() != dim) {
        throw std::invalid_argument("symmetric_eigenvalues: size mismatch");
    }
    std::vector<double> a(matrix.begin(), matrix.end());
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * dim + j]; };

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i + 1; j < dim; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-30) break;

        for (std::size_t p = 0; p < dim; ++p) {
            for (std::size_t q = p + 1; q < dim; ++q) {
                if (std::fabs(at(p, q)) < 1e-300) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < dim; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < dim; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    for (std::size_t i = 0; i < dim; ++i) eigenvalues_out[i] = at(i, i);
    std::sort(eigenvalues_out.begin(), eigenvalues_out.end());
}

}  // namespace cvqkd
