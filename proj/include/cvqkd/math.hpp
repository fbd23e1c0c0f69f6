#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace cvqkd {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrtPi = 1.7724538509055160273;
// Vacuum quadrature variance in this project's shot-noise convention.
inline constexpr double kVacuumVariance = 0.25;

/// Complementary error function, own implementation.
///
/// Key-rate tails are sensitive to erfc accuracy, so the library carries its
/// own evaluation with a tested contract: relative error <= 1e-12 on
/// x in [-8, 8] (Maclaurin series below |x| = 2, Lentz-evaluated Laplace
/// continued fraction above).
double erfc(double x);

/// Binary entropy h2(p) in bits; h2(0) = h2(1) = 0.
double binary_entropy(double p);

/// x * log2(x) with the 0 * log2(0) = 0 convention.
double xlog2x(double x);

/// Eigenvalues of a small symmetric matrix (row-major, dim x dim), ascending.
/// Cyclic Jacobi; intended for the 2x2/4x4 covariance checks, not large dims.
void symmetric_eigenvalues(std::span<const double> matrix, std::size_t dim,
                           std::span<double> eigenvalues_out);

}  // namespace cvqkd
