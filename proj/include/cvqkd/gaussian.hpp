#pragma once

#include <array>
#include <complex>
#include <cstdint>

#include "cvqkd/math.hpp"

namespace cvqkd {

/// Homodyne measurement quadrature.
enum class Basis : std::uint8_t { q = 0, p = 1 };

/// The four coherent-state phases used by the sender. Phases 0 and pi/2 encode
/// bit 1, pi and 3pi/2 encode bit 0; {0, pi} live on the q quadrature and
/// {pi/2, 3pi/2} on p.
enum class SymbolPhase : std::uint8_t {
    deg0 = 0,
    deg90 = 1,
    deg180 = 2,
    deg270 = 3,
};

double phase_radians(SymbolPhase s);
Basis encoding_basis(SymbolPhase s);
int key_bit(SymbolPhase s);

/// Coherent state |alpha e^{i phi}>. Quadrature convention: vacuum variance
/// is 1/4 and <x_phi> = |alpha| cos(phi - phi_LO).
struct CoherentAmplitude {
    std::complex<double> alpha{0.0, 0.0};

    double mean_photon_number() const { return std::norm(alpha); }
    static CoherentAmplitude from_mean_photon(double n_bar);
    CoherentAmplitude displaced(double phase) const;
    double quadrature_mean(Basis basis) const;
};

/// 2x2 single-mode covariance matrix in (q, p) order.
struct CovMatrix2 {
    double qq = 0.0;
    double pp = 0.0;
    double qp = 0.0;

    double det() const { return qq * pp - qp * qp; }

    /// Heisenberg check: both diagonal entries at least the vacuum variance
    /// and det >= 1/16 (the minimum-uncertainty product in these units).
    bool is_physical(double tol = 1e-12) const;
};

/// 4x4 two-mode covariance matrix, row-major, mode order (q1, p1, q2, p2).
using JointCovMatrix4 = std::array<double, 16>;

CovMatrix2 vacuum_covariance();

/// Covariance of the phase-symmetrized four-state ensemble with mean photon
/// number n_bar: the symbol average adds |alpha|^2/2 to each quadrature.
CovMatrix2 ensemble_covariance(double n_bar);

/// Joint covariance after a beam splitter of transmittance t mixes a signal
/// mode (variance signal_var in both quadratures) with an environment mode
/// (variance env_var). Throws std::invalid_argument for t outside [0, 1].
JointCovMatrix4 bs_joint_transform(double signal_var, double env_var, double t);

}  // namespace cvqkd
