#include "cvqkd/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqkd {

double phase_radians(SymbolPhase s) {
    return 0.5 * kPi * static_cast<double>(static_cast<std::uint8_t>(s));
}

Basis encoding_basis(SymbolPhase s) {
    return (s == SymbolPhase::deg0 || s == SymbolPhase::deg180) ? Basis::q : Basis::p;
}

int key_bit(SymbolPhase s) {
    return (s == SymbolPhase::deg0 || s == SymbolPhase::deg90) ? 1 : 0;
}

CoherentAmplitude CoherentAmplitude::from_mean_photon(double n_bar) {
    if (n_bar < 0.0) throw std::invalid_argument("from_mean_photon: negative mean photon number");
    return CoherentAmplitude{std::complex<double>(std::sqrt(n_bar), 0.0)};
}

CoherentAmplitude CoherentAmplitude::displaced(double phase) const {
    return CoherentAmplitude{alpha * std::polar(1.0, phase)};
}

double CoherentAmplitude::quadrature_mean(Basis basis) const {
    return basis == Basis::q ? alpha.real() : alpha.imag();
}

bool CovMatrix2::is_physical(double tol) const {
    if (qq < kVacuumVariance - tol) return false;
    if (pp < kVacuumVariance - tol) return false;
    return det() >= kVacuumVariance * kVacuumVariance - tol;
}

CovMatrix2 vacuum_covariance() { return CovMatrix2{kVacuumVariance, kVacuumVariance, 0.0}; }

CovMatrix2 ensemble_covariance(double n_bar) {
    if (n_bar < 0.0) throw std::invalid_argument("ensemble_covariance: negative mean photon number");
    const double v = kVacuumVariance + 0.5 * n_bar;
    return CovMatrix2{v, v, 0.0};
}

JointCovMatrix4 bs_joint_transform(double signal_var, double env_var, double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw std::invalid_argument("bs_joint_transform: transmittance outside [0, 1]");
    }
    if (signal_var <= 0.0 || env_var <= 0.0) {
        throw std::invalid_argument("bs_joint_transform: variances must be positive");
    }
    const double rt = std::sqrt(t);
    const double rr = std::sqrt(1.0 - t);

    // S = [[rt I2, rr I2], [-rr I2, rt I2]], Sigma_out = S diag(sv,sv,ev,ev) S^T.
    const double out_ss = t * signal_var + (1.0 - t) * env_var;
    const double out_ee = (1.0 - t) * signal_var + t * env_var;
    const double out_se = rt * rr * (env_var - signal_var);

    JointCovMatrix4 m{};
    m[0 * 4 + 0] = out_ss;
    m[1 * 4 + 1] = out_ss;
    m[2 * 4 + 2] = out_ee;
    m[3 * 4 + 3] = out_ee;
    m[0 * 4 + 2] = out_se;
    m[2 * 4 + 0] = out_se;
    m[1 * 4 + 3] = out_se;
    m[3 * 4 + 1] = out_se;
    return m;
}

}  // namespace cvqkd
