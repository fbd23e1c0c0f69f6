#pragma once

#include "cvqkd/gaussian.hpp"

namespace cvqkd {

/// Lossy bosonic channel with additive excess noise (shot-noise units where
/// vacuum variance is 1/4).
struct ChannelParams {
    double transmittance = 1.0;
    double xi_ch = 0.0;

    void validate() const;
};

/// Homodyne receiver: detection efficiency and electronic noise referred to
/// the detector input.
struct DetectorParams {
    double eta = 1.0;
    double xi_ele = 0.0;

    void validate() const;
};

/// Single-mode covariance after the channel: diagonal entries map as
/// V -> T (V - 1/4) + 1/4 + xi_ch, the correlation scales by T.
CovMatrix2 propagate_covariance(const CovMatrix2& in, const ChannelParams& ch);

/// Mean quadrature amplitude after channel and detector: sqrt(T eta) alpha.
CoherentAmplitude propagate_amplitude(const CoherentAmplitude& in, const ChannelParams& ch,
                                      const DetectorParams& det);

/// Variance of a homodyne sample about its mean: 1/4 + xi_ch + xi_ele.
double homodyne_variance(const ChannelParams& ch, const DetectorParams& det);

/// Two-mode covariance of sender/receiver data for the symmetrized source.
/// Diagonal blocks (|alpha|^2/2) I2 and (T eta |alpha|^2/2 + 1/4 + xi) I2,
/// off-diagonal (|alpha|^2/2) I2. Row-major, mode order (q_A, p_A, q_B, p_B).
JointCovMatrix4 joint_covariance_ab(const CoherentAmplitude& alpha, const ChannelParams& ch,
                                    const DetectorParams& det);

double total_excess_noise(const ChannelParams& ch, const DetectorParams& det);

/// Fiber-style exponential loss model: T = 10^(-loss_db_per_km * d / 10).
/// Throws std::invalid_argument for negative distance or loss.
double distance_to_transmittance(double distance_km, double loss_db_per_km = 0.2);

double transmittance_to_distance(double transmittance, double loss_db_per_km = 0.2);

}  // namespace cvqkd
