#pragma once

#include <vector>

#include "cvqkd/protocol.hpp"

namespace cvqkd {

enum class Direction : std::uint8_t { direct = 0, reverse = 1 };

struct ReconciliationParams {
    double beta = 0.95;
    Direction direction = Direction::reverse;

    void validate() const;
};

enum class AttackKind : std::uint8_t { beam_splitter = 0 };

struct AttackModel {
    AttackKind kind = AttackKind::beam_splitter;
    double eve_noise = 0.0;  // variance added to Eve's homodyne, shot-noise units

    void validate() const;
};

struct KeyRateReport {
    double i_ab = 0.0;  // bits per sifted pulse (post-selection factor included)
    double i_be = 0.0;  // bits per conclusive pulse
    double i_ae = 0.0;  // bits per conclusive pulse
    double pse = 0.0;
    double sift_fraction = 0.5;
    double k_per_sifted_raw = 0.0;
    double k_per_sifted = 0.0;  // clamped at 0
    double k_per_pulse_raw = 0.0;
    double k_per_pulse = 0.0;  // clamped at 0
};

/// I(A:B) = (q1+q2)/2 + (q1/2) log2(q1/(q1+q2)) + (q2/2) log2(q2/(q1+q2))
/// with q1 = erfc((x0-mu)/sqrt(2 s2)), q2 = erfc((x0+mu)/sqrt(2 s2)),
/// mu = sqrt(T eta) |alpha|, s2 = 1/4 + xi. Zero q terms contribute zero.
double mutual_info_ab(const CoherentAmplitude& alpha, double t, double eta, double xi, double x0);
double mutual_info_ab(const ProtocolParams& params);

/// Eve's kept beam-splitter output: sqrt(1-T) alpha.
CoherentAmplitude eve_bs_state(const CoherentAmplitude& alpha, double t);

/// Probability Eve's sign guess disagrees with the sent symbol:
/// p_E = erfc(sqrt(1-T) |alpha| / sqrt(2 (1/4 + eve_noise))) / 2.
double eve_guess_error(const CoherentAmplitude& alpha, double t, double eve_noise);

/// I(B:E) over Bob-conclusive events. Given the sent symbol sign, Bob's and
/// Eve's samples are independent Gaussians; the (bit, guess) joint collapses
/// to a binary symmetric pair whose crossover mixes the post-selected error
/// rate with Eve's guess error.
double mutual_info_be(const CoherentAmplitude& alpha, double t, double eta, double xi, double x0,
                      double eve_noise);

/// I(A:E) = 1 - h2(p_E).
double mutual_info_ae(const CoherentAmplitude& alpha, double t, double eve_noise);

/// Key rate k = beta I(A:B) - I(B:E) for reverse reconciliation, or
/// beta I(A:B) - I(A:E) for direct; per-pulse values carry the extra 1/2
/// sifting fraction (the post-selection factor is already inside I_AB).
KeyRateReport secret_key_rate(const ProtocolParams& params, const ReconciliationParams& recon,
                              const AttackModel& attack);

struct KeyRateSweepRow {
    double t = 0.0;
    double distance_km = 0.0;
    double xi = 0.0;
    double i_ab = 0.0;
    double i_be = 0.0;
    double k_per_sifted = 0.0;  // raw, may be negative
    double k_per_pulse = 0.0;   // raw, may be negative
};

std::vector<KeyRateSweepRow> sweep_key_rate(const std::vector<double>& ts,
                                            const std::vector<double>& xis,
                                            const ProtocolParams& base,
                                            const ReconciliationParams& recon,
                                            const AttackModel& attack,
                                            double loss_db_per_km = 0.2);

struct ThresholdSweepRow {
    double x0 = 0.0;
    double mean_photon = 0.0;
    double pse = 0.0;
    double qber = 0.0;
};

std::vector<ThresholdSweepRow> sweep_threshold(const std::vector<double>& x0s,
                                               const std::vector<double>& photon_numbers,
                                               const ProtocolParams& base);

}  // namespace cvqkd
