#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cvqkd/channel.hpp"
#include "cvqkd/gaussian.hpp"
#include "cvqkd/rng.hpp"

namespace cvqkd {

struct ProtocolParams {
    CoherentAmplitude alpha = CoherentAmplitude::from_mean_photon(1.0);
    ChannelParams channel{};
    DetectorParams detector{};
    double x0 = 0.0;
    std::uint64_t n_pulses = 1;
    std::uint64_t seed = 0;
    double disclosure_fraction = 0.1;

    void validate() const;
};

enum class Verdict : std::uint8_t { bit0 = 0, bit1 = 1, inconclusive = 2, unsifted = 3 };

struct PreparedPulse {
    SymbolPhase phase = SymbolPhase::deg0;
    std::uint8_t bit = 0;
    Basis basis = Basis::q;
};

struct TrialRecord {
    SymbolPhase alice_phase = SymbolPhase::deg0;
    std::uint8_t alice_bit = 0;
    Basis alice_basis = Basis::q;
    Basis bob_basis = Basis::q;
    double sample = 0.0;
    Verdict verdict = Verdict::unsifted;
};

struct RunSummary {
    std::uint64_t sifted_count = 0;
    std::uint64_t conclusive_count = 0;
    std::uint64_t error_count = 0;
    double pse = 0.0;
    double qber = 0.0;
};

std::vector<PreparedPulse> alice_prepare(std::uint64_t n, Rng& rng);

std::vector<Basis> bob_choose_basis(std::uint64_t n, Rng& rng);

/// Homodyne samples: Gaussian with mean sqrt(T eta) |alpha| cos(phi_A - phi_B)
/// and variance 1/4 + xi_ch + xi_ele.
std::vector<double> simulate_homodyne(const std::vector<PreparedPulse>& prepared,
                                      const std::vector<Basis>& bob_bases,
                                      const ProtocolParams& params, Rng& rng);

/// Keeps exactly the records where the bases match.
std::vector<TrialRecord> sift(const std::vector<TrialRecord>& records);

/// Assigns bit 1 for sample > x0, bit 0 for sample < -x0, inconclusive in
/// between (boundary |sample| = x0 counts as inconclusive). Unsifted records
/// pass through untouched.
void postselect_and_assign(std::vector<TrialRecord>& records, double x0);

/// Counts PSE and QBER over the sifted records. Throws std::runtime_error
/// when no conclusive record exists.
RunSummary empirical_summary(const std::vector<TrialRecord>& records);

/// Closed forms, with mu = sqrt(T eta) |alpha| and sigma^2 = 1/4 + xi:
/// q1 = erfc((x0-mu)/sqrt(2 sigma^2)), q2 = erfc((x0+mu)/sqrt(2 sigma^2)),
/// PSE = (q1+q2)/2, QBER = q2/(q1+q2).
double pse_theory(const ProtocolParams& params);
double qber_theory(const ProtocolParams& params);

/// Runs the whole pipeline: prepare, transmit, measure, sift, post-select.
/// Work is split into fixed-size blocks with per-block RNG substreams, so the
/// output is bit-identical for any n_threads.
std::vector<TrialRecord> simulate_protocol(const ProtocolParams& params, unsigned n_threads = 1);

/// Columnar CSV with header
/// "index,alice_phase_deg,alice_bit,alice_basis,bob_basis,sample,verdict".
void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_records_csv(std::istream& is);

std::string to_string(Verdict v);
std::string to_string(Basis b);

}  // namespace cvqkd
