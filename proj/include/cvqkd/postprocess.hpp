#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cvqkd/rng.hpp"

namespace cvqkd {

enum class KeyOrigin : std::uint8_t { alice = 0, bob = 1 };
enum class KeyStage : std::uint8_t { raw = 0, reconciled = 1, final = 2 };

struct KeyBuffer {
    std::vector<std::uint8_t> bits;  // one bit per element, values 0/1
    KeyOrigin origin = KeyOrigin::alice;
    KeyStage stage = KeyStage::raw;

    /// Stages only move forward (raw -> reconciled -> final).
    void advance_stage(KeyStage next);
};

/// Sparse binary parity-check matrix, stored as per-row sorted column lists.
class ParityCheckMatrix {
  public:
    ParityCheckMatrix() = default;
    ParityCheckMatrix(std::size_t m, std::size_t n, std::vector<std::vector<std::uint32_t>> rows);

    /// (col_weight, 2*col_weight)-regular Gallager construction from a seeded
    /// socket permutation, repaired to remove duplicate edges and 4-cycles.
    static ParityCheckMatrix regular_gallager(std::size_t n, std::uint32_t col_weight,
                                              std::uint32_t row_weight, std::uint64_t seed);

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }
    const std::vector<std::uint32_t>& row(std::size_t i) const { return row_cols_[i]; }
    const std::vector<std::uint32_t>& col(std::size_t j) const { return col_rows_[j]; }

    std::vector<std::uint8_t> syndrome(const std::vector<std::uint8_t>& bits) const;

    /// Text format: first line "m n", then one line per row with the sorted
    /// column indices separated by spaces.
    void save(std::ostream& os) const;
    static ParityCheckMatrix load(std::istream& is);

  private:
    void build_columns();

    std::size_t m_ = 0;
    std::size_t n_ = 0;
    std::vector<std::vector<std::uint32_t>> row_cols_;
    std::vector<std::vector<std::uint32_t>> col_rows_;
};

struct ToeplitzSeed {
    std::vector<std::uint8_t> bits;  // length n_in + n_out - 1

    static ToeplitzSeed random(std::size_t n_in, std::size_t n_out, Rng& rng);
};

struct LeakageLedger {
    std::uint64_t pe_bits = 0;
    std::uint64_t syndrome_bits = 0;
    std::uint64_t hash_seed_bits = 0;

    std::uint64_t total() const { return pe_bits + syndrome_bits + hash_seed_bits; }
    LeakageLedger& operator+=(const LeakageLedger& other);
};

struct EstimationResult {
    double qber_estimate = 0.0;
    std::uint64_t disclosed_count = 0;
    KeyBuffer alice_remaining;
    KeyBuffer bob_remaining;
};

/// Discloses a uniform index subset of the given fraction, compares, and
/// removes the disclosed positions from both buffers. Throws on length
/// mismatch or fraction outside (0, 1).
EstimationResult parameter_estimation(const KeyBuffer& alice, const KeyBuffer& bob,
                                      double fraction, Rng& rng);

struct ReconcileResult {
    bool success = false;
    KeyBuffer corrected;
    std::uint32_t iterations = 0;
};

/// Belief-propagation syndrome decoding over a binary symmetric channel with
/// the given crossover probability. Succeeds iff the corrected buffer
/// reproduces the reference syndrome within max_iters sweeps.
ReconcileResult reconcile(const KeyBuffer& noisy, const std::vector<std::uint8_t>& reference_syndrome,
                          const ParityCheckMatrix& h, double crossover, std::uint32_t max_iters);

/// out = T(seed) * key over GF(2) with T[i][j] = seed[i - j + n_in - 1].
KeyBuffer toeplitz_hash(const KeyBuffer& key, const ToeplitzSeed& seed, std::size_t n_out);

/// floor(n_conclusive * (beta*(1 - h2(qber)) - i_be) - epsilon_margin),
/// clamped at zero.
std::uint64_t final_key_length(std::uint64_t n_conclusive, double qber, double i_be, double beta,
                               double epsilon_margin);

std::string bits_to_hex(const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> hex_to_bits(const std::string& hex, std::size_t n_bits);

}  // namespace cvqkd
