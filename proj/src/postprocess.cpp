#include "cvqkd/postprocess.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "cvqkd/math.hpp"

namespace cvqkd {

void KeyBuffer::advance_stage(KeyStage next) {
    if (static_cast<int>(next) < static_cast<int>(stage)) {
        throw std::logic_error("KeyBuffer: stage may only advance");
    }
    stage = next;
}

ParityCheckMatrix::ParityCheckMatrix(std::size_t m, std::size_t n,
                                     std::vector<std::vector<std::uint32_t>> rows)
    : m_(m), n_(n), row_cols_(std::move(rows)) {
    if (row_cols_.size() != m_) throw std::invalid_argument("ParityCheckMatrix: row count mismatch");
    if (m_ >= n_) throw std::invalid_argument("ParityCheckMatrix: need m < n");
    for (auto& cols : row_cols_) {
        std::sort(cols.begin(), cols.end());
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (cols[k] >= n_) throw std::invalid_argument("ParityCheckMatrix: column out of range");
            if (k > 0 && cols[k] == cols[k - 1]) {
                throw std::invalid_argument("ParityCheckMatrix: duplicate entry in row");
            }
        }
    }
    build_columns();
}

void ParityCheckMatrix::build_columns() {
    col_rows_.assign(n_, {});
    for (std::size_t i = 0; i < m_; ++i) {
        for (std::uint32_t j : row_cols_[i]) col_rows_[j].push_back(static_cast<std::uint32_t>(i));
    }
}

namespace {

/// Unordered check pair seen through one variable; used to spot 4-cycles.
std::uint64_t pack_pair(std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

ParityCheckMatrix ParityCheckMatrix::regular_gallager(std::size_t n, std::uint32_t col_weight,
                                                      std::uint32_t row_weight,
                                                      std::uint64_t seed) {
    if (col_weight == 0 || row_weight == 0) {
        throw std::invalid_argument("regular_gallager: zero weight");
    }
    if ((n * col_weight) % row_weight != 0) {
        throw std::invalid_argument("regular_gallager: socket counts do not divide");
    }
    const std::size_t m = n * col_weight / row_weight;
    if (m >= n) throw std::invalid_argument("regular_gallager: need m < n (row weight > col weight)");

    Rng rng = Rng::substream(seed, Stream::ldpc_construction);
    const std::size_t sockets = n * col_weight;

    // edge_var[s] is the variable owning socket s; check owning socket s is s / row_weight
    // after the permutation is applied.
    std::vector<std::uint32_t> edge_var(sockets);
    for (std::size_t s = 0; s < sockets; ++s) edge_var[s] = static_cast<std::uint32_t>(s / col_weight);
    for (std::size_t s = sockets - 1; s > 0; --s) {
        const std::size_t k = rng.uniform_u32(static_cast<std::uint32_t>(s + 1));
        std::swap(edge_var[s], edge_var[k]);
    }

    auto var_of = [&](std::size_t socket) { return edge_var[socket]; };
    auto check_of = [&](std::size_t socket) {
        return static_cast<std::uint32_t>(socket / row_weight);
    };

    // Repair duplicate edges and 4-cycles by swapping sockets. Each pass scans
    // every variable's check multiset; any repeated unordered check pair across
    // variables (or repeated check within one variable) triggers a swap.
    std::vector<std::vector<std::uint32_t>> var_checks(n);
    for (std::uint32_t pass = 0; pass < 400; ++pass) {
        for (auto& vc : var_checks) vc.clear();
        for (std::size_t s = 0; s < sockets; ++s) var_checks[var_of(s)].push_back(check_of(s));

        std::vector<std::size_t> bad_sockets;
        std::set<std::uint64_t> seen_pairs;
        for (std::size_t v = 0; v < n; ++v) {
            auto& vc = var_checks[v];
            std::sort(vc.begin(), vc.end());
            bool dup = false;
            for (std::size_t k = 1; k < vc.size(); ++k) dup |= vc[k] == vc[k - 1];
            bool cycle = false;
            if (!dup) {
                for (std::size_t a = 0; a < vc.size() && !cycle; ++a) {
                    for (std::size_t b = a + 1; b < vc.size(); ++b) {
                        if (!seen_pairs.insert(pack_pair(vc[a], vc[b])).second) {
                            cycle = true;
                            break;
                        }
                    }
                }
            }
            if (dup || cycle) bad_sockets.push_back(v);
        }
        if (bad_sockets.empty()) break;
        for (std::size_t v : bad_sockets) {
            // Swap one randomly chosen socket of the offending variable.
            std::vector<std::size_t> own;
            for (std::size_t s = 0; s < sockets; ++s) {
                if (var_of(s) == v) own.push_back(s);
            }
            if (own.empty()) continue;
            const std::size_t s = own[rng.uniform_u32(static_cast<std::uint32_t>(own.size()))];
            const std::size_t k = rng.uniform_u32(static_cast<std::uint32_t>(sockets));
            std::swap(edge_var[s], edge_var[k]);
        }
    }

    std::vector<std::vector<std::uint32_t>> rows(m);
    for (auto& r : rows) r.reserve(row_weight);
    for (std::size_t s = 0; s < sockets; ++s) rows[check_of(s)].push_back(var_of(s));
    return ParityCheckMatrix(m, n, std::move(rows));
}

std::vector<std::uint8_t> ParityCheckMatrix::syndrome(const std::vector<std::uint8_t>& bits) const {
    if (bits.size() != n_) throw std::invalid_argument("syndrome: bit count != n");
    std::vector<std::uint8_t> s(m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
        std::uint8_t acc = 0;
        for (std::uint32_t j : row_cols_[i]) acc ^= bits[j];
        s[i] = acc;
    }
    return s;
}

void ParityCheckMatrix::save(std::ostream& os) const {
    os << m_ << ' ' << n_ << '\n';
    for (const auto& cols : row_cols_) {
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (k) os << ' ';
            os << cols[k];
        }
        os << '\n';
    }
}

ParityCheckMatrix ParityCheckMatrix::load(std::istream& is) {
    std::size_t m = 0, n = 0;
    if (!(is >> m >> n)) throw std::runtime_error("ParityCheckMatrix: bad header");
    std::string line;
    std::getline(is, line);
    std::vector<std::vector<std::uint32_t>> rows(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!std::getline(is, line)) throw std::runtime_error("ParityCheckMatrix: truncated file");
        std::stringstream ss(line);
        std::uint32_t col;
        while (ss >> col) rows[i].push_back(col);
    }
    return ParityCheckMatrix(m, n, std::move(rows));
}

ToeplitzSeed ToeplitzSeed::random(std::size_t n_in, std::size_t n_out, Rng& rng) {
    if (n_in == 0 || n_out == 0) throw std::invalid_argument("ToeplitzSeed: zero dimension");
    ToeplitzSeed seed;
    seed.bits.resize(n_in + n_out - 1);
    for (auto& b : seed.bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1);
    return seed;
}

LeakageLedger& LeakageLedger::operator+=(const LeakageLedger& other) {
    pe_bits += other.pe_bits;
    syndrome_bits += other.syndrome_bits;
    hash_seed_bits += other.hash_seed_bits;
    return *this;
}

EstimationResult parameter_estimation(const KeyBuffer& alice, const KeyBuffer& bob, double fraction,
                                      Rng& rng) {
    if (alice.bits.size() != bob.bits.size()) {
        throw std::invalid_argument("parameter_estimation: buffer length mismatch");
    }
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw std::invalid_argument("parameter_estimation: fraction outside (0, 1)");
    }
    const std::size_t n = alice.bits.size();
    const auto n_disclose = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
    if (n_disclose == 0) throw std::invalid_argument("parameter_estimation: nothing to disclose");

    // Partial Fisher-Yates: the first n_disclose entries become the subset.
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t k = 0; k < n_disclose; ++k) {
        const std::size_t j = k + rng.uniform_u32(static_cast<std::uint32_t>(n - k));
        std::swap(idx[k], idx[j]);
    }

    std::vector<std::uint8_t> disclosed(n, 0);
    std::uint64_t mismatches = 0;
    for (std::size_t k = 0; k < n_disclose; ++k) {
        const std::uint32_t i = idx[k];
        disclosed[i] = 1;
        if (alice.bits[i] != bob.bits[i]) ++mismatches;
    }

    EstimationResult result;
    result.qber_estimate = static_cast<double>(mismatches) / static_cast<double>(n_disclose);
    result.disclosed_count = n_disclose;
    result.alice_remaining.origin = KeyOrigin::alice;
    result.bob_remaining.origin = KeyOrigin::bob;
    result.alice_remaining.bits.reserve(n - n_disclose);
    result.bob_remaining.bits.reserve(n - n_disclose);
    for (std::size_t i = 0; i < n; ++i) {
        if (disclosed[i]) continue;
        result.alice_remaining.bits.push_back(alice.bits[i]);
        result.bob_remaining.bits.push_back(bob.bits[i]);
    }
    return result;
}

ReconcileResult reconcile(const KeyBuffer& noisy, const std::vector<std::uint8_t>& reference_syndrome,
                          const ParityCheckMatrix& h, double crossover, std::uint32_t max_iters) {
    if (noisy.bits.size() != h.cols()) {
        throw std::invalid_argument("reconcile: buffer length != code length");
    }
    if (reference_syndrome.size() != h.rows()) {
        throw std::invalid_argument("reconcile: syndrome length != row count");
    }
    if (!(crossover > 0.0 && crossover < 0.5)) {
        throw std::invalid_argument("reconcile: crossover outside (0, 0.5)");
    }

    const std::size_t n = h.cols();
    const std::size_t m = h.rows();
    const double llr0 = std::log((1.0 - crossover) / crossover);

    // Messages indexed by (check, position-within-row).
    std::vector<std::vector<double>> check_to_var(m);
    std::vector<std::vector<double>> var_to_check(m);
    for (std::size_t i = 0; i < m; ++i) {
        check_to_var[i].assign(h.row(i).size(), 0.0);
        var_to_check[i].assign(h.row(i).size(), 0.0);
    }
    // Position of each row entry inside the variable's column list is not
    // needed; variables accumulate sums instead.
    std::vector<double> prior(n);
    for (std::size_t j = 0; j < n; ++j) prior[j] = noisy.bits[j] ? -llr0 : llr0;

    std::vector<double> posterior(n);
    std::vector<std::uint8_t> estimate(n);

    auto syndrome_matches = [&]() {
        for (std::size_t i = 0; i < m; ++i) {
            std::uint8_t acc = 0;
            for (std::uint32_t j : h.row(i)) acc ^= estimate[j];
            if (acc != reference_syndrome[i]) return false;
        }
        return true;
    };

    // Initial variable-to-check messages are the priors.
    for (std::size_t i = 0; i < m; ++i) {
        const auto& cols = h.row(i);
        for (std::size_t k = 0; k < cols.size(); ++k) var_to_check[i][k] = prior[cols[k]];
    }

    ReconcileResult result;
    result.corrected = noisy;
    for (std::uint32_t iter = 1; iter <= max_iters; ++iter) {
        // Check update (tanh rule; syndrome bit 1 flips the sign).
        for (std::size_t i = 0; i < m; ++i) {
            const auto& msgs = var_to_check[i];
            const std::size_t deg = msgs.size();
            double total = reference_syndrome[i] ? -1.0 : 1.0;
            bool zero_seen = false;
            std::size_t zero_at = 0;
            for (std::size_t k = 0; k < deg; ++k) {
                const double t = std::tanh(0.5 * msgs[k]);
                if (t == 0.0) {
                    if (zero_seen) {
                        total = 0.0;
                        break;
                    }
                    zero_seen = true;
                    zero_at = k;
                } else {
                    total *= t;
                }
            }
            for (std::size_t k = 0; k < deg; ++k) {
                double extr;
                if (zero_seen) {
                    extr = (k == zero_at && total != 0.0) ? total : 0.0;
                } else {
                    const double t = std::tanh(0.5 * msgs[k]);
                    extr = total / t;
                }
                extr = std::clamp(extr, -0.999999999999, 0.999999999999);
                check_to_var[i][k] = 2.0 * std::atanh(extr);
            }
        }

        // Variable update and tentative decision.
        for (std::size_t j = 0; j < n; ++j) posterior[j] = prior[j];
        for (std::size_t i = 0; i < m; ++i) {
            const auto& cols = h.row(i);
            for (std::size_t k = 0; k < cols.size(); ++k) posterior[cols[k]] += check_to_var[i][k];
        }
        for (std::size_t j = 0; j < n; ++j) estimate[j] = posterior[j] < 0.0 ? 1 : 0;

        result.iterations = iter;
        if (syndrome_matches()) {
            result.success = true;
            result.corrected.bits = estimate;
            result.corrected.advance_stage(KeyStage::reconciled);
            return result;
        }

        for (std::size_t i = 0; i < m; ++i) {
            const auto& cols = h.row(i);
            for (std::size_t k = 0; k < cols.size(); ++k) {
                var_to_check[i][k] = posterior[cols[k]] - check_to_var[i][k];
            }
        }
    }
    return result;
}

KeyBuffer toeplitz_hash(const KeyBuffer& key, const ToeplitzSeed& seed, std::size_t n_out) {
    const std::size_t n_in = key.bits.size();
    if (n_out == 0 || n_out > n_in) throw std::invalid_argument("toeplitz_hash: bad output length");
    if (seed.bits.size() != n_in + n_out - 1) {
        throw std::invalid_argument("toeplitz_hash: seed length != n_in + n_out - 1");
    }

    // Row i of the matrix is the reversed seed's window starting at
    // n_out - 1 - i, so pack the reversed seed and the key into words and
    // take parities of shifted AND blocks.
    const std::size_t l = seed.bits.size();
    const std::size_t key_words = (n_in + 63) / 64;
    std::vector<std::uint64_t> key_packed(key_words, 0);
    for (std::size_t j = 0; j < n_in; ++j) {
        if (key.bits[j]) key_packed[j / 64] |= 1ULL << (j % 64);
    }
    const std::size_t rev_words = (l + 63) / 64 + 1;
    std::vector<std::uint64_t> rev_packed(rev_words, 0);
    for (std::size_t k = 0; k < l; ++k) {
        if (seed.bits[l - 1 - k]) rev_packed[k / 64] |= 1ULL << (k % 64);
    }

    auto window_word = [&](std::size_t bit_offset, std::size_t word_idx) -> std::uint64_t {
        const std::size_t base = bit_offset / 64 + word_idx;
        const unsigned shift = bit_offset % 64;
        std::uint64_t w = rev_packed[base] >> shift;
        if (shift && base + 1 < rev_packed.size()) w |= rev_packed[base + 1] << (64 - shift);
        return w;
    };

    KeyBuffer out;
    out.origin = key.origin;
    out.stage = KeyStage::final;
    out.bits.resize(n_out);
    for (std::size_t i = 0; i < n_out; ++i) {
        const std::size_t offset = n_out - 1 - i;
        std::uint64_t parity = 0;
        for (std::size_t w = 0; w < key_words; ++w) {
            parity ^= window_word(offset, w) & key_packed[w];
        }
        out.bits[i] = static_cast<std::uint8_t>(std::popcount(parity) & 1);
    }
    return out;
}

std::uint64_t final_key_length(std::uint64_t n_conclusive, double qber, double i_be, double beta,
                               double epsilon_margin) {
    if (!(qber >= 0.0 && qber <= 1.0)) throw std::invalid_argument("final_key_length: bad qber");
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("final_key_length: bad beta");
    if (!(i_be >= 0.0)) throw std::invalid_argument("final_key_length: negative leakage");
    const double usable = beta * (1.0 - binary_entropy(qber)) - i_be;
    const double length = std::floor(static_cast<double>(n_conclusive) * usable - epsilon_margin);
    if (length <= 0.0) return 0;
    return static_cast<std::uint64_t>(length);
}

std::string bits_to_hex(const std::vector<std::uint8_t>& bits) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve((bits.size() + 3) / 4);
    for (std::size_t start = 0; start < bits.size(); start += 4) {
        unsigned nibble = 0;
        for (std::size_t k = 0; k < 4 && start + k < bits.size(); ++k) {
            nibble = (nibble << 1) | bits[start + k];
        }
        const std::size_t got = std::min<std::size_t>(4, bits.size() - start);
        nibble <<= 4 - got;
        out.push_back(digits[nibble]);
    }
    return out;
}

std::vector<std::uint8_t> hex_to_bits(const std::string& hex, std::size_t n_bits) {
    if (hex.size() * 4 < n_bits) throw std::invalid_argument("hex_to_bits: string too short");
    std::vector<std::uint8_t> bits(n_bits, 0);
    for (std::size_t i = 0; i < n_bits; ++i) {
        const char c = hex[i / 4];
        unsigned nibble;
        if (c >= '0' && c <= '9') {
            nibble = static_cast<unsigned>(c - '0');
        } else if (c >= 'a' && c <= 'f') {
            nibble = static_cast<unsigned>(c - 'a') + 10;
        } else if (c >= 'A' && c <= 'F') {
            nibble = static_cast<unsigned>(c - 'A') + 10;
        } else {
            throw std::invalid_argument("hex_to_bits: bad hex digit");
        }
        bits[i] = static_cast<std::uint8_t>((nibble >> (3 - i % 4)) & 1);
    }
    return bits;
}

}  // namespace cvqkd
