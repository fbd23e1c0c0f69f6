#include "cvqkd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cvqkd {

namespace {
/// Pulses per RNG block. Fixed so that results never depend on thread count.
constexpr std::uint64_t kBlockSize = 8192;
}  // namespace

void ProtocolParams::validate() const {
    channel.validate();
    detector.validate();
    if (!(alpha.mean_photon_number() > 0.0)) {
        throw std::invalid_argument("ProtocolParams: signal amplitude must be nonzero");
    }
    if (!(x0 >= 0.0)) throw std::invalid_argument("ProtocolParams: threshold must be >= 0");
    if (n_pulses < 1) throw std::invalid_argument("ProtocolParams: need at least one pulse");
    if (!(disclosure_fraction >= 0.0 && disclosure_fraction < 1.0)) {
        throw std::invalid_argument("ProtocolParams: disclosure fraction outside [0, 1)");
    }
}

std::vector<PreparedPulse> alice_prepare(std::uint64_t n, Rng& rng) {
    std::vector<PreparedPulse> out(n);
    for (auto& pulse : out) {
        const auto phase = static_cast<SymbolPhase>(rng.uniform_u32(4));
        pulse.phase = phase;
        pulse.bit = static_cast<std::uint8_t>(key_bit(phase));
        pulse.basis = encoding_basis(phase);
    }
    return out;
}

std::vector<Basis> bob_choose_basis(std::uint64_t n, Rng& rng) {
    std::vector<Basis> out(n);
    for (auto& b : out) b = static_cast<Basis>(rng.uniform_u32(2));
    return out;
}

std::vector<double> simulate_homodyne(const std::vector<PreparedPulse>& prepared,
                                      const std::vector<Basis>& bob_bases,
                                      const ProtocolParams& params, Rng& rng) {
    params.validate();
    if (prepared.size() != bob_bases.size()) {
        throw std::invalid_argument("simulate_homodyne: pulse/basis count mismatch");
    }
    const double amp = std::sqrt(params.channel.transmittance * params.detector.eta) *
                       std::abs(params.alpha.alpha);
    const double sigma = std::sqrt(homodyne_variance(params.channel, params.detector));

    std::vector<double> samples(prepared.size());
    for (std::size_t i = 0; i < prepared.size(); ++i) {
        const double phi_b = bob_bases[i] == Basis::q ? 0.0 : 0.5 * kPi;
        const double mu = amp * std::cos(phase_radians(prepared[i].phase) - phi_b);
        samples[i] = rng.gaussian(mu, sigma);
    }
    return samples;
}

std::vector<TrialRecord> sift(const std::vector<TrialRecord>& records) {
    std::vector<TrialRecord> out;
    out.reserve(records.size() / 2);
    for (const auto& r : records) {
        if (r.alice_basis == r.bob_basis) out.push_back(r);
    }
    return out;
}

void postselect_and_assign(std::vector<TrialRecord>& records, double x0) {
    if (!(x0 >= 0.0)) throw std::invalid_argument("postselect_and_assign: threshold must be >= 0");
    for (auto& r : records) {
        if (r.alice_basis != r.bob_basis) {
            r.verdict = Verdict::unsifted;
        } else if (r.sample > x0) {
            r.verdict = Verdict::bit1;
        } else if (r.sample < -x0) {
            r.verdict = Verdict::bit0;
        } else {
            r.verdict = Verdict::inconclusive;
        }
    }
}

RunSummary empirical_summary(const std::vector<TrialRecord>& records) {
    RunSummary s;
    for (const auto& r : records) {
        if (r.verdict == Verdict::unsifted) continue;
        ++s.sifted_count;
        if (r.verdict == Verdict::inconclusive) continue;
        ++s.conclusive_count;
        const std::uint8_t bob_bit = r.verdict == Verdict::bit1 ? 1 : 0;
        if (bob_bit != r.alice_bit) ++s.error_count;
    }
    if (s.conclusive_count == 0) {
        throw std::runtime_error("empirical_summary: no conclusive records");
    }
    s.pse = static_cast<double>(s.conclusive_count) / static_cast<double>(s.sifted_count);
    s.qber = static_cast<double>(s.error_count) / static_cast<double>(s.conclusive_count);
    return s;
}

namespace {

struct TheoryTails {
    double q1 = 0.0;
    double q2 = 0.0;
};

TheoryTails conclusive_tails(const ProtocolParams& params) {
    const double mu = std::sqrt(params.channel.transmittance * params.detector.eta) *
                      std::abs(params.alpha.alpha);
    const double sigma2 = homodyne_variance(params.channel, params.detector);
    const double denom = std::sqrt(2.0 * sigma2);
    TheoryTails t;
    t.q1 = erfc((params.x0 - mu) / denom);
    t.q2 = erfc((params.x0 + mu) / denom);
    return t;
}

}  // namespace

double pse_theory(const ProtocolParams& params) {
    params.validate();
    const auto t = conclusive_tails(params);
    return 0.5 * (t.q1 + t.q2);
}

double qber_theory(const ProtocolParams& params) {
    params.validate();
    const auto t = conclusive_tails(params);
    return t.q2 / (t.q1 + t.q2);
}

std::vector<TrialRecord> simulate_protocol(const ProtocolParams& params, unsigned n_threads) {
    params.validate();
    const std::uint64_t n = params.n_pulses;
    const std::uint64_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
    std::vector<TrialRecord> records(n);

    auto run_block = [&](std::uint64_t block) {
        const std::uint64_t begin = block * kBlockSize;
        const std::uint64_t count = std::min(kBlockSize, n - begin);

        Rng alice_rng = Rng::substream(params.seed, Stream::alice_phase, block);
        Rng bob_rng = Rng::substream(params.seed, Stream::bob_basis, block);
        Rng noise_rng = Rng::substream(params.seed, Stream::channel_noise, block);

        const auto prepared = alice_prepare(count, alice_rng);
        const auto bases = bob_choose_basis(count, bob_rng);
        const auto samples = simulate_homodyne(prepared, bases, params, noise_rng);

        for (std::uint64_t i = 0; i < count; ++i) {
            TrialRecord& r = records[begin + i];
            r.alice_phase = prepared[i].phase;
            r.alice_bit = prepared[i].bit;
            r.alice_basis = prepared[i].basis;
            r.bob_basis = bases[i];
            r.sample = samples[i];
        }
    };

    if (n_threads <= 1 || n_blocks <= 1) {
        for (std::uint64_t b = 0; b < n_blocks; ++b) run_block(b);
    } else {
        const unsigned workers = std::min<std::uint64_t>(n_threads, n_blocks);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::uint64_t b = w; b < n_blocks; b += workers) run_block(b);
            });
        }
        for (auto& t : pool) t.join();
    }

    postselect_and_assign(records, params.x0);
    return records;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::bit0: return "bit0";
        case Verdict::bit1: return "bit1";
        case Verdict::inconclusive: return "inconclusive";
        case Verdict::unsifted: return "unsifted";
    }
    return "?";
}

std::string to_string(Basis b) { return b == Basis::q ? "q" : "p"; }

void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
    os << "index,alice_phase_deg,alice_bit,alice_basis,bob_basis,sample,verdict\n";
    char buf[32];
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        std::snprintf(buf, sizeof(buf), "%.17g", r.sample);
        os << i << ',' << 90 * static_cast<int>(r.alice_phase) << ','
           << static_cast<int>(r.alice_bit) << ',' << to_string(r.alice_basis) << ','
           << to_string(r.bob_basis) << ',' << buf << ',' << to_string(r.verdict) << '\n';
    }
}

namespace {

Basis parse_basis(const std::string& s) {
    if (s == "q") return Basis::q;
    if (s == "p") return Basis::p;
    throw std::runtime_error("records csv: bad basis field '" + s + "'");
}

Verdict parse_verdict(const std::string& s) {
    if (s == "bit0") return Verdict::bit0;
    if (s == "bit1") return Verdict::bit1;
    if (s == "inconclusive") return Verdict::inconclusive;
    if (s == "unsifted") return Verdict::unsifted;
    throw std::runtime_error("records csv: bad verdict field '" + s + "'");
}

}  // namespace

std::vector<TrialRecord> read_records_csv(std::istream& is) {
    std::vector<TrialRecord> out;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("records csv: empty stream");
    if (line.rfind("index,", 0) != 0) throw std::runtime_error("records csv: missing header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        TrialRecord r;

        std::getline(ss, field, ',');  // index, positional only
        std::getline(ss, field, ',');
        const int deg = std::stoi(field);
        if (deg % 90 != 0 || deg < 0 || deg > 270) {
            throw std::runtime_error("records csv: bad phase field '" + field + "'");
        }
        r.alice_phase = static_cast<SymbolPhase>(deg / 90);
        std::getline(ss, field, ',');
        r.alice_bit = static_cast<std::uint8_t>(std::stoi(field));
        std::getline(ss, field, ',');
        r.alice_basis = parse_basis(field);
        std::getline(ss, field, ',');
        r.bob_basis = parse_basis(field);
        std::getline(ss, field, ',');
        r.sample = std::stod(field);
        if (!std::getline(ss, field)) throw std::runtime_error("records csv: truncated row");
        r.verdict = parse_verdict(field);
        out.push_back(r);
    }
    return out;
}

}  // namespace cvqkd
