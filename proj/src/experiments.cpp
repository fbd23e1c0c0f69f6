#include "cvqkd/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "cvqkd/calibration.hpp"
#include "cvqkd/stats.hpp"

namespace cvqkd {

namespace {

unsigned worker_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::string hash_hex(std::uint64_t hash) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string format_count(std::uint64_t value) { return std::to_string(value); }

/// Column-oriented output table; every cell is already formatted so the same
/// bytes land in either format.
struct Table {
    std::string name;
    std::string units_note;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 8);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

std::string write_table(const ExperimentConfig& config, const Table& table) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output.dir);
    const bool json = config.output.format == OutputFormat::json;
    const fs::path path =
        fs::path(config.output.dir) / (table.name + (json ? ".json" : ".csv"));

    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file " + path.string());

    if (json) {
        os << "{\n  \"name\": \"" << json_escape(table.name) << "\",\n";
        os << "  \"config_hash\": \"" << hash_hex(config.config_hash) << "\",\n";
        os << "  \"units\": \"" << json_escape(table.units_note) << "\",\n";
        os << "  \"columns\": [";
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) os << ", ";
            os << '"' << json_escape(table.columns[c]) << '"';
        }
        os << "],\n  \"rows\": [\n";
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            os << "    [";
            for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
                if (c) os << ", ";
                os << '"' << json_escape(table.rows[r][c]) << '"';
            }
            os << (r + 1 < table.rows.size() ? "],\n" : "]\n");
        }
        os << "  ]\n}\n";
    } else {
        os << "# " << table.name << '\n';
        os << "# config_hash: " << hash_hex(config.config_hash) << '\n';
        os << "# units: " << table.units_note << '\n';
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) os << ',';
            os << table.columns[c];
        }
        os << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) os << ',';
                os << row[c];
            }
            os << '\n';
        }
    }
    if (!os) throw std::runtime_error("write failed for " + path.string());
    return path.string();
}

ProtocolParams protocol_from_table1(const ExperimentConfig& config) {
    ProtocolParams params = config.protocol;
    params.alpha = CoherentAmplitude::from_mean_photon(config.table1.mean_photon);
    params.channel.transmittance = config.table1.transmittance;
    params.channel.xi_ch = config.table1.xi_ch;
    params.detector.eta = config.table1.eta;
    params.detector.xi_ele = config.table1.xi_ele;
    params.x0 = config.table1.x0;
    params.n_pulses = config.table1.n_pulses;
    params.seed = config.seed;
    return params;
}

/// Index 0..3 of phi_A - phi_B in quarter turns.
int relative_phase_index(const TrialRecord& r) {
    const int a = static_cast<int>(r.alice_phase);
    const int b = r.bob_basis == Basis::p ? 1 : 0;
    return (a - b + 4) % 4;
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

Fig2Result run_fig2(const ExperimentConfig& config) {
    const auto& grid = config.fig2;
    std::vector<double> ts;
    const auto n_steps =
        static_cast<std::size_t>(std::floor((grid.t_max - grid.t_min) / grid.t_step + 1e-9));
    for (std::size_t i = 0; i <= n_steps; ++i) {
        ts.push_back(std::min(grid.t_max, grid.t_min + grid.t_step * static_cast<double>(i)));
    }

    Fig2Result result;
    result.rows = sweep_key_rate(ts, grid.xis, config.protocol, config.recon, config.attack,
                                 grid.loss_db_per_km);

    char loss[32];
    std::snprintf(loss, sizeof(loss), "%g", grid.loss_db_per_km);

    Table table;
    table.name = "fig2_key_rate";
    table.units_note =
        "transmittance dimensionless; distance km at " + std::string(loss) +
        " dB/km; informations bits per sifted pulse (i_ab) / per conclusive pulse (i_be); "
        "key rates bits, negative values kept";
    table.columns = {"transmittance", "distance_km", "xi",          "i_ab",
                     "i_be",          "k_per_sifted", "k_per_pulse"};
    for (const auto& row : result.rows) {
        table.rows.push_back({format_double(row.t), format_double(row.distance_km),
                              format_double(row.xi), format_double(row.i_ab),
                              format_double(row.i_be), format_double(row.k_per_sifted),
                              format_double(row.k_per_pulse)});
    }
    result.files.push_back(write_table(config, table));
    return result;
}

Fig3Result run_fig3(const ExperimentConfig& config) {
    ProtocolParams params = config.protocol;
    params.n_pulses = config.fig3.n_pulses;
    params.seed = config.seed;

    const auto records = simulate_protocol(params, worker_count());

    std::array<std::vector<double>, 4> groups;
    for (auto& g : groups) g.reserve(records.size() / 4 + 1);
    std::uint64_t sifted = 0;
    for (const auto& r : records) {
        groups[static_cast<std::size_t>(relative_phase_index(r))].push_back(r.sample);
        if (r.verdict != Verdict::unsifted) ++sifted;
    }

    Fig3Result result;
    result.sifted_count = sifted;
    for (int idx = 0; idx < 4; ++idx) {
        const auto& g = groups[static_cast<std::size_t>(idx)];
        Fig3PhaseStats stats;
        stats.rel_phase_deg = 90 * idx;
        stats.n_samples = g.size();
        stats.mean = mean(g);
        stats.variance = sample_variance(g);
        result.phases.push_back(stats);
    }
    const KsResult ks = ks_two_sample(groups[1], groups[3]);
    result.ks_statistic = ks.statistic;
    result.ks_p_value = ks.p_value;

    Table hist;
    hist.name = "fig3_histograms";
    hist.units_note = "relative phase degrees; bin edges in shot-noise units; raw counts";
    hist.columns = {"rel_phase_deg", "bin_lo", "bin_hi", "count"};
    for (int idx = 0; idx < 4; ++idx) {
        const Histogram h = histogram(groups[static_cast<std::size_t>(idx)], config.fig3.hist_bins,
                                      config.fig3.hist_lo, config.fig3.hist_hi);
        for (std::size_t b = 0; b < h.counts.size(); ++b) {
            hist.rows.push_back({format_count(static_cast<std::uint64_t>(90 * idx)),
                                 format_double(h.edges[b]), format_double(h.edges[b + 1]),
                                 format_double(h.counts[b])});
        }
    }
    result.files.push_back(write_table(config, hist));

    Table summary;
    summary.name = "fig3_summary";
    summary.units_note = "Gaussian fit per relative phase; mean/variance in shot-noise units";
    summary.columns = {"rel_phase_deg", "n_samples", "mean", "variance"};
    for (const auto& p : result.phases) {
        summary.rows.push_back({format_count(static_cast<std::uint64_t>(p.rel_phase_deg)),
                                format_count(p.n_samples), format_double(p.mean),
                                format_double(p.variance)});
    }
    result.files.push_back(write_table(config, summary));

    Table ks_table;
    ks_table.name = "fig3_ks";
    ks_table.units_note = "two-sample KS test between the basis-mismatched sample groups";
    ks_table.columns = {"phase_a_deg", "phase_b_deg", "ks_statistic", "p_value"};
    ks_table.rows.push_back(
        {"90", "270", format_double(result.ks_statistic), format_double(result.ks_p_value)});
    result.files.push_back(write_table(config, ks_table));
    return result;
}

Fig4Result run_fig4(const ExperimentConfig& config) {
    const auto& grid = config.fig4;
    std::vector<double> x0s;
    const auto n_steps =
        static_cast<std::size_t>(std::floor((grid.x0_max - grid.x0_min) / grid.x0_step + 1e-9));
    for (std::size_t i = 0; i <= n_steps; ++i) {
        x0s.push_back(std::min(grid.x0_max, grid.x0_min + grid.x0_step * static_cast<double>(i)));
    }

    Fig4Result result;
    std::uint64_t point_index = 0;
    for (double n_bar : grid.photon_numbers) {
        for (double x0 : x0s) {
            ProtocolParams params = config.protocol;
            params.alpha = CoherentAmplitude::from_mean_photon(n_bar);
            params.x0 = x0;
            params.n_pulses = grid.mc_pulses;
            params.seed = config.seed ^ ((point_index + 1) * 0x9e3779b97f4a7c15ULL);
            ++point_index;

            Fig4Row row;
            row.x0 = x0;
            row.mean_photon = n_bar;
            row.pse_theory = pse_theory(params);
            row.qber_theory = qber_theory(params);

            const auto records = simulate_protocol(params, worker_count());
            std::uint64_t n_sifted = 0, n_conclusive = 0, n_errors = 0;
            for (const auto& r : records) {
                if (r.verdict == Verdict::unsifted) continue;
                ++n_sifted;
                if (r.verdict == Verdict::inconclusive) continue;
                ++n_conclusive;
                const std::uint8_t bob_bit = r.verdict == Verdict::bit1 ? 1 : 0;
                if (bob_bit != r.alice_bit) ++n_errors;
            }
            row.n_sifted = n_sifted;
            row.n_conclusive = n_conclusive;
            row.pse_mc = n_sifted ? static_cast<double>(n_conclusive) / static_cast<double>(n_sifted)
                                  : 0.0;
            row.qber_mc = n_conclusive
                              ? static_cast<double>(n_errors) / static_cast<double>(n_conclusive)
                              : 0.0;
            result.rows.push_back(row);
        }
    }

    Table table;
    table.name = "fig4_threshold";
    table.units_note =
        "threshold x0 in shot-noise units; pse/qber dimensionless; _mc columns from " +
        format_count(grid.mc_pulses) + " pulses per point";
    table.columns = {"x0",     "mean_photon", "pse_theory",  "qber_theory",
                     "pse_mc", "qber_mc",     "n_sifted",    "n_conclusive"};
    for (const auto& row : result.rows) {
        table.rows.push_back({format_double(row.x0), format_double(row.mean_photon),
                              format_double(row.pse_theory), format_double(row.qber_theory),
                              format_double(row.pse_mc), format_double(row.qber_mc),
                              format_count(row.n_sifted), format_count(row.n_conclusive)});
    }
    result.files.push_back(write_table(config, table));
    return result;
}

Table1Result run_table1(const ExperimentConfig& config) {
    const ProtocolParams params = protocol_from_table1(config);
    const auto records = simulate_protocol(params, worker_count());
    const RunSummary summary = empirical_summary(records);
    const KeyRateReport report = secret_key_rate(params, config.recon, config.attack);

    Table1Result result;
    result.n_pulses = params.n_pulses;
    result.sifted_count = summary.sifted_count;
    result.conclusive_count = summary.conclusive_count;
    result.pse_empirical = summary.pse;
    result.qber_empirical = summary.qber;
    result.qber_theory = qber_theory(params);
    result.key_rate = report;
    const double i_leak = config.recon.direction == Direction::reverse ? report.i_be : report.i_ae;
    result.final_key_bits = final_key_length(summary.conclusive_count, summary.qber, i_leak,
                                             config.recon.beta, config.e2e.epsilon_margin);
    result.key_per_pulse =
        static_cast<double>(result.final_key_bits) / static_cast<double>(params.n_pulses);

    Table table;
    table.name = "table1_report";
    table.units_note = "counts in pulses/bits; rates dimensionless; key lengths bits";
    table.columns = {"metric", "value"};
    table.rows = {
        {"n_pulses", format_count(result.n_pulses)},
        {"sifted_count", format_count(result.sifted_count)},
        {"conclusive_count", format_count(result.conclusive_count)},
        {"pse_empirical", format_double(result.pse_empirical)},
        {"pse_theory", format_double(pse_theory(params))},
        {"qber_empirical", format_double(result.qber_empirical)},
        {"qber_theory", format_double(result.qber_theory)},
        {"i_ab", format_double(report.i_ab)},
        {"i_be", format_double(report.i_be)},
        {"i_ae", format_double(report.i_ae)},
        {"beta", format_double(config.recon.beta)},
        {"direction", config.recon.direction == Direction::reverse ? "reverse" : "direct"},
        {"k_per_sifted_formula", format_double(report.k_per_sifted_raw)},
        {"k_per_pulse_formula", format_double(report.k_per_pulse_raw)},
        {"final_key_bits", format_count(result.final_key_bits)},
        {"key_per_pulse", format_double(result.key_per_pulse)},
        {"note", "zero threshold makes the closed-form post-selection efficiency exactly 1"},
    };
    result.files.push_back(write_table(config, table));
    return result;
}

E2eResult run_e2e(const ExperimentConfig& config) {
    ProtocolParams params = config.protocol;
    params.seed = config.seed;
    const auto records = simulate_protocol(params, worker_count());

    E2eResult result;
    KeyBuffer alice{{}, KeyOrigin::alice, KeyStage::raw};
    KeyBuffer bob{{}, KeyOrigin::bob, KeyStage::raw};
    for (const auto& r : records) {
        if (r.verdict == Verdict::unsifted) continue;
        ++result.sifted_count;
        if (r.verdict == Verdict::inconclusive) continue;
        alice.bits.push_back(r.alice_bit);
        bob.bits.push_back(r.verdict == Verdict::bit1 ? 1 : 0);
    }
    result.conclusive_count = alice.bits.size();

    const KeyRateReport report = secret_key_rate(params, config.recon, config.attack);
    const double i_leak = config.recon.direction == Direction::reverse ? report.i_be : report.i_ae;

    auto emit_report = [&](const std::string& outcome) {
        Table table;
        table.name = "e2e_report";
        table.units_note = "counts in bits; keys hex, first bit = most significant nibble bit";
        table.columns = {"metric", "value"};
        table.rows = {
            {"outcome", outcome},
            {"n_pulses", format_count(params.n_pulses)},
            {"sifted_count", format_count(result.sifted_count)},
            {"conclusive_count", format_count(result.conclusive_count)},
            {"qber_estimate", format_double(result.qber_estimate)},
            {"disclosed_bits", format_count(result.ledger.pe_bits)},
            {"blocks_total", format_count(result.blocks_total)},
            {"blocks_ok", format_count(result.blocks_ok)},
            {"reconciled_bits", format_count(result.reconciled_bits)},
            {"syndrome_bits", format_count(result.ledger.syndrome_bits)},
            {"hash_seed_bits", format_count(result.ledger.hash_seed_bits)},
            {"leakage_total", format_count(result.ledger.total())},
            {"final_key_bits", format_count(result.final_key_bits)},
            {"keys_match", result.success ? "true" : "false"},
            {"alice_key_hex", result.alice_key_hex},
            {"bob_key_hex", result.bob_key_hex},
        };
        result.files.push_back(write_table(config, table));
    };

    if (!(params.disclosure_fraction > 0.0)) {
        throw ConfigError("config: 'protocol.disclosure_fraction' must be > 0 for the e2e pipeline");
    }
    if (static_cast<double>(result.conclusive_count) * params.disclosure_fraction < 1.0 ||
        result.conclusive_count < 16) {
        result.zero_key = true;
        result.success = true;
        emit_report("zero_key_insufficient_data");
        return result;
    }

    Rng pe_rng = Rng::substream(config.seed, Stream::disclosure);
    EstimationResult est =
        parameter_estimation(alice, bob, params.disclosure_fraction, pe_rng);
    result.qber_estimate = est.qber_estimate;
    result.ledger.pe_bits = est.disclosed_count;

    const double crossover = std::clamp(est.qber_estimate, 1e-4, 0.49);
    const double formula_fraction =
        config.recon.beta * (1.0 - binary_entropy(crossover)) - i_leak;
    const std::size_t n_blocks = est.alice_remaining.bits.size() / config.e2e.ldpc_n;

    if (formula_fraction <= 0.0 || n_blocks == 0) {
        result.zero_key = true;
        result.success = true;
        emit_report(formula_fraction <= 0.0 ? "zero_key_noise_above_cutoff"
                                            : "zero_key_insufficient_data");
        return result;
    }

    const ParityCheckMatrix h =
        ParityCheckMatrix::regular_gallager(config.e2e.ldpc_n, 3, 6, config.e2e.ldpc_seed);
    result.blocks_total = n_blocks;

    // Reverse reconciliation corrects Alice's data toward Bob's reference;
    // direct reconciliation is the mirror image.
    const bool reverse = config.recon.direction == Direction::reverse;
    const KeyBuffer& reference = reverse ? est.bob_remaining : est.alice_remaining;
    const KeyBuffer& noisy = reverse ? est.alice_remaining : est.bob_remaining;

    std::vector<std::uint8_t> kept_reference;
    std::vector<std::uint8_t> kept_corrected;
    kept_reference.reserve(n_blocks * config.e2e.ldpc_n);
    kept_corrected.reserve(n_blocks * config.e2e.ldpc_n);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const std::size_t start = b * config.e2e.ldpc_n;
        KeyBuffer noisy_block{{noisy.bits.begin() + static_cast<std::ptrdiff_t>(start),
                               noisy.bits.begin() + static_cast<std::ptrdiff_t>(start + config.e2e.ldpc_n)},
                              noisy.origin,
                              KeyStage::raw};
        std::vector<std::uint8_t> ref_block(
            reference.bits.begin() + static_cast<std::ptrdiff_t>(start),
            reference.bits.begin() + static_cast<std::ptrdiff_t>(start + config.e2e.ldpc_n));

        const auto syn = h.syndrome(ref_block);
        result.ledger.syndrome_bits += h.rows();
        const ReconcileResult rec = reconcile(noisy_block, syn, h, crossover, config.e2e.max_iters);
        if (!rec.success || rec.corrected.bits != ref_block) continue;
        ++result.blocks_ok;
        kept_reference.insert(kept_reference.end(), ref_block.begin(), ref_block.end());
        kept_corrected.insert(kept_corrected.end(), rec.corrected.bits.begin(),
                              rec.corrected.bits.end());
    }
    result.reconciled_bits = kept_reference.size();

    if (result.blocks_ok == 0) {
        result.success = false;
        emit_report("reconciliation_failed");
        return result;
    }

    // Both information-theoretic and realized-leakage budgets; the final key
    // honors the tighter of the two.
    const std::uint64_t formula_len =
        final_key_length(result.reconciled_bits, crossover, i_leak, config.recon.beta,
                         config.e2e.epsilon_margin);
    const double realized_budget =
        static_cast<double>(result.reconciled_bits) * (1.0 - i_leak) -
        0.5 * static_cast<double>(result.reconciled_bits) - config.e2e.epsilon_margin;
    const std::uint64_t realized_len =
        realized_budget <= 0.0 ? 0 : static_cast<std::uint64_t>(std::floor(realized_budget));
    result.final_key_bits = std::min(formula_len, realized_len);

    if (result.final_key_bits == 0) {
        result.zero_key = true;
        result.success = true;
        emit_report("zero_key_noise_above_cutoff");
        return result;
    }

    Rng hash_rng = Rng::substream(config.seed, Stream::toeplitz_seed);
    const ToeplitzSeed seed =
        ToeplitzSeed::random(result.reconciled_bits, result.final_key_bits, hash_rng);
    result.ledger.hash_seed_bits = seed.bits.size();

    // Each party hashes the bits it actually holds after reconciliation.
    const std::vector<std::uint8_t>& alice_bits = reverse ? kept_corrected : kept_reference;
    const std::vector<std::uint8_t>& bob_bits = reverse ? kept_reference : kept_corrected;
    const KeyBuffer alice_final = toeplitz_hash(
        KeyBuffer{alice_bits, KeyOrigin::alice, KeyStage::reconciled}, seed,
        result.final_key_bits);
    const KeyBuffer bob_final = toeplitz_hash(
        KeyBuffer{bob_bits, KeyOrigin::bob, KeyStage::reconciled}, seed, result.final_key_bits);
    result.alice_key_hex = bits_to_hex(alice_final.bits);
    result.bob_key_hex = bits_to_hex(bob_final.bits);
    result.success = result.alice_key_hex == result.bob_key_hex;

    emit_report(result.success ? "ok" : "final_key_mismatch");
    return result;
}

CalibrateResult run_calibrate(const ExperimentConfig& config) {
    const auto& cal = config.calibrate;
    BalancedDetectorModel model{cal.detector_gain, cal.clearance, cal.operating_power_mw};

    CalibrateResult result;
    Rng scan_rng = Rng::substream(config.seed, Stream::calibration, 0);
    result.fit = shot_noise_scan(cal.lo_powers_mw, cal.n_pulses_each, model, scan_rng);

    const double xi_ele_implied = model.clearance * kVacuumVariance;

    ProtocolParams direct_params = config.protocol;
    direct_params.n_pulses = cal.n_consistency_pulses;
    direct_params.detector.xi_ele = xi_ele_implied;
    direct_params.seed = config.seed;
    const auto direct_records = simulate_protocol(direct_params, worker_count());
    result.direct = empirical_summary(direct_records);

    // Same seed with electronic noise stripped: the trace route adds it back
    // through the waveform instead.
    ProtocolParams optical_params = direct_params;
    optical_params.detector.xi_ele = 0.0;
    auto trace_records = simulate_protocol(optical_params, worker_count());

    std::vector<double> scaled(trace_records.size());
    for (std::size_t i = 0; i < trace_records.size(); ++i) {
        scaled[i] = model.gain * trace_records[i].sample;
    }
    const double sigma_sample = cal.trace.gain * model.gain *
                                std::sqrt(model.clearance * kVacuumVariance *
                                          envelope_energy(cal.trace));
    Rng trace_rng = Rng::substream(config.seed, Stream::calibration, 1);
    const auto trace = synthesize_trace(scaled, cal.trace, sigma_sample, trace_rng);
    const auto raw = integrate_pulses(trace, cal.trace);
    const auto normalized = snu_normalize(raw, result.fit);

    for (std::size_t i = 0; i < trace_records.size(); ++i) {
        trace_records[i].sample = normalized[i];
    }
    postselect_and_assign(trace_records, direct_params.x0);
    result.via_trace = empirical_summary(trace_records);

    namespace fs = std::filesystem;
    fs::create_directories(config.output.dir);
    const std::size_t demo_pulses = std::min<std::size_t>(200, trace_records.size());
    const std::vector<float> demo_trace(trace.begin(),
                                        trace.begin() + static_cast<std::ptrdiff_t>(
                                                            demo_pulses *
                                                            cal.trace.samples_per_period()));
    const std::string trace_path =
        (fs::path(config.output.dir) / "calibrate_trace_sample.f32").string();
    save_trace(trace_path, demo_trace, cal.trace);
    result.files.push_back(trace_path);
    result.files.push_back(trace_path + ".json");

    Table fit_table;
    fit_table.name = "calibrate_fit";
    fit_table.units_note =
        "slope raw-variance per mW; intercept raw variance; snu raw-variance per shot-noise unit";
    fit_table.columns = {"metric", "value"};
    fit_table.rows = {
        {"slope", format_double(result.fit.slope)},
        {"intercept", format_double(result.fit.intercept)},
        {"r_squared", format_double(result.fit.r_squared)},
        {"snu", format_double(result.fit.snu)},
        {"clearance_recovered", format_double(result.fit.clearance)},
        {"clearance_configured", format_double(model.clearance)},
        {"xi_ele_implied", format_double(xi_ele_implied)},
        {"operating_power_mw", format_double(model.operating_power_mw)},
    };
    result.files.push_back(write_table(config, fit_table));

    Table consistency;
    consistency.name = "calibrate_consistency";
    consistency.units_note = "per-path protocol summaries; counts in pulses";
    consistency.columns = {"path",        "sifted_count", "conclusive_count",
                           "error_count", "pse",          "qber"};
    const auto add_row = [&](const std::string& label, const RunSummary& s) {
        consistency.rows.push_back({label, format_count(s.sifted_count),
                                    format_count(s.conclusive_count), format_count(s.error_count),
                                    format_double(s.pse), format_double(s.qber)});
    };
    add_row("direct", result.direct);
    add_row("via_trace", result.via_trace);
    result.files.push_back(write_table(config, consistency));
    return result;
}

}  // namespace cvqkd
