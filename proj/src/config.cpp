#include "cvqkd/config.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace cvqkd {

using nlohmann::json;

namespace {

json default_tree() {
    return json{
        {"seed", 20240711},
        {"protocol",
         {{"mean_photon", 1.0},
          {"transmittance", 0.9},
          {"xi_ch", 0.02},
          {"eta", 1.0},
          {"xi_ele", 0.0},
          {"x0", 0.0},
          {"n_pulses", 200000},
          {"disclosure_fraction", 0.1}}},
        {"recon", {{"beta", 0.95}, {"direction", "reverse"}}},
        {"attack", {{"eve_noise", 0.0}}},
        {"fig2",
         {{"t_min", 0.02},
          {"t_max", 1.0},
          {"t_step", 0.02},
          {"xis", {0.01, 0.02, 0.05}},
          {"loss_db_per_km", 0.2}}},
        {"fig3", {{"n_pulses", 200000}, {"hist_bins", 80}, {"hist_lo", -4.0}, {"hist_hi", 4.0}}},
        {"fig4",
         {{"x0_min", 0.0},
          {"x0_max", 2.0},
          {"x0_step", 0.1},
          {"photon_numbers", {0.5, 1.0, 2.0}},
          {"mc_pulses", 100000}}},
        {"table1",
         {{"transmittance", 0.95},
          {"eta", 0.76},
          {"xi_ch", 0.02},
          {"xi_ele", 0.0},
          {"mean_photon", 1.0},
          {"x0", 0.0},
          {"n_pulses", 81000}}},
        {"e2e",
         {{"ldpc_n", 4096}, {"ldpc_seed", 7}, {"max_iters", 100}, {"epsilon_margin", 100.0}}},
        {"calibrate",
         {{"lo_powers_mw", {0.025, 0.05, 0.075, 0.1,   0.125, 0.15, 0.175, 0.2,   0.225, 0.25,
                            0.275, 0.3,  0.325, 0.35,  0.375, 0.4,  0.425, 0.45,  0.475, 0.5}},
          {"n_pulses_each", 100000},
          {"detector_gain", 1.0},
          {"clearance", 0.037},
          {"operating_power_mw", 0.25},
          {"n_consistency_pulses", 81000},
          {"trace",
           {{"rep_rate", 1e6},
            {"pulse_width", 30e-9},
            {"sample_rate", 1e8},
            {"gain", 1.0},
            {"shape", "rectangular"}}}}},
        {"output", {{"dir", "out"}, {"format", "csv"}}},
    };
}

/// Overlays user values onto the defaults; every user key must already exist
/// in the defaults, and scalar/array kinds must match.
void merge_checked(json& base, const json& user, const std::string& path) {
    if (!user.is_object()) {
        throw ConfigError("config: expected an object at '" + (path.empty() ? "<root>" : path) +
                          "'");
    }
    for (const auto& [key, value] : user.items()) {
        const std::string child = path.empty() ? key : path + "." + key;
        if (!base.contains(key)) throw ConfigError("config: unknown field '" + child + "'");
        json& slot = base[key];
        if (slot.is_object()) {
            merge_checked(slot, value, child);
        } else if (slot.is_array()) {
            if (!value.is_array()) throw ConfigError("config: expected an array at '" + child + "'");
            slot = value;
        } else if (slot.is_string()) {
            if (!value.is_string()) {
                throw ConfigError("config: expected a string at '" + child + "'");
            }
            slot = value;
        } else {
            if (!value.is_number() && !value.is_boolean()) {
                throw ConfigError("config: expected a number at '" + child + "'");
            }
            slot = value;
        }
    }
}

void apply_override(json& tree, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("config: override must look like path.to.field=value, got '" +
                          assignment + "'");
    }
    const std::string dotted = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    json* node = &tree;
    std::size_t start = 0;
    std::string walked;
    for (;;) {
        const auto dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? dot : dot - start);
        walked = walked.empty() ? key : walked + "." + key;
        if (!node->is_object() || !node->contains(key)) {
            throw ConfigError("config: unknown field '" + walked + "'");
        }
        node = &(*node)[key];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }

    json parsed = json::parse(raw, nullptr, false);
    if (parsed.is_discarded()) parsed = raw;  // bare strings allowed unquoted

    if (node->is_object()) {
        throw ConfigError("config: '" + walked + "' is a group, not a settable field");
    }
    if (node->is_array() && !parsed.is_array()) {
        throw ConfigError("config: expected an array at '" + walked + "'");
    }
    if (node->is_string() && !parsed.is_string()) {
        throw ConfigError("config: expected a string at '" + walked + "'");
    }
    if ((node->is_number() || node->is_boolean()) && !parsed.is_number() && !parsed.is_boolean()) {
        throw ConfigError("config: expected a number at '" + walked + "'");
    }
    *node = parsed;
}

double require_number(const json& tree, const std::string& path) {
    const json* node = &tree;
    std::size_t start = 0;
    for (;;) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
        node = &node->at(key);
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    if (!node->is_number()) throw ConfigError("config: expected a number at '" + path + "'");
    return node->get<double>();
}

std::uint64_t require_count(const json& tree, const std::string& path) {
    const double value = require_number(tree, path);
    if (!(value >= 0.0) || std::floor(value) != value) {
        throw ConfigError("config: expected a non-negative integer at '" + path + "'");
    }
    return static_cast<std::uint64_t>(value);
}

std::vector<double> require_number_array(const json& tree, const json& node,
                                         const std::string& path) {
    (void)tree;
    if (!node.is_array() || node.empty()) {
        throw ConfigError("config: expected a non-empty array at '" + path + "'");
    }
    std::vector<double> out;
    out.reserve(node.size());
    for (const auto& v : node) {
        if (!v.is_number()) throw ConfigError("config: expected numbers in '" + path + "'");
        out.push_back(v.get<double>());
    }
    return out;
}

template <typename Fn>
auto guard(const std::string& path, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("config: invalid value at '" + path + "': " + e.what());
    }
}

}  // namespace

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string to_string(OutputFormat format) {
    return format == OutputFormat::json ? "json" : "csv";
}

ExperimentConfig load_config(const std::string& config_path,
                             const std::vector<std::string>& overrides) {
    json tree = default_tree();

    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("config: cannot open file '" + config_path + "'");
        json user = json::parse(in, nullptr, false);
        if (user.is_discarded()) {
            throw ConfigError("config: file '" + config_path + "' is not valid JSON");
        }
        merge_checked(tree, user, "");
    }
    for (const auto& assignment : overrides) apply_override(tree, assignment);

    ExperimentConfig cfg;
    cfg.seed = require_count(tree, "seed");

    const double mean_photon = require_number(tree, "protocol.mean_photon");
    cfg.protocol.alpha = guard("protocol.mean_photon",
                               [&] { return CoherentAmplitude::from_mean_photon(mean_photon); });
    cfg.protocol.channel.transmittance = require_number(tree, "protocol.transmittance");
    cfg.protocol.channel.xi_ch = require_number(tree, "protocol.xi_ch");
    cfg.protocol.detector.eta = require_number(tree, "protocol.eta");
    cfg.protocol.detector.xi_ele = require_number(tree, "protocol.xi_ele");
    cfg.protocol.x0 = require_number(tree, "protocol.x0");
    cfg.protocol.n_pulses = require_count(tree, "protocol.n_pulses");
    cfg.protocol.disclosure_fraction = require_number(tree, "protocol.disclosure_fraction");
    cfg.protocol.seed = cfg.seed;
    guard("protocol", [&] { cfg.protocol.validate(); return 0; });

    cfg.recon.beta = require_number(tree, "recon.beta");
    const std::string direction = tree.at("recon").at("direction").get<std::string>();
    if (direction == "reverse") {
        cfg.recon.direction = Direction::reverse;
    } else if (direction == "direct") {
        cfg.recon.direction = Direction::direct;
    } else {
        throw ConfigError("config: 'recon.direction' must be 'direct' or 'reverse'");
    }
    guard("recon", [&] { cfg.recon.validate(); return 0; });

    cfg.attack.eve_noise = require_number(tree, "attack.eve_noise");
    guard("attack", [&] { cfg.attack.validate(); return 0; });

    cfg.fig2.t_min = require_number(tree, "fig2.t_min");
    cfg.fig2.t_max = require_number(tree, "fig2.t_max");
    cfg.fig2.t_step = require_number(tree, "fig2.t_step");
    cfg.fig2.xis = require_number_array(tree, tree.at("fig2").at("xis"), "fig2.xis");
    cfg.fig2.loss_db_per_km = require_number(tree, "fig2.loss_db_per_km");
    if (!(cfg.fig2.t_min > 0.0 && cfg.fig2.t_min <= cfg.fig2.t_max && cfg.fig2.t_max <= 1.0)) {
        throw ConfigError("config: 'fig2.t_min'/'fig2.t_max' must satisfy 0 < t_min <= t_max <= 1");
    }
    if (!(cfg.fig2.t_step > 0.0)) throw ConfigError("config: 'fig2.t_step' must be positive");
    if (!(cfg.fig2.loss_db_per_km > 0.0)) {
        throw ConfigError("config: 'fig2.loss_db_per_km' must be positive");
    }
    for (double xi : cfg.fig2.xis) {
        if (!(xi >= 0.0)) throw ConfigError("config: 'fig2.xis' entries must be >= 0");
    }

    cfg.fig3.n_pulses = require_count(tree, "fig3.n_pulses");
    cfg.fig3.hist_bins = require_count(tree, "fig3.hist_bins");
    cfg.fig3.hist_lo = require_number(tree, "fig3.hist_lo");
    cfg.fig3.hist_hi = require_number(tree, "fig3.hist_hi");
    if (cfg.fig3.n_pulses < 1) throw ConfigError("config: 'fig3.n_pulses' must be >= 1");
    if (cfg.fig3.hist_bins < 2) throw ConfigError("config: 'fig3.hist_bins' must be >= 2");
    if (!(cfg.fig3.hist_lo < cfg.fig3.hist_hi)) {
        throw ConfigError("config: 'fig3.hist_lo' must be below 'fig3.hist_hi'");
    }

    cfg.fig4.x0_min = require_number(tree, "fig4.x0_min");
    cfg.fig4.x0_max = require_number(tree, "fig4.x0_max");
    cfg.fig4.x0_step = require_number(tree, "fig4.x0_step");
    cfg.fig4.photon_numbers =
        require_number_array(tree, tree.at("fig4").at("photon_numbers"), "fig4.photon_numbers");
    cfg.fig4.mc_pulses = require_count(tree, "fig4.mc_pulses");
    if (!(cfg.fig4.x0_min >= 0.0 && cfg.fig4.x0_min <= cfg.fig4.x0_max)) {
        throw ConfigError("config: 'fig4.x0_min'/'fig4.x0_max' must satisfy 0 <= min <= max");
    }
    if (!(cfg.fig4.x0_step > 0.0)) throw ConfigError("config: 'fig4.x0_step' must be positive");
    for (double nb : cfg.fig4.photon_numbers) {
        if (!(nb > 0.0)) throw ConfigError("config: 'fig4.photon_numbers' entries must be > 0");
    }
    if (cfg.fig4.mc_pulses < 100) throw ConfigError("config: 'fig4.mc_pulses' must be >= 100");

    cfg.table1.transmittance = require_number(tree, "table1.transmittance");
    cfg.table1.eta = require_number(tree, "table1.eta");
    cfg.table1.xi_ch = require_number(tree, "table1.xi_ch");
    cfg.table1.xi_ele = require_number(tree, "table1.xi_ele");
    cfg.table1.mean_photon = require_number(tree, "table1.mean_photon");
    cfg.table1.x0 = require_number(tree, "table1.x0");
    cfg.table1.n_pulses = require_count(tree, "table1.n_pulses");
    guard("table1", [&] {
        ChannelParams ch{cfg.table1.transmittance, cfg.table1.xi_ch};
        DetectorParams det{cfg.table1.eta, cfg.table1.xi_ele};
        ch.validate();
        det.validate();
        if (cfg.table1.mean_photon <= 0.0 || cfg.table1.x0 < 0.0 || cfg.table1.n_pulses < 1) {
            throw std::invalid_argument("bad table1 protocol values");
        }
        return 0;
    });

    cfg.e2e.ldpc_n = require_count(tree, "e2e.ldpc_n");
    cfg.e2e.ldpc_seed = require_count(tree, "e2e.ldpc_seed");
    cfg.e2e.max_iters = static_cast<std::uint32_t>(require_count(tree, "e2e.max_iters"));
    cfg.e2e.epsilon_margin = require_number(tree, "e2e.epsilon_margin");
    if (cfg.e2e.ldpc_n < 64 || cfg.e2e.ldpc_n % 2 != 0) {
        throw ConfigError("config: 'e2e.ldpc_n' must be an even count >= 64");
    }
    if (cfg.e2e.max_iters < 1) throw ConfigError("config: 'e2e.max_iters' must be >= 1");
    if (!(cfg.e2e.epsilon_margin >= 0.0)) {
        throw ConfigError("config: 'e2e.epsilon_margin' must be >= 0");
    }

    cfg.calibrate.lo_powers_mw = require_number_array(
        tree, tree.at("calibrate").at("lo_powers_mw"), "calibrate.lo_powers_mw");
    cfg.calibrate.n_pulses_each = require_count(tree, "calibrate.n_pulses_each");
    cfg.calibrate.detector_gain = require_number(tree, "calibrate.detector_gain");
    cfg.calibrate.clearance = require_number(tree, "calibrate.clearance");
    cfg.calibrate.operating_power_mw = require_number(tree, "calibrate.operating_power_mw");
    cfg.calibrate.n_consistency_pulses = require_count(tree, "calibrate.n_consistency_pulses");
    cfg.calibrate.trace.rep_rate = require_number(tree, "calibrate.trace.rep_rate");
    cfg.calibrate.trace.pulse_width = require_number(tree, "calibrate.trace.pulse_width");
    cfg.calibrate.trace.sample_rate = require_number(tree, "calibrate.trace.sample_rate");
    cfg.calibrate.trace.gain = require_number(tree, "calibrate.trace.gain");
    const std::string shape = tree.at("calibrate").at("trace").at("shape").get<std::string>();
    if (shape == "rectangular") {
        cfg.calibrate.trace.shape = PulseShape::rectangular;
    } else if (shape == "gaussian") {
        cfg.calibrate.trace.shape = PulseShape::gaussian;
    } else {
        throw ConfigError("config: 'calibrate.trace.shape' must be 'rectangular' or 'gaussian'");
    }
    guard("calibrate.trace", [&] { cfg.calibrate.trace.validate(); return 0; });
    guard("calibrate", [&] {
        BalancedDetectorModel model{cfg.calibrate.detector_gain, cfg.calibrate.clearance,
                                    cfg.calibrate.operating_power_mw};
        model.validate();
        if (cfg.calibrate.n_pulses_each < 2 || cfg.calibrate.lo_powers_mw.size() < 3 ||
            cfg.calibrate.n_consistency_pulses < 1) {
            throw std::invalid_argument("bad calibration scan sizes");
        }
        return 0;
    });

    cfg.output.dir = tree.at("output").at("dir").get<std::string>();
    if (cfg.output.dir.empty()) throw ConfigError("config: 'output.dir' must not be empty");
    const std::string format = tree.at("output").at("format").get<std::string>();
    if (format == "csv") {
        cfg.output.format = OutputFormat::csv;
    } else if (format == "json") {
        cfg.output.format = OutputFormat::json;
    } else {
        throw ConfigError("config: 'output.format' must be 'csv' or 'json'");
    }

    cfg.canonical_json = tree.dump();
    cfg.config_hash = fnv1a64(cfg.canonical_json);
    return cfg;
}

}  // namespace cvqkd
