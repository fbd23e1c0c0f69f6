#include "cvqkd/security.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cvqkd {

void ReconciliationParams::validate() const {
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw std::invalid_argument("ReconciliationParams: beta outside (0, 1]");
    }
}

void AttackModel::validate() const {
    if (!(eve_noise >= 0.0)) throw std::invalid_argument("AttackModel: negative noise");
}

namespace {

struct Tails {
    double q1 = 0.0;
    double q2 = 0.0;
};

Tails conclusive_tails(double mu, double sigma2, double x0) {
    const double denom = std::sqrt(2.0 * sigma2);
    return Tails{erfc((x0 - mu) / denom), erfc((x0 + mu) / denom)};
}

}  // namespace

double mutual_info_ab(const CoherentAmplitude& alpha, double t, double eta, double xi, double x0) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("mutual_info_ab: bad transmittance");
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("mutual_info_ab: bad efficiency");
    if (!(xi >= 0.0)) throw std::invalid_argument("mutual_info_ab: negative noise");
    if (!(x0 >= 0.0)) throw std::invalid_argument("mutual_info_ab: negative threshold");

    const double mu = std::sqrt(t * eta) * std::abs(alpha.alpha);
    const auto [q1, q2] = conclusive_tails(mu, kVacuumVariance + xi, x0);
    const double qs = q1 + q2;
    if (qs == 0.0) return 0.0;

    double info = 0.5 * qs;
    if (q1 > 0.0) info += 0.5 * q1 * std::log2(q1 / qs);
    if (q2 > 0.0) info += 0.5 * q2 * std::log2(q2 / qs);
    return info;
}

double mutual_info_ab(const ProtocolParams& params) {
    params.validate();
    return mutual_info_ab(params.alpha, params.channel.transmittance, params.detector.eta,
                          total_excess_noise(params.channel, params.detector), params.x0);
}

CoherentAmplitude eve_bs_state(const CoherentAmplitude& alpha, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("eve_bs_state: bad transmittance");
    return CoherentAmplitude{alpha.alpha * std::sqrt(1.0 - t)};
}

double eve_guess_error(const CoherentAmplitude& alpha, double t, double eve_noise) {
    if (!(eve_noise >= 0.0)) throw std::invalid_argument("eve_guess_error: negative noise");
    const double mu_e = std::abs(eve_bs_state(alpha, t).alpha);
    return 0.5 * erfc(mu_e / std::sqrt(2.0 * (kVacuumVariance + eve_noise)));
}

double mutual_info_be(const CoherentAmplitude& alpha, double t, double eta, double xi, double x0,
                      double eve_noise) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("mutual_info_be: bad transmittance");
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("mutual_info_be: bad efficiency");
    if (!(xi >= 0.0 && x0 >= 0.0)) throw std::invalid_argument("mutual_info_be: bad params");

    const double mu_b = std::sqrt(t * eta) * std::abs(alpha.alpha);
    const auto [q1, q2] = conclusive_tails(mu_b, kVacuumVariance + xi, x0);
    const double qs = q1 + q2;
    if (qs == 0.0) return 0.0;
    const double p_e = eve_guess_error(alpha, t, eve_noise);

    // Joint of (Bob bit, Eve guess) given conclusive, marginalized over the
    // equiprobable +/- symbol: p(b, e) = sum_s (1/2) P(b|s) P(e|s) / PSE.
    // Symmetry makes it binary symmetric with crossover
    //   eps = [q1 p_e + q2 (1 - p_e)] / (q1 + q2).
    const double p_agree_num = q1 * (1.0 - p_e) + q2 * p_e;
    const double p_cross_num = q1 * p_e + q2 * (1.0 - p_e);
    const double p11 = 0.5 * p_agree_num / qs;
    const double p10 = 0.5 * p_cross_num / qs;

    double info = 0.0;
    // Marginals are 1/2 each; the four cells are {p11, p10, p10, p11}.
    if (p11 > 0.0) info += 2.0 * p11 * std::log2(p11 / 0.25);
    if (p10 > 0.0) info += 2.0 * p10 * std::log2(p10 / 0.25);
    return std::max(0.0, info);
}

double mutual_info_ae(const CoherentAmplitude& alpha, double t, double eve_noise) {
    return 1.0 - binary_entropy(eve_guess_error(alpha, t, eve_noise));
}

KeyRateReport secret_key_rate(const ProtocolParams& params, const ReconciliationParams& recon,
                              const AttackModel& attack) {
    params.validate();
    recon.validate();
    attack.validate();

    const double t = params.channel.transmittance;
    const double eta = params.detector.eta;
    const double xi = total_excess_noise(params.channel, params.detector);

    KeyRateReport r;
    r.i_ab = mutual_info_ab(params.alpha, t, eta, xi, params.x0);
    r.i_be = mutual_info_be(params.alpha, t, eta, xi, params.x0, attack.eve_noise);
    r.i_ae = mutual_info_ae(params.alpha, t, attack.eve_noise);
    r.pse = pse_theory(params);
    r.sift_fraction = 0.5;

    const double leak = recon.direction == Direction::reverse ? r.i_be : r.i_ae;
    r.k_per_sifted_raw = recon.beta * r.i_ab - leak;
    r.k_per_sifted = std::max(0.0, r.k_per_sifted_raw);
    r.k_per_pulse_raw = r.sift_fraction * r.k_per_sifted_raw;
    r.k_per_pulse = std::max(0.0, r.k_per_pulse_raw);
    return r;
}

std::vector<KeyRateSweepRow> sweep_key_rate(const std::vector<double>& ts,
                                            const std::vector<double>& xis,
                                            const ProtocolParams& base,
                                            const ReconciliationParams& recon,
                                            const AttackModel& attack, double loss_db_per_km) {
    if (ts.empty() || xis.empty()) throw std::invalid_argument("sweep_key_rate: empty grid");
    std::vector<KeyRateSweepRow> rows;
    rows.reserve(ts.size() * xis.size());
    for (double xi : xis) {
        for (double t : ts) {
            ProtocolParams p = base;
            p.channel.transmittance = t;
            p.channel.xi_ch = xi;
            p.detector.xi_ele = 0.0;
            const KeyRateReport report = secret_key_rate(p, recon, attack);
            KeyRateSweepRow row;
            row.t = t;
            row.distance_km = transmittance_to_distance(t, loss_db_per_km);
            row.xi = xi;
            row.i_ab = report.i_ab;
            row.i_be = report.i_be;
            row.k_per_sifted = report.k_per_sifted_raw;
            row.k_per_pulse = report.k_per_pulse_raw;
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<ThresholdSweepRow> sweep_threshold(const std::vector<double>& x0s,
                                               const std::vector<double>& photon_numbers,
                                               const ProtocolParams& base) {
    if (x0s.empty() || photon_numbers.empty()) {
        throw std::invalid_argument("sweep_threshold: empty grid");
    }
    std::vector<ThresholdSweepRow> rows;
    rows.reserve(x0s.size() * photon_numbers.size());
    for (double n_bar : photon_numbers) {
        for (double x0 : x0s) {
            ProtocolParams p = base;
            p.alpha = CoherentAmplitude::from_mean_photon(n_bar);
            p.x0 = x0;
            ThresholdSweepRow row;
            row.x0 = x0;
            row.mean_photon = n_bar;
            row.pse = pse_theory(p);
            row.qber = qber_theory(p);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace cvqkd
