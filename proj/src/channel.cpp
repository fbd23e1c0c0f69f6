#include "cvqkd/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqkd {

void ChannelParams::validate() const {
    if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
        throw std::invalid_argument("ChannelParams: transmittance outside [0, 1]");
    }
    if (!(xi_ch >= 0.0)) throw std::invalid_argument("ChannelParams: negative channel noise");
}

void DetectorParams::validate() const {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("DetectorParams: efficiency outside (0, 1]");
    }
    if (!(xi_ele >= 0.0)) throw std::invalid_argument("DetectorParams: negative electronic noise");
}

CovMatrix2 propagate_covariance(const CovMatrix2& in, const ChannelParams& ch) {
    ch.validate();
    const double t = ch.transmittance;
    CovMatrix2 out;
    out.qq = t * (in.qq - kVacuumVariance) + kVacuumVariance + ch.xi_ch;
    out.pp = t * (in.pp - kVacuumVariance) + kVacuumVariance + ch.xi_ch;
    out.qp = t * in.qp;
    return out;
}

CoherentAmplitude propagate_amplitude(const CoherentAmplitude& in, const ChannelParams& ch,
                                      const DetectorParams& det) {
    ch.validate();
    det.validate();
    return CoherentAmplitude{in.alpha * std::sqrt(ch.transmittance * det.eta)};
}

double homodyne_variance(const ChannelParams& ch, const DetectorParams& det) {
    ch.validate();
    det.validate();
    return kVacuumVariance + ch.xi_ch + det.xi_ele;
}

JointCovMatrix4 joint_covariance_ab(const CoherentAmplitude& alpha, const ChannelParams& ch,
                                    const DetectorParams& det) {
    ch.validate();
    det.validate();
    const double v_mod = 0.5 * alpha.mean_photon_number();
    const double v_bob = ch.transmittance * det.eta * v_mod + kVacuumVariance + ch.xi_ch + det.xi_ele;

    JointCovMatrix4 m{};
    m[0 * 4 + 0] = v_mod;
    m[1 * 4 + 1] = v_mod;
    m[2 * 4 + 2] = v_bob;
    m[3 * 4 + 3] = v_bob;
    m[0 * 4 + 2] = v_mod;
    m[2 * 4 + 0] = v_mod;
    m[1 * 4 + 3] = v_mod;
    m[3 * 4 + 1] = v_mod;
    return m;
}

double total_excess_noise(const ChannelParams& ch, const DetectorParams& det) {
    ch.validate();
    det.validate();
    return ch.xi_ch + det.xi_ele;
}

double distance_to_transmittance(double distance_km, double loss_db_per_km) {
    if (distance_km < 0.0) throw std::invalid_argument("distance_to_transmittance: negative distance");
    if (loss_db_per_km < 0.0) throw std::invalid_argument("distance_to_transmittance: negative loss");
    return std::pow(10.0, -loss_db_per_km * distance_km / 10.0);
}

double transmittance_to_distance(double transmittance, double loss_db_per_km) {
    if (!(transmittance > 0.0 && transmittance <= 1.0)) {
        throw std::invalid_argument("transmittance_to_distance: transmittance outside (0, 1]");
    }
    if (loss_db_per_km <= 0.0) {
        throw std::invalid_argument("transmittance_to_distance: loss must be positive");
    }
    return -10.0 * std::log10(transmittance) / loss_db_per_km;
}

}  // namespace cvqkd
