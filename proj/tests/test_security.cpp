#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cvqkd/channel.hpp"
#include "cvqkd/math.hpp"
#include "cvqkd/security.hpp"

namespace {

cvqkd::ProtocolParams point(double n_bar, double t, double eta, double xi_ch, double x0) {
    cvqkd::ProtocolParams p;
    p.alpha = cvqkd::CoherentAmplitude::from_mean_photon(n_bar);
    p.channel = {t, xi_ch};
    p.detector = {eta, 0.0};
    p.x0 = x0;
    p.n_pulses = 1;
    return p;
}

}  // namespace

TEST_CASE("mutual information A:B at the reference point") {
    // alpha = 1, T = 0.9, eta = 1, xi = 0.02, x0 = 0; reference values from
    // 40-digit arithmetic.
    const auto a = cvqkd::CoherentAmplitude::from_mean_photon(1.0);
    CHECK(cvqkd::mutual_info_ab(a, 0.9, 1.0, 0.02, 0.0) ==
          doctest::Approx(0.786196602642707).epsilon(1e-12));

    const auto p = point(1.0, 0.9, 1.0, 0.02, 0.0);
    CHECK(cvqkd::mutual_info_ab(p) == doctest::Approx(0.786196602642707).epsilon(1e-12));
    CHECK(cvqkd::qber_theory(p) == doctest::Approx(0.0339445774309145).epsilon(1e-12));
}

TEST_CASE("identity I_AB = PSE (1 - h2(QBER)) across a parameter grid") {
    for (double n_bar : {0.5, 1.0, 2.0}) {
        for (double t : {0.2, 0.5, 0.9}) {
            for (double xi : {0.0, 0.02, 0.1}) {
                for (double x0 : {0.0, 0.25, 0.8}) {
                    auto p = point(n_bar, t, 1.0, xi, x0);
                    const double i_ab = cvqkd::mutual_info_ab(p);
                    const double expected =
                        cvqkd::pse_theory(p) * (1.0 - cvqkd::binary_entropy(cvqkd::qber_theory(p)));
                    CHECK(i_ab == doctest::Approx(expected).epsilon(1e-10));
                }
            }
        }
    }
}

TEST_CASE("I_AB limiting behavior") {
    // Strong signal, lossless, noiseless channel: one full bit per sifted pulse.
    const auto strong = cvqkd::CoherentAmplitude::from_mean_photon(400.0);
    CHECK(cvqkd::mutual_info_ab(strong, 1.0, 1.0, 0.0, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // Vanishing signal carries no information.
    const auto weak = cvqkd::CoherentAmplitude::from_mean_photon(1e-12);
    CHECK(cvqkd::mutual_info_ab(weak, 0.5, 1.0, 0.02, 0.0) ==
          doctest::Approx(0.0).epsilon(1e-5));

    // A huge threshold kills the conclusive set, and the information with it.
    const auto unit = cvqkd::CoherentAmplitude::from_mean_photon(1.0);
    CHECK(cvqkd::mutual_info_ab(unit, 0.9, 1.0, 0.02, 12.0) < 1e-90);
}

TEST_CASE("eavesdropper tap amplitude and guess error") {
    const auto a = cvqkd::CoherentAmplitude::from_mean_photon(1.0);
    const auto tapped = cvqkd::eve_bs_state(a, 0.9);
    CHECK(std::abs(tapped.alpha) == doctest::Approx(std::sqrt(0.1)).epsilon(1e-14));

    CHECK(cvqkd::eve_guess_error(a, 0.9, 0.0) ==
          doctest::Approx(0.263544628432769).epsilon(1e-12));

    // No tap at T = 1: Eve sees vacuum and guesses at chance.
    CHECK(cvqkd::eve_guess_error(a, 1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    // Full tap at T = 0 with a strong state: Eve nearly always right.
    const auto strong = cvqkd::CoherentAmplitude::from_mean_photon(100.0);
    CHECK(cvqkd::eve_guess_error(strong, 0.0, 0.0) < 1e-80);
    // Extra noise in Eve's detector degrades the guess.
    CHECK(cvqkd::eve_guess_error(a, 0.9, 0.5) > cvqkd::eve_guess_error(a, 0.9, 0.0));
}

TEST_CASE("mutual information with the eavesdropper at the reference point") {
    const auto a = cvqkd::CoherentAmplitude::from_mean_photon(1.0);
    CHECK(cvqkd::mutual_info_ae(a, 0.9, 0.0) ==
          doctest::Approx(0.167951703596283).epsilon(1e-12));
    CHECK(cvqkd::mutual_info_be(a, 0.9, 1.0, 0.02, 0.0, 0.0) ==
          doctest::Approx(0.145098362448464).epsilon(1e-12));
}

TEST_CASE("I_BE reference values across thresholds") {
    const auto a = cvqkd::CoherentAmplitude::from_mean_photon(1.0);
    CHECK(cvqkd::mutual_info_be(a, 0.5, 1.0, 0.05, 0.25, 0.0) ==
          doctest::Approx(0.473108902455).epsilon(1e-10));
    CHECK(cvqkd::mutual_info_be(a, 0.19952623149688796, 1.0, 0.01, 0.5, 0.0) ==
          doctest::Approx(0.541629777656).epsilon(1e-10));
}

TEST_CASE("informations stay inside the unit interval over a broad grid") {
    for (double n_bar : {0.25, 1.0, 4.0}) {
        const auto a = cvqkd::CoherentAmplitude::from_mean_photon(n_bar);
        for (double t : {0.05, 0.3, 0.7, 0.99}) {
            for (double xi : {0.0, 0.05, 0.5}) {
                for (double x0 : {0.0, 0.5, 1.5}) {
                    const double iab = cvqkd::mutual_info_ab(a, t, 1.0, xi, x0);
                    const double ibe = cvqkd::mutual_info_be(a, t, 1.0, xi, x0, 0.0);
                    const double iae = cvqkd::mutual_info_ae(a, t, 0.0);
                    CHECK(iab >= 0.0);
                    CHECK(iab <= 1.0);
                    CHECK(ibe >= 0.0);
                    CHECK(ibe <= 1.0);
                    CHECK(iae >= 0.0);
                    CHECK(iae <= 1.0);
                }
            }
        }
    }
}

TEST_CASE("key rate report at the benchmark operating point") {
    // T = 0.95, eta = 0.76, xi_ch = 0.02, alpha = 1, x0 = 0, beta = 0.95.
    auto p = point(1.0, 0.95, 0.76, 0.02, 0.0);
    cvqkd::ReconciliationParams recon{0.95, cvqkd::Direction::reverse};
    cvqkd::AttackModel attack{cvqkd::AttackKind::beam_splitter, 0.0};

    const auto r = cvqkd::secret_key_rate(p, recon, attack);
    CHECK(r.i_ab == doctest::Approx(0.709382).epsilon(1e-5));
    CHECK(r.i_be == doctest::Approx(0.0705057).epsilon(1e-5));
    CHECK(r.i_ae == doctest::Approx(0.0877932).epsilon(1e-5));
    CHECK(r.pse == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.k_per_sifted_raw == doctest::Approx(0.603407).epsilon(1e-5));
    CHECK(r.k_per_pulse_raw == doctest::Approx(0.301703).epsilon(1e-5));
    CHECK(r.k_per_pulse == r.k_per_pulse_raw);  // positive, no clamping
    CHECK(r.sift_fraction == doctest::Approx(0.5));
}

TEST_CASE("positive key survives 35 km of fiber-grade loss") {
    const double t35 = 0.19952623149688796;  // 35 km at 0.2 dB/km
    auto p = point(1.0, t35, 1.0, 0.01, 0.0);
    cvqkd::ReconciliationParams recon{0.95, cvqkd::Direction::reverse};
    cvqkd::AttackModel attack{};
    const auto r = cvqkd::secret_key_rate(p, recon, attack);
    CHECK(r.k_per_sifted_raw == doctest::Approx(0.030284026).epsilon(1e-6));
    CHECK(r.k_per_sifted > 0.0);
}

TEST_CASE("enough excess noise drives the raw key rate negative and the clamp engages") {
    const double t35 = 0.19952623149688796;
    cvqkd::ReconciliationParams recon{0.95, cvqkd::Direction::reverse};
    cvqkd::AttackModel attack{};

    // Larger amplitude leaks more to the tap; with added channel noise the
    // reverse-reconciliation balance goes negative.
    auto hot = point(4.0, t35, 1.0, 0.1, 0.0);
    const auto r1 = cvqkd::secret_key_rate(hot, recon, attack);
    CHECK(r1.k_per_sifted_raw == doctest::Approx(-0.031977524).epsilon(1e-6));
    CHECK(r1.k_per_sifted == 0.0);
    CHECK(r1.k_per_pulse == 0.0);
    CHECK(r1.k_per_pulse_raw == doctest::Approx(-0.015988762).epsilon(1e-6));

    auto hotter = point(4.0, t35, 1.0, 0.5, 0.0);
    const auto r2 = cvqkd::secret_key_rate(hotter, recon, attack);
    CHECK(r2.k_per_sifted_raw == doctest::Approx(-0.019066393).epsilon(1e-6));

    // Direct reconciliation with overwhelming channel noise is negative for
    // every transmittance on a coarse grid; the best grid point is frozen.
    cvqkd::ReconciliationParams direct{0.95, cvqkd::Direction::direct};
    double best = -1e9;
    for (int i = 1; i < 20; ++i) {
        auto p = point(1.0, 0.05 * i, 1.0, 5.0, 0.0);
        const auto r = cvqkd::secret_key_rate(p, direct, attack);
        CHECK(r.k_per_sifted_raw < 0.0);
        best = std::max(best, r.k_per_sifted_raw);
    }
    CHECK(best == doctest::Approx(-0.012010083).epsilon(1e-6));
}

TEST_CASE("transmittance sweep covers the grid with consistent distances") {
    std::vector<double> ts{0.2, 0.5, 0.9};
    std::vector<double> xis{0.01, 0.05};
    auto base = point(1.0, 1.0, 1.0, 0.0, 0.0);
    cvqkd::ReconciliationParams recon{0.95, cvqkd::Direction::reverse};
    cvqkd::AttackModel attack{};

    const auto rows = cvqkd::sweep_key_rate(ts, xis, base, recon, attack, 0.2);
    REQUIRE(rows.size() == 6);
    for (const auto& row : rows) {
        CHECK(cvqkd::distance_to_transmittance(row.distance_km, 0.2) ==
              doctest::Approx(row.t).epsilon(1e-10));
        CHECK(row.i_ab >= 0.0);
        CHECK(row.i_be >= 0.0);
        CHECK(row.k_per_pulse == doctest::Approx(0.5 * row.k_per_sifted).epsilon(1e-12));
    }

    // At fixed noise the key rate improves with transmittance.
    CHECK(rows[0].xi == doctest::Approx(0.01));
    CHECK(rows[0].k_per_sifted < rows[1].k_per_sifted);
    CHECK(rows[1].k_per_sifted < rows[2].k_per_sifted);

    // At fixed transmittance more channel noise cannot help.
    CHECK(rows[3].k_per_sifted < rows[0].k_per_sifted);
}

TEST_CASE("threshold sweep shows the post-selection trade-off") {
    std::vector<double> x0s;
    for (int i = 0; i <= 20; ++i) x0s.push_back(0.1 * i);
    std::vector<double> n_bars{0.5, 1.0, 2.0};
    auto base = point(1.0, 0.9, 1.0, 0.02, 0.0);

    const auto rows = cvqkd::sweep_threshold(x0s, n_bars, base);
    REQUIRE(rows.size() == x0s.size() * n_bars.size());

    // Within each photon-number band: PSE falls and QBER falls as the
    // threshold rises.
    for (std::size_t band = 0; band < n_bars.size(); ++band) {
        for (std::size_t i = 1; i < x0s.size(); ++i) {
            const auto& prev = rows[band * x0s.size() + i - 1];
            const auto& cur = rows[band * x0s.size() + i];
            CHECK(cur.pse < prev.pse);
            CHECK(cur.qber < prev.qber);
        }
    }

    // Frozen extremes of the grid.
    const auto& first_band_start = rows[0];
    CHECK(first_band_start.pse == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(first_band_start.qber == doctest::Approx(0.098352801).epsilon(1e-7));
    const auto& first_band_end = rows[x0s.size() - 1];
    CHECK(first_band_end.pse == doctest::Approx(0.0052638308).epsilon(1e-7));
    CHECK(first_band_end.qber == doctest::Approx(2.60973398e-5).epsilon(1e-7));

    const auto& last_band_end = rows[rows.size() - 1];
    CHECK(last_band_end.pse == doctest::Approx(0.10257534).epsilon(1e-7));
    CHECK(last_band_end.qber == doctest::Approx(6.1796e-10).epsilon(1e-4));
}

TEST_CASE("input validation on the security surface") {
    const auto a = cvqkd::CoherentAmplitude::from_mean_photon(1.0);
    CHECK_THROWS_AS((void)cvqkd::mutual_info_ab(a, -0.1, 1.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)cvqkd::mutual_info_ab(a, 0.5, 0.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)cvqkd::mutual_info_ab(a, 0.5, 1.0, -0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)cvqkd::mutual_info_ab(a, 0.5, 1.0, 0.0, -0.5), std::invalid_argument);
    CHECK_THROWS_AS((void)cvqkd::eve_bs_state(a, 1.5), std::invalid_argument);

    cvqkd::ReconciliationParams bad_beta{1.5, cvqkd::Direction::reverse};
    CHECK_THROWS_AS(bad_beta.validate(), std::invalid_argument);
    cvqkd::AttackModel bad_noise{cvqkd::AttackKind::beam_splitter, -1.0};
    CHECK_THROWS_AS(bad_noise.validate(), std::invalid_argument);

    std::vector<double> empty;
    std::vector<double> one{0.5};
    auto base = point(1.0, 0.9, 1.0, 0.02, 0.0);
    cvqkd::ReconciliationParams recon{};
    cvqkd::AttackModel attack{};
    CHECK_THROWS_AS((void)cvqkd::sweep_key_rate(empty, one, base, recon, attack),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)cvqkd::sweep_threshold(one, empty, base), std::invalid_argument);
}
