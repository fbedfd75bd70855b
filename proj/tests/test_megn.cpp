#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "megn/spectrum.hpp"

using namespace megn;

namespace {

LinkConfig table_link(int spans = 5) {
    LinkConfig link;
    link.num_spans = spans;
    return link;
}

PulseShape table_pulse() { return PulseShape{}; }

MEGNConfig fast_config(ModelMode mode = ModelMode::approx, int memory = 8) {
    MEGNConfig c;
    c.memory = memory;
    c.mode = mode;
    c.psd_points = 9;
    c.quad.points_per_axis = 101;
    return c;
}

MomentSet gaussian_moments(double p) {
    MomentSet m;
    m.e_a2 = p;
    m.e_a4 = 2.0 * p * p;
    m.e_a6 = 6.0 * p * p * p;
    m.p_ch = p;
    return m;
}

AmplitudeComposition pas_comp(int n) {
    return make_composition({0.4, 0.3, 0.2, 0.1}, {1, 3, 5, 7}, n);
}

}  // namespace

TEST_CASE("gaussian moments reduce the egn term to the gn model") {
    LinkConfig link = table_link();
    PulseShape pulse = table_pulse();
    MEGNConfig cfg = fast_config();
    const double p = 1e-3;
    MomentSet mom = gaussian_moments(p);
    NLISpectrum sp = assemble_spectrum(cfg, pulse, link, mom, zero_covariances(mom, 16, 8));
    for (std::size_t i = 0; i < sp.f_hz.size(); ++i) {
        double phi1 = eval_phi(1, sp.f_hz[i], pulse, link, cfg.quad).value;
        CHECK(sp.g_total[i] == doctest::Approx(p * p * p * phi1).epsilon(1e-9));
        CHECK(sp.g_total[i] == sp.g_egn[i]);  // corrections contribute exact zeros
    }
}

TEST_CASE("zero gamma gives a zero spectrum") {
    LinkConfig link = table_link();
    link.gamma_per_w_km = 0.0;
    MomentSet mom = gaussian_moments(1e-3);
    NLISpectrum sp = assemble_spectrum(fast_config(), table_pulse(), link, mom,
                                       zero_covariances(mom, 16, 8));
    for (double v : sp.g_total) CHECK(v == 0.0);
}

TEST_CASE("cubic homogeneity in the channel power") {
    LinkConfig link = table_link();
    PulseShape pulse = table_pulse();
    MEGNConfig cfg = fast_config();
    AmplitudeComposition base = pas_comp(40);

    auto spectrum_at = [&](double p) {
        double scale = std::sqrt(p / (2.0 * amplitude_moments(base).e2));
        AmplitudeComposition sc = base.scaled(scale);
        MomentSet mom = scheme_moments(sc, 4);
        CovarianceSet cov = covariances_from_correlations(sc, 4, 16, 8);
        return assemble_spectrum(cfg, pulse, link, mom, cov);
    };
    NLISpectrum s1 = spectrum_at(1e-3);
    NLISpectrum s2 = spectrum_at(2e-3);
    for (std::size_t i = 0; i < s1.f_hz.size(); ++i)
        CHECK(s2.g_total[i] == doctest::Approx(8.0 * s1.g_total[i]).epsilon(1e-9));

    // eta is independent of the launch power
    NLIResult r1 = eta_and_snr(s1, 1e-3, link, pulse.symbol_rate_hz);
    NLIResult r2 = eta_and_snr(s2, 2e-3, link, pulse.symbol_rate_hz);
    CHECK(r1.eta_per_w2 == doctest::Approx(r2.eta_per_w2).epsilon(1e-9));
}

TEST_CASE("bookkeeping additivity and frequency symmetry") {
    LinkConfig link = table_link();
    PulseShape pulse = table_pulse();
    MEGNConfig cfg = fast_config(ModelMode::full, 6);
    cfg.exploit_symmetry = false;
    cfg.psd_points = 11;
    AmplitudeComposition comp = pas_comp(40);
    double scale = std::sqrt(1e-3 / (2.0 * amplitude_moments(comp).e2));
    AmplitudeComposition sc = comp.scaled(scale);
    CovarianceSet cov = covariances_from_correlations(sc, 4, 12, 6);
    NLISpectrum sp = assemble_spectrum(cfg, pulse, link, scheme_moments(sc, 4), cov);

    const std::size_t n = sp.f_hz.size();
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(sp.g_total[i] == sp.g_egn[i] + sp.g_spt1[i] + sp.g_spt2[i] + sp.g_xpt1[i] +
                                   sp.g_xpt2[i] + sp.g_xp[i]);
        CHECK(sp.g_total[i] ==
              doctest::Approx(sp.g_total[n - 1 - i]).epsilon(1e-6));  // G(f) = G(-f)
        CHECK(sp.g_egn[i] > 0.0);
    }
    // corrections for short-block CCDM reduce the NLI
    double tot = 0.0, egn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        tot += sp.g_total[i];
        egn += sp.g_egn[i];
    }
    CHECK(tot < egn);
}

TEST_CASE("pm_approx equals approx when polarizations are independent") {
    LinkConfig link = table_link();
    PulseShape pulse = table_pulse();
    MEGNConfig cfg = fast_config(ModelMode::approx, 8);
    AmplitudeComposition comp = pas_comp(32);
    double scale = std::sqrt(1e-3 / (2.0 * amplitude_moments(comp).e2));
    AmplitudeComposition sc = comp.scaled(scale);

    CovarianceSet cov2 = covariances_from_correlations(sc, 2, 16, 8);
    MomentSet mom2 = scheme_moments(sc, 2);
    NLISpectrum a = assemble_spectrum(cfg, pulse, link, mom2, cov2);
    cfg.mode = ModelMode::pm_approx;
    NLISpectrum b = assemble_spectrum(cfg, pulse, link, mom2, cov2);
    for (std::size_t i = 0; i < a.f_hz.size(); ++i)
        CHECK(a.g_total[i] == doctest::Approx(b.g_total[i]).epsilon(1e-9));

    // 4-D mapping has genuine cross-polarization covariances: usage error
    CovarianceSet cov4 = covariances_from_correlations(sc, 4, 16, 8);
    CHECK_THROWS_AS(assemble_spectrum(cfg, pulse, link, scheme_moments(sc, 4), cov4),
                    std::invalid_argument);
}

TEST_CASE("cross-polarization contributions for 4-D mapping reduce the NLI") {
    LinkConfig link = table_link();
    PulseShape pulse = table_pulse();
    MEGNConfig cfg = fast_config(ModelMode::approx, 10);
    cfg.psd_points = 9;
    AmplitudeComposition comp = pas_comp(100);
    double scale = std::sqrt(1e-3 / (2.0 * amplitude_moments(comp).e2));
    AmplitudeComposition sc = comp.scaled(scale);
    NLISpectrum sp = assemble_spectrum(cfg, pulse, link, scheme_moments(sc, 4),
                                       covariances_from_correlations(sc, 4, 25, 10));
    double xp = 0.0, xpt1 = 0.0, spt1 = 0.0;
    for (std::size_t i = 0; i < sp.f_hz.size(); ++i) {
        xp += sp.g_xp[i];
        xpt1 += sp.g_xpt1[i];
        spt1 += sp.g_spt1[i];
    }
    CHECK(xp < 0.0);
    CHECK(xpt1 < 0.0);
    CHECK(spt1 < 0.0);

    // 1-D and 2-D mapping: no XP contribution; XPT1 degrades to the inherent
    // same-polarization term E|a|^2 K_S1(tau) (6 chi1 + 5 chi2 + chi3)
    for (int h : {1, 2}) {
        CovarianceSet covh = covariances_from_correlations(sc, h, 100, 10);
        NLISpectrum s1 = assemble_spectrum(cfg, pulse, link, scheme_moments(sc, h), covh);
        for (std::size_t i = 0; i < s1.f_hz.size(); ++i) {
            CHECK(std::abs(s1.g_xp[i]) <= 1e-9 * s1.g_egn[i]);
            CHECK(s1.g_xpt1[i] < 0.0);
        }
    }
}

TEST_CASE("full and first-order modes agree to better than a percent") {
    LinkConfig link = table_link(10);
    PulseShape pulse = table_pulse();
    MEGNConfig cfg = fast_config(ModelMode::full, 25);
    cfg.quad.points_per_axis = 201;
    cfg.psd_points = 17;
    AmplitudeComposition comp = pas_comp(100);
    double scale = std::sqrt(1e-3 / (2.0 * amplitude_moments(comp).e2));
    AmplitudeComposition sc = comp.scaled(scale);
    MomentSet mom = scheme_moments(sc, 4);
    CovarianceSet cov = covariances_from_correlations(sc, 4, 50, 25);
    std::vector<NLISpectrum> sp = assemble_spectra(
        cfg, pulse, link, {{mom, &cov, ModelMode::full}, {mom, &cov, ModelMode::approx}});
    NLIResult full = eta_and_snr(sp[0], 1e-3, link, pulse.symbol_rate_hz);
    NLIResult approx = eta_and_snr(sp[1], 1e-3, link, pulse.symbol_rate_hz);
    CHECK(std::abs(full.eta_per_w2 - approx.eta_per_w2) < 0.01 * approx.eta_per_w2);
    CHECK(full.eta_per_w2 != approx.eta_per_w2);  // the double sums do contribute
}

TEST_CASE("eta and snr bookkeeping") {
    LinkConfig link = table_link(10);
    PulseShape pulse = table_pulse();
    MomentSet mom = gaussian_moments(1e-3);
    NLISpectrum sp = assemble_spectrum(fast_config(), pulse, link, mom,
                                       zero_covariances(mom, 16, 8));
    NLIResult r = eta_and_snr(sp, 1e-3, link, pulse.symbol_rate_hz);
    CHECK(r.eta_per_w2 > 0.0);
    CHECK(r.p_ase_w > 0.0);
    // P_NLI(P_opt) = P_ASE / 2 by construction
    CHECK(r.eta_per_w2 * std::pow(r.p_opt_w, 3) == doctest::Approx(0.5 * r.p_ase_w).epsilon(1e-9));
    // snr_eff evaluated at p_opt with the same eta equals snr_opt
    double snr_at_opt =
        linear_to_db(r.p_opt_w / (r.p_ase_w + r.eta_per_w2 * std::pow(r.p_opt_w, 3)));
    CHECK(snr_at_opt == doctest::Approx(r.snr_opt_db).epsilon(1e-9));
    CHECK_THROWS_AS(eta_and_snr(sp, 0.0, link, pulse.symbol_rate_hz), std::invalid_argument);
}

TEST_CASE("model configuration validation") {
    MEGNConfig bad;
    bad.memory = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = MEGNConfig{};
    bad.psd_points = 10;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(model_mode_from_string("fast"), std::invalid_argument);
    CHECK(model_mode_from_string("approx") == ModelMode::approx);

    // insufficient covariance window for the requested memory
    LinkConfig link = table_link();
    AmplitudeComposition comp = pas_comp(40);
    CovarianceSet tiny = covariances_from_correlations(comp, 4, 2, 2);
    MEGNConfig cfg = fast_config(ModelMode::approx, 20);
    CHECK_THROWS_AS(assemble_spectrum(cfg, table_pulse(), link, scheme_moments(comp, 4), tiny),
                    std::invalid_argument);
}
