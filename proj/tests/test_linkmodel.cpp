#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "megn/link.hpp"
#include "megn/linkfn.hpp"

using namespace megn;

namespace {

LinkConfig table_link(int spans = 10) {
    LinkConfig link;
    link.alpha_db_per_km = 0.22;
    link.dispersion_ps_nm_km = 16.7;
    link.gamma_per_w_km = 1.3;
    link.span_length_km = 100.0;
    link.num_spans = spans;
    link.center_wavelength_nm = 1550.0;
    link.edfa_noise_figure_db = 6.0;
    return link;
}

PulseShape table_pulse() {
    PulseShape p;
    p.symbol_rate_hz = 32e9;
    p.rolloff = 0.05;
    return p;
}

}  // namespace

TEST_CASE("beta2 conversion") {
    CHECK(beta2_from_dispersion(0.0, 1550.0) == 0.0);
    // -D lambda^2/(2 pi c) at D=16.7 ps/nm/km, 1550 nm
    CHECK(beta2_from_dispersion(16.7, 1550.0) == doctest::Approx(-2.1301e-26).epsilon(1e-4));
    double b1 = beta2_from_dispersion(16.7, 1550.0);
    double b2 = beta2_from_dispersion(33.4, 1550.0);
    CHECK(b2 == doctest::Approx(2.0 * b1).epsilon(1e-14));
    CHECK(b1 < 0.0);
    CHECK_THROWS_AS(beta2_from_dispersion(16.7, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(beta2_from_dispersion(16.7, -1550.0), std::invalid_argument);
}

TEST_CASE("link derived SI values are finite") {
    LinkConfig link = table_link();
    link.validate();
    CHECK(link.alpha_np_per_m() == doctest::Approx(0.22 * std::log(10.0) / 20.0 * 1e-3));
    CHECK(std::isfinite(link.beta2_s2_per_m()));
    CHECK(link.beta2_s2_per_m() < 0.0);
    CHECK(link.span_gain_linear() == doctest::Approx(std::pow(10.0, 2.2)));
}

TEST_CASE("link validation rejects bad parameters") {
    LinkConfig link = table_link();
    link.num_spans = 0;
    CHECK_THROWS_AS(link.validate(), std::invalid_argument);
    link = table_link();
    link.alpha_db_per_km = -0.1;
    CHECK_THROWS_AS(link.validate(), std::invalid_argument);
    link = table_link();
    link.span_length_km = 0.0;
    CHECK_THROWS_AS(link.validate(), std::invalid_argument);
}

TEST_CASE("rrc spectrum: even, non-negative, unit energy at symbol period") {
    PulseShape p = table_pulse();
    p.validate();
    for (double f : {0.0, 3e9, 15e9, 16e9, 16.7e9}) {
        CHECK(p.spectrum(f) == p.spectrum(-f));
        CHECK(p.spectrum(f) >= 0.0);
    }
    CHECK(p.spectrum(17e9) == 0.0);  // beyond (1+rolloff) Rs/2

    // Rs * integral |S|^2 df = 1: trapezoid over the full support
    const int n = 200001;
    const double b = p.max_freq_hz();
    const double h = 2.0 * b / (n - 1);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double f = -b + i * h;
        double s = p.spectrum(f);
        double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        acc += w * s * s * h;
    }
    CHECK(p.symbol_rate_hz * acc == doctest::Approx(1.0).epsilon(1e-6));

    PulseShape bad;
    bad.rolloff = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("zeta: phase-matched limit, lossy limit, product dependence") {
    LinkConfig link = table_link();
    double alpha = link.alpha_np_per_m();
    double ls = link.span_length_m();
    double gamma = link.gamma_per_w_m();
    cplx pm = zeta(5e9, 3e9, 5e9, link);  // (f1-f)(f2-f) = 0
    double expected = gamma * (1.0 - std::exp(-2.0 * alpha * ls)) / (2.0 * alpha);
    CHECK(pm.real() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(pm.imag() == doctest::Approx(0.0));

    // |zeta| ~ gamma/(2 alpha) for large alpha: four decades of loss shrink it
    LinkConfig lossy = link;
    lossy.alpha_db_per_km = 2200.0;
    CHECK(std::abs(zeta(1e9, 2e9, 0.0, lossy)) < 1e-3 * std::abs(zeta(1e9, 2e9, 0.0, link)));

    CHECK(zeta(10e9, 10e9, 10e9, link) == zeta(-10e9, -10e9, -10e9, link));
    // same (f1-f)(f2-f) product across different triples
    cplx a = zeta(4e9, 6e9, 1e9, link);   // 3e9 * 5e9
    cplx b = zeta(6e9, 4e9, 1e9, link);   // swap
    cplx c = zeta(16e9, 2e9, 1e9, link);  // 15e9 * 1e9
    CHECK(std::abs(a - b) <= 1e-15 * std::abs(a));
    CHECK(std::abs(a - c) <= 1e-12 * std::abs(a));
}

TEST_CASE("nu: span coherence factor") {
    LinkConfig one = table_link(1);
    CHECK(nu(1.3e9, -4e9, 2e9, one) == cplx(1.0, 0.0));

    LinkConfig ten = table_link(10);
    CHECK(std::abs(nu(1e3, 2e3, 0.0, ten) - cplx(10.0, 0.0)) < 1e-6);

    // |nu| <= Ns over a frequency grid
    for (int i = -20; i <= 20; ++i)
        for (int j = -20; j <= 20; ++j) {
            double f1 = i * 0.8e9, f2 = j * 0.8e9;
            CHECK(std::abs(nu(f1, f2, 0.0, ten)) <= 10.0 + 1e-9);
        }
}

TEST_CASE("nu: continuity across removable singularities") {
    // theta*Ls = k*pi for k = 0 and k != 0, even and odd span counts
    for (int ns : {2, 3, 10}) {
        LinkConfig link = table_link(ns);
        double beta2 = link.beta2_s2_per_m();
        double ls = link.span_length_m();
        auto nu_at_theta = [&](double theta_ls) {
            double f1 = 1e9;
            double f2 = theta_ls / (2.0 * pi * pi * beta2 * ls) / f1;
            return nu(f1, f2, 0.0, link);
        };
        for (int k : {0, 1, 2, -3}) {
            cplx at = nu_at_theta(k * pi + 1e-13);  // analytic-limit branch
            cplx lo = nu_at_theta(k * pi - 1e-7);   // regular branch, either side
            cplx hi = nu_at_theta(k * pi + 1e-7);
            CHECK(std::abs(lo - at) < 1e-4 * static_cast<double>(ns));
            CHECK(std::abs(hi - at) < 1e-4 * static_cast<double>(ns));
            CHECK(std::abs(at) == doctest::Approx(static_cast<double>(ns)).epsilon(1e-9));
        }
    }
}

TEST_CASE("mu: product of zeta and nu") {
    LinkConfig one = table_link(1);
    CHECK(mu(3e9, -2e9, 1e9, one) == zeta(3e9, -2e9, 1e9, one));

    LinkConfig ten = table_link(10);
    for (double f1 : {-9e9, 2.5e9}) {
        cplx m = mu(f1, 4e9, -1e9, ten);
        CHECK(std::abs(m) ==
              doctest::Approx(std::abs(zeta(f1, 4e9, -1e9, ten)) * std::abs(nu(f1, 4e9, -1e9, ten)))
                  .epsilon(1e-12));
    }
    // phase-matched point with Ns spans: Ns * gamma (1 - e^{-2 alpha Ls})/(2 alpha)
    double alpha = ten.alpha_np_per_m();
    double expected = 10.0 * ten.gamma_per_w_m() *
                      (1.0 - std::exp(-2.0 * alpha * ten.span_length_m())) / (2.0 * alpha);
    CHECK(std::abs(mu(5e9, 3e9, 5e9, ten)) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("triplet beating") {
    LinkConfig link = table_link(1);
    PulseShape pulse = table_pulse();
    // f1 outside the pulse support
    CHECK(triplet_beating(20e9, 1e9, 0.0, pulse, link) == cplx(0.0, 0.0));
    // symmetric in f1 <-> f2
    cplx a = triplet_beating(3e9, -5e9, 1e9, pulse, link);
    cplx b = triplet_beating(-5e9, 3e9, 1e9, pulse, link);
    CHECK(std::abs(a - b) <= 1e-15 * std::abs(a));
    // rectangular spectrum (rolloff 0): S(0)^3 * gamma (1-e^{-2 alpha Ls})/(2 alpha)
    PulseShape rect = pulse;
    rect.rolloff = 0.0;
    double s0 = 1.0 / rect.symbol_rate_hz;
    double alpha = link.alpha_np_per_m();
    double expected = s0 * s0 * s0 * link.gamma_per_w_m() *
                      (1.0 - std::exp(-2.0 * alpha * link.span_length_m())) / (2.0 * alpha);
    cplx v = triplet_beating(0.0, 0.0, 0.0, rect, link);
    CHECK(v.real() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(v.imag() == doctest::Approx(0.0));
}
