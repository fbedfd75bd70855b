#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "megn/common.hpp"
#include "megn/link.hpp"
#include "megn/kernels.hpp"
#include "megn/linkfn.hpp"

// Literal, unoptimized transcriptions of the kernel integrals. Single pass,
// serial, fresh link-function evaluations at every node. They exist to check
// the transform-based production engine and as the baseline of the benchmark;
// use small meshes.
namespace megn::refkernels {

struct Mesh {
    std::vector<double> x;
    std::vector<double> w;
    Mesh(int n, double bound) {
        double step = 2.0 * bound / (n - 1);
        x.resize(n);
        w.resize(n);
        for (int i = 0; i < n; ++i) {
            x[i] = -bound + i * step;
            w[i] = (i == 0 || i == n - 1) ? 0.5 * step : step;
        }
    }
};

template <typename Weight>
inline cplx integrate2(const Mesh& m, double f, const PulseShape& pulse, const LinkConfig& link,
                       Weight weight) {
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < m.x.size(); ++i)
        for (std::size_t j = 0; j < m.x.size(); ++j)
            acc += m.w[i] * m.w[j] * triplet_beating(m.x[i], m.x[j], f, pulse, link) *
                   weight(m.x[i], m.x[j]);
    return acc;
}

inline double phi1(double f, const PulseShape& pulse, const LinkConfig& link, const Mesh& m) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.x.size(); ++i)
        for (std::size_t j = 0; j < m.x.size(); ++j) {
            double s = pulse.spectrum(m.x[i]) * pulse.spectrum(m.x[j]) *
                       pulse.spectrum(m.x[i] + m.x[j] - f);
            acc += m.w[i] * m.w[j] * s * s * std::norm(mu(m.x[i], m.x[j], f, link));
        }
    double rs = pulse.symbol_rate_hz;
    return kernel_pol_norm * 16.0 / 27.0 * rs * rs * rs * acc;
}

inline double phi2(double f, const PulseShape& pulse, const LinkConfig& link, const Mesh& m) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.x.size(); ++i) {
        cplx inner(0.0, 0.0);
        for (std::size_t j = 0; j < m.x.size(); ++j)
            inner += m.w[j] * pulse.spectrum(m.x[j]) * pulse.spectrum(m.x[i] + m.x[j] - f) *
                     mu(m.x[i], m.x[j], f, link);
        double s1 = pulse.spectrum(m.x[i]);
        acc += m.w[i] * s1 * s1 * std::norm(inner);
    }
    double rs = pulse.symbol_rate_hz;
    return kernel_pol_norm * 16.0 / 81.0 * rs * rs * acc;
}

inline double phi3(double f, const PulseShape& pulse, const LinkConfig& link, const Mesh& m) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.x.size(); ++i) {
        cplx inner(0.0, 0.0);
        for (std::size_t j = 0; j < m.x.size(); ++j)
            inner += m.w[j] * pulse.spectrum(m.x[j]) * pulse.spectrum(m.x[i] - m.x[j] + f) *
                     mu(m.x[i] - m.x[j] + f, m.x[j], f, link);
        double s1 = pulse.spectrum(m.x[i]);
        acc += m.w[i] * s1 * s1 * std::norm(inner);
    }
    double rs = pulse.symbol_rate_hz;
    return kernel_pol_norm * 16.0 / 81.0 * rs * rs * acc;
}

inline double phi4(double f, const PulseShape& pulse, const LinkConfig& link, const Mesh& m) {
    cplx i0 = integrate2(m, f, pulse, link, [](double, double) { return cplx(1.0, 0.0); });
    return kernel_pol_norm * 16.0 / 81.0 * pulse.symbol_rate_hz * std::norm(i0);
}

inline double chi1(int tau, double f, const PulseShape& pulse, const LinkConfig& link,
                   const Mesh& m) {
    double rs = pulse.symbol_rate_hz;
    cplx c2 = integrate2(m, f, pulse, link, [&](double, double f2) {
        double c = std::cos(pi * tau * (f - f2) / rs);
        return cplx(c * c, 0.0);
    });
    cplx s2 = integrate2(m, f, pulse, link, [&](double, double f2) {
        double s = std::sin(pi * tau * (f - f2) / rs);
        return cplx(s * s, 0.0);
    });
    return kernel_pol_norm * 32.0 / 81.0 * rs * (std::norm(c2) - std::norm(s2));
}

inline double chi2(int tau, double f, const PulseShape& pulse, const LinkConfig& link,
                   const Mesh& m) {
    double rs = pulse.symbol_rate_hz;
    cplx c = integrate2(m, f, pulse, link, [&](double f1, double) {
        return cplx(std::cos(2.0 * pi * tau * f1 / rs), 0.0);
    });
    cplx s = integrate2(m, f, pulse, link, [&](double f1, double) {
        return cplx(std::sin(2.0 * pi * tau * f1 / rs), 0.0);
    });
    return kernel_pol_norm * 32.0 / 81.0 * rs * (std::norm(c) + std::norm(s));
}

inline double chi3(int tau, double f, const PulseShape& pulse, const LinkConfig& link,
                   const Mesh& m) {
    double rs = pulse.symbol_rate_hz;
    cplx c = integrate2(m, f, pulse, link, [&](double f1, double f2) {
        return cplx(std::cos(2.0 * pi * tau * (f1 + f2 - f) / rs), 0.0);
    });
    cplx s = integrate2(m, f, pulse, link, [&](double f1, double f2) {
        return cplx(std::sin(2.0 * pi * tau * (f1 + f2 - f) / rs), 0.0);
    });
    return kernel_pol_norm * 32.0 / 81.0 * rs * (std::norm(c) + std::norm(s));
}

inline double xi1(int tau, double f, const PulseShape& pulse, const LinkConfig& link,
                  const Mesh& m) {
    double rs = pulse.symbol_rate_hz;
    double acc_c = 0.0, acc_s = 0.0;
    for (std::size_t i = 0; i < m.x.size(); ++i) {
        cplx inner(0.0, 0.0);
        for (std::size_t j = 0; j < m.x.size(); ++j)
            inner += m.w[j] * pulse.spectrum(m.x[j]) * pulse.spectrum(m.x[i] + m.x[j] - f) *
                     mu(m.x[i], m.x[j], f, link);
        double s1 = pulse.spectrum(m.x[i]);
        double c = std::cos(pi * tau * (f - m.x[i]) / rs);
        double s = std::sin(pi * tau * (f - m.x[i]) / rs);
        acc_c += m.w[i] * c * c * s1 * s1 * std::norm(inner);
        acc_s += m.w[i] * s * s * s1 * s1 * std::norm(inner);
    }
    return kernel_pol_norm * 32.0 / 81.0 * rs * rs * (acc_c - acc_s);
}

inline double psi1(int tau, double f, const PulseShape& pulse, const LinkConfig& link,
                   const Mesh& m) {
    double rs = pulse.symbol_rate_hz;
    double acc = 0.0;
    for (std::size_t i = 0; i < m.x.size(); ++i) {
        cplx inner_c(0.0, 0.0), inner_s(0.0, 0.0);
        for (std::size_t j = 0; j < m.x.size(); ++j) {
            cplx base = m.w[j] * pulse.spectrum(m.x[j]) * pulse.spectrum(m.x[i] + m.x[j] - f) *
                        mu(m.x[i], m.x[j], f, link);
            inner_c += base * std::cos(2.0 * pi * tau * m.x[j] / rs);
            inner_s += base * std::sin(2.0 * pi * tau * m.x[j] / rs);
        }
        double s1 = pulse.spectrum(m.x[i]);
        acc += m.w[i] * s1 * s1 * (std::norm(inner_c) + std::norm(inner_s));
    }
    return kernel_pol_norm * 32.0 / 81.0 * rs * rs * acc;
}

inline double psi2(int tau, double f, const PulseShape& pulse, const LinkConfig& link,
                   const Mesh& m) {
    double rs = pulse.symbol_rate_hz;
    double acc = 0.0;
    for (std::size_t i = 0; i < m.x.size(); ++i) {
        cplx inner_c(0.0, 0.0), inner_s(0.0, 0.0);
        for (std::size_t j = 0; j < m.x.size(); ++j) {
            double fu = m.x[i] - m.x[j] + f;
            cplx base = m.w[j] * pulse.spectrum(m.x[j]) * pulse.spectrum(fu) *
                        mu(fu, m.x[j], f, link);
            inner_c += base * std::cos(2.0 * pi * tau * fu / rs);
            inner_s += base * std::sin(2.0 * pi * tau * fu / rs);
        }
        double s1 = pulse.spectrum(m.x[i]);
        acc += m.w[i] * s1 * s1 * (std::norm(inner_c) + std::norm(inner_s));
    }
    return kernel_pol_norm * 16.0 / 81.0 * rs * rs * acc;
}

inline double xi2(int tau, int tau_prime, double f, const PulseShape& pulse,
                  const LinkConfig& link, const Mesh& m) {
    double rs = pulse.symbol_rate_hz;
    auto ex = [&](int p, double f1) { return std::polar(1.0, 2.0 * pi * p * (f1 - f) / rs); };
    auto term = [&](int pa, int pb) {  // |iint U (e_a + e_b)|^2
        cplx v = integrate2(m, f, pulse, link,
                            [&](double f1, double) { return ex(pa, f1) + ex(pb, f1); });
        return std::norm(v);
    };
    auto term1 = [&](int p) {
        cplx v = integrate2(m, f, pulse, link, [&](double f1, double) { return ex(p, f1); });
        return std::norm(v);
    };
    const int d = tau_prime - tau;
    double v = term(tau, tau_prime) - term1(tau) - term1(tau_prime);
    v += term(d, -tau) - term1(d) - term1(-tau);
    v += term(-d, -tau_prime) - term1(-d) - term1(-tau_prime);
    return kernel_pol_norm * 16.0 / 81.0 * rs * v;
}

inline double psi3(int tau, int tau_prime, double f, const PulseShape& pulse,
                   const LinkConfig& link, const Mesh& m) {
    double rs = pulse.symbol_rate_hz;
    auto term = [&](int p, int q) {
        cplx v = integrate2(m, f, pulse, link, [&](double f1, double f2) {
            return std::polar(1.0, 2.0 * pi * (p * f1 + q * f2) / rs);
        });
        return std::norm(v);
    };
    const int d = tau_prime - tau;
    double v = term(-tau, -tau_prime) + term(-tau_prime, -tau) + term(tau, -d) + term(-d, tau) +
               term(d, tau_prime) + term(tau_prime, d);
    return kernel_pol_norm * 16.0 / 81.0 * rs * v;
}

}  // namespace megn::refkernels
