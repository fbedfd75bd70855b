#pragma once

#include <cmath>
#include <complex>

#include "megn/common.hpp"
#include "megn/link.hpp"

namespace megn {

// Per-span four-wave-mixing efficiency. Depends on the frequency triple only
// through the product (f1-f)(f2-f); the 2*alpha term keeps the phase-matched
// point finite.
inline cplx zeta(double f1, double f2, double f, const LinkConfig& link) {
    double alpha = link.alpha_np_per_m();
    double beta2 = link.beta2_s2_per_m();
    double gamma = link.gamma_per_w_m();
    double ls = link.span_length_m();
    double x = (f1 - f) * (f2 - f);
    cplx denom(2.0 * alpha, -4.0 * pi * pi * beta2 * x);
    cplx expo = std::exp(cplx(-2.0 * alpha * ls, 4.0 * pi * pi * beta2 * x * ls));
    return gamma * (1.0 - expo) / denom;
}

// Coherent accumulation over Ns identical spans (Dirichlet factor).
// sin(theta*Ls) vanishes at every multiple of pi; the singularity is removable
// and the limit there is Ns times the sign factor that cancels against the
// phase term, so the branch below is continuous.
inline cplx nu(double f1, double f2, double f, const LinkConfig& link) {
    int ns = link.num_spans;
    if (ns == 1) return cplx(1.0, 0.0);
    double beta2 = link.beta2_s2_per_m();
    double ls = link.span_length_m();
    double theta_ls = 2.0 * pi * pi * beta2 * (f1 - f) * (f2 - f) * ls;
    double s = std::sin(theta_ls);
    cplx phase = std::exp(cplx(0.0, theta_ls * (ns - 1)));
    constexpr double eps = 1e-12;
    if (std::abs(s) < eps) {
        long long k = std::llround(theta_ls / pi);
        double sign = (k * static_cast<long long>(ns - 1)) % 2 == 0 ? 1.0 : -1.0;
        return static_cast<double>(ns) * sign * phase;
    }
    return std::sin(static_cast<double>(ns) * theta_ls) / s * phase;
}

inline cplx mu(double f1, double f2, double f, const LinkConfig& link) {
    return zeta(f1, f2, f, link) * nu(f1, f2, f, link);
}

// Beating of a pulse frequency triplet: S(f1) S*(f1+f2-f) S(f2) mu(f1,f2,f).
inline cplx triplet_beating(double f1, double f2, double f, const PulseShape& pulse,
                            const LinkConfig& link) {
    double s = pulse.spectrum(f1) * pulse.spectrum(f1 + f2 - f) * pulse.spectrum(f2);
    if (s == 0.0) return cplx(0.0, 0.0);
    return s * mu(f1, f2, f, link);
}

}  // namespace megn
