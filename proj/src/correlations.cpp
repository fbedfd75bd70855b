#include "megn/correlations.hpp"

#include <cmath>
#include <stdexcept>

namespace megn {

namespace {

void check_mapping(int h) {
    if (h != 1 && h != 2 && h != 4) throw std::invalid_argument("mapping H must be 1, 2 or 4");
}

void check_mapping_blocklength(const AmplitudeComposition& comp, int h) {
    check_mapping(h);
    if (comp.blocklength() % 4 != 0)
        throw std::invalid_argument("blocklength must be a multiple of 4 for symbol mapping");
}

}  // namespace

AmpMoments amplitude_moments(const AmplitudeComposition& comp) {
    comp.validate();
    AmpMoments m;
    const int n = comp.blocklength();
    for (std::size_t k = 0; k < comp.alphabet.size(); ++k) {
        double u2 = comp.alphabet[k] * comp.alphabet[k];
        double p = static_cast<double>(comp.counts[k]) / n;
        m.e2 += u2 * p;
        m.e4 += u2 * u2 * p;
        m.e6 += u2 * u2 * u2 * p;
    }
    return m;
}

void MomentSet::validate() const {
    if (e_u2 * e_u2 > e_u4 * (1.0 + 1e-12) || e_a2 * e_a2 > e_a4 * (1.0 + 1e-12))
        throw std::logic_error("moment set violates Cauchy-Schwarz");
}

MomentSet scheme_moments(const AmplitudeComposition& comp, int mapping_h) {
    check_mapping(mapping_h);
    AmpMoments am = amplitude_moments(comp);
    MomentSet m;
    m.e_u2 = am.e2;
    m.e_u4 = am.e4;
    m.e_u6 = am.e6;
    double pair22, pair24;
    if (mapping_h == 1) {
        pair22 = am.e2 * am.e2;
        pair24 = am.e2 * am.e4;
    } else {
        auto [r1, r2] = rho_pair(comp);
        pair22 = r1;
        pair24 = r2;
    }
    m.e_a2 = 2.0 * am.e2;
    m.e_a4 = 2.0 * am.e4 + 2.0 * pair22;
    m.e_a6 = 2.0 * am.e6 + 6.0 * pair24;
    m.p_ch = m.e_a2;
    m.validate();
    return m;
}

MomentSet iid_moments(const AmplitudeComposition& comp) {
    AmpMoments am = amplitude_moments(comp);
    MomentSet m;
    m.e_u2 = am.e2;
    m.e_u4 = am.e4;
    m.e_u6 = am.e6;
    m.e_a2 = 2.0 * am.e2;
    m.e_a4 = 2.0 * am.e4 + 2.0 * am.e2 * am.e2;
    m.e_a6 = 2.0 * am.e6 + 6.0 * am.e2 * am.e4;
    m.p_ch = m.e_a2;
    m.validate();
    return m;
}

std::pair<double, double> rho_pair(const AmplitudeComposition& comp) {
    const int n = comp.blocklength();
    if (n < 2) throw std::domain_error("pair correlation needs blocklength >= 2");
    AmpMoments m = amplitude_moments(comp);
    double rho1 = (n * m.e2 * m.e2 - m.e4) / (n - 1);
    double rho2 = (n * m.e2 * m.e4 - m.e6) / (n - 1);
    return {rho1, rho2};
}

double rho_triple(const AmplitudeComposition& comp) {
    const double n = comp.blocklength();
    if (n < 3) throw std::domain_error("triple correlation needs blocklength >= 3");
    AmpMoments m = amplitude_moments(comp);
    double denom = (n - 1) * (n - 2);
    return n * n / denom * m.e2 * m.e2 * m.e2 - 3.0 * n / denom * m.e2 * m.e4 +
           2.0 / denom * m.e6;
}

IntraPair intra_block_pair(const AmplitudeComposition& comp, int mapping_h) {
    check_mapping_blocklength(comp, mapping_h);
    AmpMoments m = amplitude_moments(comp);
    auto [rho1, rho2] = rho_pair(comp);
    double rho3 = rho_triple(comp);
    IntraPair out;
    if (mapping_h == 1) {
        out.rho_s1 = 2.0 * rho1 + 2.0 * m.e2 * m.e2;
        out.rho_s2 = 2.0 * rho2 + 2.0 * m.e2 * m.e4 + 4.0 * rho1 * m.e2;
    } else {
        out.rho_s1 = 4.0 * rho1;
        out.rho_s2 = 4.0 * rho2 + 4.0 * rho3;
    }
    if (mapping_h == 4) {
        out.rho_x1 = 4.0 * rho1;
        out.rho_x2 = 4.0 * rho2 + 4.0 * rho3;
    } else {
        out.rho_x1 = 4.0 * m.e2 * m.e2;
        out.rho_x2 = mapping_h == 1 ? 4.0 * m.e2 * m.e4 + 4.0 * m.e2 * m.e2 * m.e2
                                    : 4.0 * m.e2 * m.e4 + 4.0 * rho1 * m.e2;
    }
    return out;
}

IntraTriple intra_block_triple(const AmplitudeComposition& comp, int mapping_h) {
    check_mapping_blocklength(comp, mapping_h);
    AmpMoments m = amplitude_moments(comp);
    auto [rho1, rho2] = rho_pair(comp);
    (void)rho2;
    double rho3 = rho_triple(comp);
    IntraTriple out;
    out.rho_s3 = mapping_h == 1 ? 2.0 * rho3 + 6.0 * rho1 * m.e2 : 8.0 * rho3;
    switch (mapping_h) {
        case 1: out.rho_x3 = 4.0 * rho1 * m.e2 + 4.0 * m.e2 * m.e2 * m.e2; break;
        case 2: out.rho_x3 = 8.0 * rho1 * m.e2; break;
        default: out.rho_x3 = 8.0 * rho3; break;
    }
    return out;
}

TimeAvgPair time_avg_pair_correlations(const AmplitudeComposition& comp, int mapping_h,
                                       int tau) {
    if (tau < 1) throw std::invalid_argument("tau must be >= 1");
    check_mapping_blocklength(comp, mapping_h);
    const double ms = comp.blocklength() / mapping_h;
    MomentSet mom = scheme_moments(comp, mapping_h);
    IntraPair intra = intra_block_pair(comp, mapping_h);
    TimeAvgPair out;
    const double a22 = mom.e_a2 * mom.e_a2;
    const double a24 = mom.e_a2 * mom.e_a4;
    if (tau < ms) {
        out.rs1 = (tau * a22 + (ms - tau) * intra.rho_s1) / ms;
        out.rs2 = (tau * a24 + (ms - tau) * intra.rho_s2) / ms;
        out.rx1 = (tau * a22 + (ms - tau) * intra.rho_x1) / ms;
        out.rx2 = (tau * a24 + (ms - tau) * intra.rho_x2) / ms;
    } else {
        out.rs1 = a22;
        out.rs2 = a24;
        out.rx1 = a22;
        out.rx2 = a24;
    }
    return out;
}

TimeAvgTriple time_avg_triple_correlations(const AmplitudeComposition& comp, int mapping_h,
                                           int tau, int tau_prime) {
    if (!(0 < tau && tau < tau_prime))
        throw std::invalid_argument("triple correlations require 0 < tau < tau_prime");
    check_mapping_blocklength(comp, mapping_h);
    const double ms = comp.blocklength() / mapping_h;
    MomentSet mom = scheme_moments(comp, mapping_h);
    IntraPair intra = intra_block_pair(comp, mapping_h);
    IntraTriple tri = intra_block_triple(comp, mapping_h);
    const double a2 = mom.e_a2;
    const double a23 = a2 * a2 * a2;

    auto five_branch = [&](double rho1_sym, double rho3_sym) {
        if (tau_prime < ms)
            return (tau_prime * a2 * rho1_sym + (ms - tau_prime) * rho3_sym) / ms;
        if (tau < ms && tau_prime - tau >= ms)
            return (tau * a23 + (ms - tau) * a2 * rho1_sym) / ms;
        if (tau < ms)  // tau_prime >= ms and tau_prime - tau < ms
            return ((tau_prime - ms) * a23 + (2.0 * ms - tau_prime) * a2 * rho1_sym) / ms;
        if (tau_prime - tau < ms)  // tau >= ms
            return ((tau_prime - tau) * a23 + (ms - tau_prime + tau) * a2 * rho1_sym) / ms;
        return a23;
    };

    TimeAvgTriple out;
    out.rs3 = five_branch(intra.rho_s1, tri.rho_s3);
    if (mapping_h == 4) {
        out.rx3 = five_branch(intra.rho_x1, tri.rho_x3);
    } else {
        // Independent polarizations: only the two same-polarization symbols
        // (separated by tau_prime) correlate, so the triple factorizes.
        TimeAvgPair p = time_avg_pair_correlations(comp, mapping_h, tau_prime);
        out.rx3 = a2 * p.rs1;
    }
    return out;
}

bool CovarianceSet::all_cross_pol_zero(double rel_tol) const {
    const double s1 = moments.e_a2 * moments.e_a2;
    const double s2 = moments.e_a2 * moments.e_a4;
    if (std::abs(k_x1_0) > rel_tol * s1 || std::abs(k_x2_0) > rel_tol * s2) return false;
    for (double v : k_x1)
        if (std::abs(v) > rel_tol * s1) return false;
    for (double v : k_x2)
        if (std::abs(v) > rel_tol * s2) return false;
    return true;
}

CovarianceSet covariances_from_correlations(const AmplitudeComposition& comp, int mapping_h,
                                            int max_tau, int max_delta) {
    check_mapping_blocklength(comp, mapping_h);
    if (max_tau < 0 || max_delta < 0) throw std::invalid_argument("negative covariance window");

    CovarianceSet cov;
    cov.mapping_h = mapping_h;
    cov.corr_length = comp.blocklength() / mapping_h;
    cov.max_tau = max_tau;
    cov.max_delta = max_delta;
    cov.moments = scheme_moments(comp, mapping_h);
    const double a2 = cov.moments.e_a2;
    const double a22 = a2 * a2;
    const double a23 = a22 * a2;
    const double a24 = a2 * cov.moments.e_a4;

    IntraPair intra = intra_block_pair(comp, mapping_h);
    IntraTriple tri = intra_block_triple(comp, mapping_h);
    const double ms = cov.corr_length;

    cov.k_s1.resize(max_tau);
    cov.k_s2.resize(max_tau);
    cov.k_x1.resize(max_tau);
    cov.k_x2.resize(max_tau);
    cov.k_x3_row0.resize(max_tau);
    for (int tau = 1; tau <= max_tau; ++tau) {
        TimeAvgPair p = time_avg_pair_correlations(comp, mapping_h, tau);
        cov.k_s1[tau - 1] = p.rs1 - a22;
        cov.k_s2[tau - 1] = p.rs2 - a24;
        cov.k_x1[tau - 1] = p.rx1 - a22;
        cov.k_x2[tau - 1] = p.rx2 - a24;
        // K_X3(0, tau): the same-time cross-polarization pair plus a third
        // symbol at delay tau, blended across the block boundary exactly like
        // the pair correlations.
        double r = tau < ms
                       ? (tau * a2 * intra.rho_x1 + (ms - tau) * tri.rho_x3) / ms
                       : a2 * intra.rho_x1;
        cov.k_x3_row0[tau - 1] = r - a23;
    }
    cov.k_x1_0 = intra.rho_x1 - a22;
    cov.k_x2_0 = intra.rho_x2 - a24;

    cov.k_s3.resize(static_cast<std::size_t>(max_tau) * max_delta);
    cov.k_x3.resize(static_cast<std::size_t>(max_tau) * max_delta);
    for (int tau = 1; tau <= max_tau; ++tau) {
        for (int d = 1; d <= max_delta; ++d) {
            TimeAvgTriple t = time_avg_triple_correlations(comp, mapping_h, tau, tau + d);
            const std::size_t idx = static_cast<std::size_t>(tau - 1) * max_delta + d - 1;
            cov.k_s3[idx] = t.rs3 - a23;
            cov.k_x3[idx] = t.rx3 - a23;
        }
    }
    return cov;
}

CovarianceSet zero_covariances(const MomentSet& moments, int max_tau, int max_delta) {
    CovarianceSet cov;
    cov.mapping_h = 1;
    cov.corr_length = 1;
    cov.max_tau = max_tau;
    cov.max_delta = max_delta;
    cov.moments = moments;
    cov.k_s1.assign(max_tau, 0.0);
    cov.k_s2.assign(max_tau, 0.0);
    cov.k_x1.assign(max_tau, 0.0);
    cov.k_x2.assign(max_tau, 0.0);
    cov.k_x3_row0.assign(max_tau, 0.0);
    cov.k_s3.assign(static_cast<std::size_t>(max_tau) * max_delta, 0.0);
    cov.k_x3.assign(static_cast<std::size_t>(max_tau) * max_delta, 0.0);
    return cov;
}

}  // namespace megn
