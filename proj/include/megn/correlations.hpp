#pragma once

#include <utility>
#include <vector>

#include "megn/composition.hpp"

namespace megn {

struct AmpMoments {
    double e2 = 0.0, e4 = 0.0, e6 = 0.0;  // E[u^2], E[u^4], E[u^6]
};

AmpMoments amplitude_moments(const AmplitudeComposition& comp);

// Moments of the mapped dual-polarization symbol a = u_I s_I + j u_Q s_Q.
// For 2-D and 4-D mapping the I and Q amplitudes come from the same block, so
// E|a|^4 and E|a|^6 pick up the within-block pair correlations; for 1-D
// mapping (and in the iid limit) the dimensions are independent.
struct MomentSet {
    double e_u2 = 0.0, e_u4 = 0.0, e_u6 = 0.0;
    double e_a2 = 0.0, e_a4 = 0.0, e_a6 = 0.0;
    double p_ch = 0.0;  // = e_a2, per polarization, W

    void validate() const;
};

MomentSet scheme_moments(const AmplitudeComposition& comp, int mapping_h);
MomentSet iid_moments(const AmplitudeComposition& comp);

// Within-block amplitude-energy correlations of ideal constant composition
// (drawing without replacement), for any distinct positions.
//   rho1 = E[u_w^2 u_w'^2], rho2 = E[u_w^2 u_w'^4], rho3 = E[u^2 u^2 u^2].
std::pair<double, double> rho_pair(const AmplitudeComposition& comp);
double rho_triple(const AmplitudeComposition& comp);

// Within-block symbol-energy correlations under H-D mapping, distinct times.
struct IntraPair {
    double rho_s1 = 0.0, rho_x1 = 0.0, rho_s2 = 0.0, rho_x2 = 0.0;
};
IntraPair intra_block_pair(const AmplitudeComposition& comp, int mapping_h);

struct IntraTriple {
    double rho_s3 = 0.0, rho_x3 = 0.0;
};
IntraTriple intra_block_triple(const AmplitudeComposition& comp, int mapping_h);

// Time-averaged correlations over one cyclostationary period, blending the
// within-block values with the independent-block products.
struct TimeAvgPair {
    double rs1 = 0.0, rs2 = 0.0, rx1 = 0.0, rx2 = 0.0;
};
TimeAvgPair time_avg_pair_correlations(const AmplitudeComposition& comp, int mapping_h, int tau);

struct TimeAvgTriple {
    double rs3 = 0.0, rx3 = 0.0;
};
TimeAvgTriple time_avg_triple_correlations(const AmplitudeComposition& comp, int mapping_h,
                                           int tau, int tau_prime);

// Time-averaged energy covariances over the delay window the PSD assembly
// needs. Pair entries are stored for tau in [1, max_tau]; triple entries for
// tau in [1, max_tau] and tau' = tau + delta, delta in [1, max_delta]; all
// vanish once every pairwise separation reaches the correlation length.
struct CovarianceSet {
    int mapping_h = 4;
    int corr_length = 0;  // Ms = N/H
    int max_tau = 0;
    int max_delta = 0;
    MomentSet moments;

    std::vector<double> k_s1, k_s2, k_x1, k_x2;  // [tau-1]
    double k_x1_0 = 0.0, k_x2_0 = 0.0;
    std::vector<double> k_s3, k_x3;    // [(tau-1)*max_delta + delta-1]
    std::vector<double> k_x3_row0;     // K_X3(0, tau), [tau-1]

    // Jackknife standard errors; empty for analytic sets.
    std::vector<double> se_s1, se_s2, se_x1, se_x2, se_s3, se_x3, se_x3_row0;
    double se_x1_0 = 0.0, se_x2_0 = 0.0;
    bool empirical = false;

    double ks1(int tau) const { return tau >= 1 && tau <= max_tau ? k_s1[tau - 1] : 0.0; }
    double ks2(int tau) const { return tau >= 1 && tau <= max_tau ? k_s2[tau - 1] : 0.0; }
    double kx1(int tau) const { return tau >= 1 && tau <= max_tau ? k_x1[tau - 1] : 0.0; }
    double kx2(int tau) const { return tau >= 1 && tau <= max_tau ? k_x2[tau - 1] : 0.0; }
    double kx3_0(int tau) const { return tau >= 1 && tau <= max_tau ? k_x3_row0[tau - 1] : 0.0; }
    double ks3(int tau, int tau_prime) const {
        int d = tau_prime - tau;
        if (tau < 1 || tau > max_tau || d < 1 || d > max_delta) return 0.0;
        return k_s3[static_cast<std::size_t>(tau - 1) * max_delta + d - 1];
    }
    double kx3(int tau, int tau_prime) const {
        int d = tau_prime - tau;
        if (tau < 1 || tau > max_tau || d < 1 || d > max_delta) return 0.0;
        return k_x3[static_cast<std::size_t>(tau - 1) * max_delta + d - 1];
    }

    bool all_cross_pol_zero(double tol) const;
};

// Analytical covariances of ideal CCDM blocks under H-D mapping, in the
// covariance (EGN-baseline-subtracted) form consumed by the PSD assembly.
CovarianceSet covariances_from_correlations(const AmplitudeComposition& comp, int mapping_h,
                                            int max_tau, int max_delta);

// All-zero set with the moments of an uncorrelated stream.
CovarianceSet zero_covariances(const MomentSet& moments, int max_tau, int max_delta);

}  // namespace megn
