#pragma once

#include <string>
#include <vector>

#include "megn/correlations.hpp"
#include "megn/kernels.hpp"

namespace megn {

enum class ModelMode { full, approx, pm_approx };

ModelMode model_mode_from_string(const std::string& name);
const char* to_string(ModelMode mode);

struct MEGNConfig {
    int memory = 50;  // M, delays per sum; double sums run tau'=tau+1..tau+M
    ModelMode mode = ModelMode::approx;
    int psd_points = 65;           // symmetric grid over [-Rs/2, Rs/2]
    bool exploit_symmetry = true;  // evaluate f >= 0 and mirror G(-f) = G(f)
    QuadratureConfig quad;

    void validate() const;
};

// Per-contribution NLI PSD (per polarization, W/Hz) on a symmetric grid.
// In pm_approx mode the single correction term is stored in g_spt1.
struct NLISpectrum {
    std::vector<double> f_hz;
    std::vector<double> g_egn, g_spt1, g_spt2, g_xpt1, g_xpt2, g_xp, g_total;
};

struct NLIResult {
    double p_nli_w = 0.0;     // integral of g_total over the band
    double eta_per_w2 = 0.0;  // P_NLI / P_ch^3
    double p_ase_w = 0.0;     // per polarization, full link
    double snr_eff_db = 0.0;
    double snr_opt_db = 0.0;
    double p_opt_w = 0.0;  // launch power at which P_NLI = P_ASE/2
};

// Lumped-EDFA budget per polarization: Ns (G-1) 10^{NF/10}/2 h nu_c Rs.
// The simulator injects noise from the same formula.
double ase_power_per_pol_w(const LinkConfig& link, double symbol_rate_hz);

// Assembles the NLI PSD from kernels and covariances. moments drive the
// EGN baseline; cov supplies the energy-correlation corrections (its own
// moments are used inside the correction brackets). cov windows must cover
// the memory: max_tau >= min(2M, Ms-1) and, in full mode, a full M x M triple
// grid.
NLISpectrum assemble_spectrum(const MEGNConfig& config, const PulseShape& pulse,
                              const LinkConfig& link, const MomentSet& moments,
                              const CovarianceSet& cov);

// Several (moments, covariance) variants sharing one set of kernel tables;
// the table construction dominates the cost, so model/baseline pairs come at
// almost the price of one.
struct SpectrumInput {
    MomentSet moments;
    const CovarianceSet* cov;
    ModelMode mode;
};
std::vector<NLISpectrum> assemble_spectra(const MEGNConfig& config, const PulseShape& pulse,
                                          const LinkConfig& link,
                                          const std::vector<SpectrumInput>& inputs);

NLIResult eta_and_snr(const NLISpectrum& spectrum, double p_ch_w, const LinkConfig& link,
                      double symbol_rate_hz);

}  // namespace megn
