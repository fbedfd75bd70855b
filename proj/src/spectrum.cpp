#include "megn/spectrum.hpp"

#include <cmath>
#include <stdexcept>

namespace megn {

ModelMode model_mode_from_string(const std::string& name) {
    if (name == "full") return ModelMode::full;
    if (name == "approx") return ModelMode::approx;
    if (name == "pm_approx") return ModelMode::pm_approx;
    throw std::invalid_argument("unknown model mode: " + name);
}

const char* to_string(ModelMode mode) {
    switch (mode) {
        case ModelMode::full: return "full";
        case ModelMode::approx: return "approx";
        default: return "pm_approx";
    }
}

void MEGNConfig::validate() const {
    if (memory < 1) throw std::invalid_argument("memory must be >= 1");
    if (psd_points < 3 || psd_points % 2 == 0)
        throw std::invalid_argument("psd_points must be odd and >= 3");
    quad.validate();
}

double ase_power_per_pol_w(const LinkConfig& link, double symbol_rate_hz) {
    const double gain = link.span_gain_linear();
    const double nf = db_to_linear(link.edfa_noise_figure_db);
    return link.num_spans * (gain - 1.0) * nf / 2.0 * planck_J_s * link.carrier_freq_hz() *
           symbol_rate_hz;
}

namespace {

struct PsdSample {
    double egn = 0.0, spt1 = 0.0, spt2 = 0.0, xpt1 = 0.0, xpt2 = 0.0, xp = 0.0;
};

PsdSample assemble_at(const KernelTable& t, ModelMode mode, const MomentSet& mom,
                      const CovarianceSet& cov) {
    PsdSample out;
    const double a2 = mom.e_a2, a4 = mom.e_a4, a6 = mom.e_a6;
    const double phi1 = t.phi[0], phi2 = t.phi[1], phi3 = t.phi[2], phi4 = t.phi[3];

    out.egn = a2 * a2 * a2 * phi1 + (a2 * a4 - 2.0 * a2 * a2 * a2) * (5.0 * phi2 + phi3) +
              (a6 - 9.0 * a2 * a4 + 12.0 * a2 * a2 * a2) * phi4;

    const double c2 = cov.moments.e_a2;  // moments of the correlated stream
    const int m = t.memory;

    if (mode == ModelMode::pm_approx) {
        double corr = 0.0;
        for (int tau = 1; tau <= m; ++tau) {
            double kpm_s1 = 5.0 * t.at(t.xi1, tau) + 5.0 * t.at(t.psi1, tau) +
                            2.0 * t.at(t.psi2, tau) - 16.0 * t.at(t.chi1, tau) -
                            16.0 * t.at(t.chi2, tau) - 4.0 * t.at(t.chi3, tau);
            double kpm_s2 = 4.0 * t.at(t.chi1, tau) + 4.0 * t.at(t.chi2, tau) + t.at(t.chi3, tau);
            corr += c2 * cov.ks1(tau) * kpm_s1 + cov.ks2(tau) * kpm_s2;
        }
        out.spt1 = corr;
        return out;
    }

    for (int tau = 1; tau <= m; ++tau) {
        const double chi1 = t.at(t.chi1, tau), chi2 = t.at(t.chi2, tau), chi3 = t.at(t.chi3, tau);
        const double xi1 = t.at(t.xi1, tau), psi1 = t.at(t.psi1, tau), psi2 = t.at(t.psi2, tau);
        const double k_s1 = 5.0 * xi1 + 5.0 * psi1 + 2.0 * psi2 - 22.0 * chi1 - 21.0 * chi2 -
                            5.0 * chi3;
        const double k_s2 = 4.0 * chi1 + 4.0 * chi2 + chi3;
        out.spt1 += c2 * cov.ks1(tau) * k_s1 + cov.ks2(tau) * k_s2;

        const double k_x1 = 4.0 * xi1 + psi1 + psi2 - 14.0 * chi1 - 9.0 * chi2 - chi3;
        const double k_x2 = 2.0 * chi1 + chi2;
        const double k_x3_1 = 6.0 * chi1 + 5.0 * chi2 + chi3;
        // [K_X3(0,tau) - E|a|^2 K_X1(0)] vanishes beyond the correlation length
        const double row0 = tau < cov.corr_length ? cov.kx3_0(tau) - c2 * cov.k_x1_0 : 0.0;
        out.xpt1 += c2 * cov.kx1(tau) * k_x1 + cov.kx2(tau) * k_x2 + row0 * k_x3_1;
    }

    out.xp = cov.k_x2_0 * 3.0 * phi4 +
             c2 * cov.k_x1_0 * (-12.0 * phi4 + 5.0 * phi2 + phi3);

    if (mode == ModelMode::full) {
        for (int tau = 1; tau <= m; ++tau) {
            for (int tp = tau + 1; tp <= tau + m; ++tp) {
                const double k_s3 = 4.0 * t.at2(t.xi2, tau, tp) + 2.0 * t.at2(t.psi3, tau, tp);
                const double k_x3_2 = 5.0 * t.at2(t.xi2, tau, tp) + t.at2(t.psi3, tau, tp);
                const double bs = cov.ks3(tau, tp) -
                                  c2 * (cov.ks1(tau) + cov.ks1(tp) + cov.ks1(tp - tau));
                const double bx = cov.kx3(tau, tp) -
                                  c2 * (cov.kx1(tau) + cov.ks1(tp) + cov.kx1(tp - tau));
                out.spt2 += bs * k_s3;
                out.xpt2 += bx * k_x3_2;
            }
        }
    }
    return out;
}

}  // namespace

std::vector<NLISpectrum> assemble_spectra(const MEGNConfig& config, const PulseShape& pulse,
                                          const LinkConfig& link,
                                          const std::vector<SpectrumInput>& inputs) {
    config.validate();
    pulse.validate();
    link.validate_for_eval();
    const int m = config.memory;

    bool any_double = false;
    for (const SpectrumInput& in : inputs) {
        const CovarianceSet& cov = *in.cov;
        const int pair_window = std::min(2 * m, std::max(cov.corr_length - 1, 1));
        if (cov.max_tau < pair_window)
            throw std::invalid_argument("covariance window too small for the model memory");
        if (in.mode == ModelMode::full) {
            any_double = true;
            if (cov.max_tau < std::min(m, std::max(cov.corr_length - 1, 1)) || cov.max_delta < 1)
                throw std::invalid_argument("triple covariance window too small for full mode");
        }
        if (in.mode == ModelMode::pm_approx && !cov.all_cross_pol_zero(1e-9))
            throw std::invalid_argument(
                "pm_approx requires independent polarizations (cross-pol covariances are nonzero)");
    }

    const int n = config.psd_points;
    const double rs = pulse.symbol_rate_hz;

    std::vector<NLISpectrum> out(inputs.size());
    for (NLISpectrum& sp : out) {
        sp.f_hz.resize(n);
        for (int i = 0; i < n; ++i) sp.f_hz[i] = (-0.5 + static_cast<double>(i) / (n - 1)) * rs;
        sp.g_egn.assign(n, 0.0);
        sp.g_spt1.assign(n, 0.0);
        sp.g_spt2.assign(n, 0.0);
        sp.g_xpt1.assign(n, 0.0);
        sp.g_xpt2.assign(n, 0.0);
        sp.g_xp.assign(n, 0.0);
        sp.g_total.assign(n, 0.0);
    }

    const int half = n / 2;  // index of f = 0
    const bool mirror = config.exploit_symmetry;
    const int work_count = mirror ? n - half : n;

#pragma omp parallel for schedule(dynamic)
    for (int w = 0; w < work_count; ++w) {
        const int i = mirror ? half + w : w;
        auto grid = std::make_shared<const KernelGrid>(
            build_kernel_grid(out.front().f_hz[i], pulse, link, config.quad));
        KernelTable table = compute_kernel_table(std::move(grid), m, any_double);
        for (std::size_t v = 0; v < inputs.size(); ++v) {
            PsdSample s = assemble_at(table, inputs[v].mode, inputs[v].moments, *inputs[v].cov);
            out[v].g_egn[i] = s.egn;
            out[v].g_spt1[i] = s.spt1;
            out[v].g_spt2[i] = s.spt2;
            out[v].g_xpt1[i] = s.xpt1;
            out[v].g_xpt2[i] = s.xpt2;
            out[v].g_xp[i] = s.xp;
        }
    }
    for (NLISpectrum& sp : out) {
        if (mirror) {
            for (int i = 0; i < half; ++i) {
                const int j = n - 1 - i;
                sp.g_egn[i] = sp.g_egn[j];
                sp.g_spt1[i] = sp.g_spt1[j];
                sp.g_spt2[i] = sp.g_spt2[j];
                sp.g_xpt1[i] = sp.g_xpt1[j];
                sp.g_xpt2[i] = sp.g_xpt2[j];
                sp.g_xp[i] = sp.g_xp[j];
            }
        }
        for (int i = 0; i < n; ++i)
            sp.g_total[i] = sp.g_egn[i] + sp.g_spt1[i] + sp.g_spt2[i] + sp.g_xpt1[i] +
                            sp.g_xpt2[i] + sp.g_xp[i];
    }
    return out;
}

NLISpectrum assemble_spectrum(const MEGNConfig& config, const PulseShape& pulse,
                              const LinkConfig& link, const MomentSet& moments,
                              const CovarianceSet& cov) {
    std::vector<NLISpectrum> out =
        assemble_spectra(config, pulse, link, {{moments, &cov, config.mode}});
    return std::move(out.front());
}

NLIResult eta_and_snr(const NLISpectrum& spectrum, double p_ch_w, const LinkConfig& link,
                      double symbol_rate_hz) {
    if (p_ch_w <= 0.0) throw std::invalid_argument("channel power must be positive");
    if (spectrum.f_hz.size() < 2) throw std::invalid_argument("spectrum grid too small");

    double p_nli = 0.0;
    for (std::size_t i = 0; i + 1 < spectrum.f_hz.size(); ++i)
        p_nli += 0.5 * (spectrum.g_total[i] + spectrum.g_total[i + 1]) *
                 (spectrum.f_hz[i + 1] - spectrum.f_hz[i]);

    NLIResult r;
    r.p_nli_w = p_nli;
    r.eta_per_w2 = p_nli / (p_ch_w * p_ch_w * p_ch_w);
    r.p_ase_w = ase_power_per_pol_w(link, symbol_rate_hz);
    r.snr_eff_db = linear_to_db(p_ch_w / (r.p_ase_w + r.eta_per_w2 * p_ch_w * p_ch_w * p_ch_w));
    r.p_opt_w = std::cbrt(r.p_ase_w / (2.0 * r.eta_per_w2));
    r.snr_opt_db = linear_to_db(r.p_opt_w / (1.5 * r.p_ase_w));
    return r;
}

}  // namespace megn
