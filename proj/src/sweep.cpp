#include "megn/sweep.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "megn/csv.hpp"
#include "megn/empirical.hpp"
#include "megn/ssfm.hpp"

namespace megn {

namespace {

template <typename T>
std::vector<T> axis_or(const std::vector<T>& axis, T fallback) {
    return axis.empty() ? std::vector<T>{fallback} : axis;
}

std::string point_tag(const SweepPoint& p) {
    std::ostringstream os;
    os << "rs" << p.rs_gbd << "_ns" << p.spans << "_n" << p.blocklength << "_h" << p.mapping
       << "_m" << p.memory;
    return os.str();
}

bool wants(const SweepSpec& spec, const std::string& what) {
    for (const std::string& o : spec.outputs)
        if (o == what) return true;
    return false;
}

void write_psd_csv(const std::string& path, const std::string& hash, const NLISpectrum& sp) {
    CsvWriter csv(path, hash,
                  {"f_hz", "g_egn", "g_spt1", "g_spt2", "g_xpt1", "g_xpt2", "g_xp", "g_total"});
    for (std::size_t i = 0; i < sp.f_hz.size(); ++i) {
        csv.field(sp.f_hz[i]);
        csv.field(sp.g_egn[i]);
        csv.field(sp.g_spt1[i]);
        csv.field(sp.g_spt2[i]);
        csv.field(sp.g_xpt1[i]);
        csv.field(sp.g_xpt2[i]);
        csv.field(sp.g_xp[i]);
        csv.field(sp.g_total[i]);
        csv.end_row();
    }
}

void write_covariance_csv(const std::string& path, const std::string& hash,
                          const CovarianceSet& cov) {
    CsvWriter csv(path, hash, {"kind", "tau", "tau_prime", "value", "stderr"});
    auto row = [&](const std::string& kind, int tau, int tp, double v, double se) {
        csv.field(kind);
        csv.field(tau);
        if (tp >= 0)
            csv.field(tp);
        else
            csv.field(std::string());
        csv.field(v);
        if (cov.empirical)
            csv.field(se);
        else
            csv.field(std::string());
        csv.end_row();
    };
    row("X1", 0, -1, cov.k_x1_0, cov.se_x1_0);
    row("X2", 0, -1, cov.k_x2_0, cov.se_x2_0);
    for (int tau = 1; tau <= cov.max_tau; ++tau) {
        row("S1", tau, -1, cov.ks1(tau), cov.empirical ? cov.se_s1[tau - 1] : 0.0);
        row("S2", tau, -1, cov.ks2(tau), cov.empirical ? cov.se_s2[tau - 1] : 0.0);
        row("X1", tau, -1, cov.kx1(tau), cov.empirical ? cov.se_x1[tau - 1] : 0.0);
        row("X2", tau, -1, cov.kx2(tau), cov.empirical ? cov.se_x2[tau - 1] : 0.0);
        row("X3", 0, tau, cov.kx3_0(tau), cov.empirical ? cov.se_x3_row0[tau - 1] : 0.0);
    }
    for (int tau = 1; tau <= cov.max_tau; ++tau)
        for (int d = 1; d <= cov.max_delta; ++d) {
            const std::size_t idx = static_cast<std::size_t>(tau - 1) * cov.max_delta + d - 1;
            row("S3", tau, tau + d, cov.ks3(tau, tau + d), cov.empirical ? cov.se_s3[idx] : 0.0);
            row("X3", tau, tau + d, cov.kx3(tau, tau + d), cov.empirical ? cov.se_x3[idx] : 0.0);
        }
}

void write_kernel_csv(const std::string& path, const std::string& hash, const KernelTable& t) {
    CsvWriter csv(path, hash, {"kernel_id", "tau", "tau_prime", "f_hz", "value"});
    auto row = [&](const std::string& id, int tau, int tp, double v) {
        csv.field(id);
        if (tau >= 0)
            csv.field(tau);
        else
            csv.field(std::string());
        if (tp >= 0)
            csv.field(tp);
        else
            csv.field(std::string());
        csv.field(t.f_hz);
        csv.field(v);
        csv.end_row();
    };
    for (int id = 1; id <= 4; ++id) row("phi" + std::to_string(id), -1, -1, t.phi[id - 1]);
    for (int tau = 1; tau <= t.memory; ++tau) {
        row("chi1", tau, -1, t.at(t.chi1, tau));
        row("chi2", tau, -1, t.at(t.chi2, tau));
        row("chi3", tau, -1, t.at(t.chi3, tau));
        row("xi1", tau, -1, t.at(t.xi1, tau));
        row("psi1", tau, -1, t.at(t.psi1, tau));
        row("psi2", tau, -1, t.at(t.psi2, tau));
    }
    if (!t.xi2.empty())
        for (int tau = 1; tau <= t.memory; ++tau)
            for (int tp = tau + 1; tp <= tau + t.memory; ++tp) {
                row("xi2", tau, tp, t.at2(t.xi2, tau, tp));
                row("psi3", tau, tp, t.at2(t.psi3, tau, tp));
            }
}

}  // namespace

SweepOutcome run_sweep(const Experiment& base, const std::string& outdir) {
    std::filesystem::create_directories(outdir);
    const SweepSpec& spec = base.sweep;
    spec.validate();

    std::vector<SweepPoint> grid;
    for (double rs : axis_or(spec.symbol_rates_gbd, base.pulse.symbol_rate_hz * 1e-9))
        for (int ns : axis_or(spec.spans, base.link.num_spans))
            for (int n : axis_or(spec.blocklengths, base.shaping.composition.blocklength()))
                for (int h : axis_or(spec.mappings, base.shaping.mapping_h))
                    for (int m : axis_or(spec.memories, base.model.memory)) {
                        SweepPoint p;
                        p.rs_gbd = rs;
                        p.spans = ns;
                        p.blocklength = n;
                        p.mapping = h;
                        p.memory = m;
                        grid.push_back(p);
                    }

    SweepOutcome outcome;
    outcome.points.resize(grid.size());
    std::vector<std::vector<std::string>> point_files(grid.size());

    const int workers = resolve_workers(spec);
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        SweepPoint p = grid[idx];
        try {
            LinkConfig link = base.link;
            link.num_spans = p.spans;
            PulseShape pulse = base.pulse;
            pulse.symbol_rate_hz = p.rs_gbd * 1e9;
            MEGNConfig model = base.model;
            model.memory = p.memory;

            // rebuild the composition at this blocklength from the base pmf
            ShapingScheme scheme = base.shaping;
            std::vector<double> pmf;
            for (std::size_t k = 0; k < base.shaping.composition.counts.size(); ++k)
                pmf.push_back(static_cast<double>(base.shaping.composition.counts[k]) /
                              base.shaping.composition.blocklength());
            scheme.composition = make_composition(pmf, base.shaping.composition.alphabet,
                                                  p.blocklength);
            scheme.mapping_h = p.mapping;
            scheme.validate();

            AmplitudeComposition sc = scheme.scaled_composition();
            MomentSet mom = scheme_moments(sc, p.mapping);
            MomentSet iid = iid_moments(sc);
            CovarianceSet cov =
                covariances_from_correlations(sc, p.mapping, 2 * p.memory, p.memory);
            CovarianceSet nil = zero_covariances(iid, 2 * p.memory, p.memory);

            std::vector<NLISpectrum> spectra = assemble_spectra(
                model, pulse, link,
                {{mom, &cov, model.mode}, {iid, &nil, ModelMode::approx}});
            NLIResult megn = eta_and_snr(spectra[0], scheme.power_w, link, pulse.symbol_rate_hz);
            NLIResult egn = eta_and_snr(spectra[1], scheme.power_w, link, pulse.symbol_rate_hz);
            p.eta_megn = megn.eta_per_w2;
            p.eta_egn = egn.eta_per_w2;
            p.snr_eff_db = megn.snr_eff_db;
            p.snr_opt_db = megn.snr_opt_db;
            p.p_opt_dbm = watt_to_dbm(megn.p_opt_w);

            if (spec.compare_sim) {
                SimConfig sim = base.sim;
                sim.seed = derive_seed(base.sim.seed, idx);
                EtaSimResult es = estimate_eta_sim(scheme, link, sim, pulse);
                p.eta_sim = es.eta;
                p.sim_stderr = es.stderr_;
                p.delta_eta = std::abs(es.eta - p.eta_megn) / es.eta;
            }

            const std::string tag = point_tag(p);
            if (wants(spec, "psd")) {
                std::string f = outdir + "/psd_" + tag + ".csv";
                write_psd_csv(f, base.config_hash, spectra[0]);
                point_files[idx].push_back(f);
            }
            if (wants(spec, "covariances")) {
                std::string f = outdir + "/covariances_" + tag + ".csv";
                write_covariance_csv(f, base.config_hash, cov);
                point_files[idx].push_back(f);
            }
            if (wants(spec, "kernels")) {
                auto grid0 = std::make_shared<const KernelGrid>(
                    build_kernel_grid(0.0, pulse, link, model.quad));
                KernelTable t =
                    compute_kernel_table(grid0, p.memory, model.mode == ModelMode::full);
                std::string f = outdir + "/kernels_" + tag + ".csv";
                write_kernel_csv(f, base.config_hash, t);
                point_files[idx].push_back(f);
            }
            if (wants(spec, "snr")) {
                std::string f = outdir + "/snr_" + tag + ".csv";
                CsvWriter csv(f, base.config_hash, {"p_dbm", "snr_eff_db"});
                for (int k = 0; k <= 32; ++k) {
                    double pdbm = -10.0 + 0.5 * k;
                    double pw = dbm_to_watt(pdbm);
                    csv.field(pdbm);
                    csv.field(linear_to_db(
                        pw / (megn.p_ase_w + p.eta_megn * pw * pw * pw)));
                    csv.end_row();
                }
                point_files[idx].push_back(f);
            }
            p.ok = true;
        } catch (const std::exception& ex) {
            p.ok = false;
            p.error = ex.what();
        }
        outcome.points[idx] = std::move(p);
    }

    // deterministic flush in grid order
    const std::string eta_path = outdir + "/eta.csv";
    CsvWriter csv(eta_path, base.config_hash,
                  {"rs_gbd", "spans", "blocklength", "mapping", "memory", "mode", "eta_megn",
                   "eta_egn", "eta_sim", "sim_stderr", "delta_eta", "snr_eff_db", "snr_opt_db",
                   "p_opt_dbm", "status"});
    for (const SweepPoint& p : outcome.points) {
        csv.field(p.rs_gbd);
        csv.field(p.spans);
        csv.field(p.blocklength);
        csv.field(p.mapping);
        csv.field(p.memory);
        csv.field(std::string(to_string(base.model.mode)));
        if (p.ok) {
            csv.field(p.eta_megn);
            csv.field(p.eta_egn);
        } else {
            csv.field(std::string());
            csv.field(std::string());
        }
        if (p.eta_sim) {
            csv.field(*p.eta_sim);
            csv.field(*p.sim_stderr);
            csv.field(*p.delta_eta);
        } else {
            csv.field(std::string());
            csv.field(std::string());
            csv.field(std::string());
        }
        if (p.ok) {
            csv.field(p.snr_eff_db);
            csv.field(p.snr_opt_db);
            csv.field(p.p_opt_dbm);
            csv.field(std::string("ok"));
        } else {
            csv.field(std::string());
            csv.field(std::string());
            csv.field(std::string());
            csv.field("error: " + p.error);
            outcome.all_ok = false;
        }
        csv.end_row();
    }
    outcome.files.push_back(eta_path);
    for (auto& files : point_files)
        for (auto& f : files) outcome.files.push_back(f);
    return outcome;
}

}  // namespace megn
