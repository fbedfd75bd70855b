// Batch front-end: model prediction, split-step simulation, correlation and
// kernel dumps, parameter sweeps and static plots, driven by a sectioned
// key-value config file.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "megn/csv.hpp"
#include "megn/empirical.hpp"
#include "megn/ssfm.hpp"
#include "megn/svgplot.hpp"
#include "megn/sweep.hpp"

using namespace megn;

namespace {

void apply_workers(const Experiment& e, int cli_workers) {
    int workers = cli_workers > 0 ? cli_workers : resolve_workers(e.sweep);
#ifdef _OPENMP
    omp_set_num_threads(workers);
#else
    (void)workers;
#endif
}

void write_covariances(const Experiment& e, const CovarianceSet& cov, const std::string& path) {
    CsvWriter csv(path, e.config_hash, {"kind", "tau", "tau_prime", "value", "stderr"});
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
            std::size_t idx = static_cast<std::size_t>(tau - 1) * cov.max_delta + d - 1;
            row("S3", tau, tau + d, cov.ks3(tau, tau + d), cov.empirical ? cov.se_s3[idx] : 0.0);
            row("X3", tau, tau + d, cov.kx3(tau, tau + d), cov.empirical ? cov.se_x3[idx] : 0.0);
        }
    std::printf("wrote %s\n", path.c_str());
}

// channel-function combinations on a (tau, f) lattice, one row per point
void write_channel_functions(const Experiment& e, const std::string& path, int freq_points) {
    const int m = e.model.memory;
    CsvWriter csv(path, e.config_hash, {"kernel_id", "tau", "tau_prime", "f_hz", "value"});
    for (int fi = 0; fi < freq_points; ++fi) {
        double f = freq_points < 2
                       ? 0.0
                       : (-0.5 + static_cast<double>(fi) / (freq_points - 1)) *
                             e.pulse.symbol_rate_hz;
        auto grid = std::make_shared<const KernelGrid>(
            build_kernel_grid(f, e.pulse, e.link, e.model.quad));
        KernelTable t = compute_kernel_table(grid, m, true);
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
            csv.field(f);
            csv.field(v);
            csv.end_row();
        };
        row("kappa_x0_1", -1, -1, 3.0 * t.phi[3]);
        row("kappa_x0_2", -1, -1, -12.0 * t.phi[3] + 5.0 * t.phi[1] + t.phi[2]);
        for (int tau = 1; tau <= m; ++tau) {
            double chi1 = t.at(t.chi1, tau), chi2 = t.at(t.chi2, tau), chi3 = t.at(t.chi3, tau);
            double xi1 = t.at(t.xi1, tau), psi1 = t.at(t.psi1, tau), psi2 = t.at(t.psi2, tau);
            row("kappa_s1", tau, -1,
                5 * xi1 + 5 * psi1 + 2 * psi2 - 22 * chi1 - 21 * chi2 - 5 * chi3);
            row("kappa_s2", tau, -1, 4 * chi1 + 4 * chi2 + chi3);
            row("kappa_x1", tau, -1, 4 * xi1 + psi1 + psi2 - 14 * chi1 - 9 * chi2 - chi3);
            row("kappa_x2", tau, -1, 2 * chi1 + chi2);
            row("kappa_x3_1", tau, -1, 6 * chi1 + 5 * chi2 + chi3);
        }
        if (f == 0.0) {
            for (int tau = 1; tau <= m; ++tau)
                for (int tp = tau + 1; tp <= tau + m; ++tp) {
                    row("kappa_s3", tau, tp,
                        4.0 * t.at2(t.xi2, tau, tp) + 2.0 * t.at2(t.psi3, tau, tp));
                    row("kappa_x3_2", tau, tp,
                        5.0 * t.at2(t.xi2, tau, tp) + t.at2(t.psi3, tau, tp));
                }
        }
    }
    std::printf("wrote %s\n", path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlinear-interference prediction for correlated symbol streams"};
    app.require_subcommand(1);

    std::string config_path, outdir = "out", csv_path;
    int workers = 0;
    bool verbose = false;
    std::uint64_t seed_override = 0;
    app.add_option("--workers", workers, "worker threads (0 = all; env MEGN_WORKERS overrides)");
    app.add_flag("--verbose", verbose, "print derived configuration values");

    auto add_config = [&](CLI::App* cmd) {
        cmd->fallthrough();  // accept --workers/--verbose after the subcommand
        cmd->add_option("--config", config_path, "experiment config file")->required();
        cmd->add_option("--out", outdir, "output directory");
        cmd->add_option("--seed", seed_override, "override the config seed");
    };

    CLI::App* c_kernels = app.add_subcommand("kernels", "dump kernels over a (tau, f) lattice");
    add_config(c_kernels);
    int freq_points = 9;
    bool channel_functions = false;
    c_kernels->add_option("--freq-points", freq_points, "frequency lattice size");
    c_kernels->add_flag("--channel-functions", channel_functions,
                        "dump the kappa combinations instead of the raw kernels");

    CLI::App* c_corr = app.add_subcommand("correlations", "analytical and empirical covariances");
    add_config(c_corr);
    bool empirical = false;
    long blocks = 100000;
    c_corr->add_option("--blocks", blocks, "block groups for the empirical estimator");
    c_corr->add_flag("--empirical", empirical, "also estimate covariances from a generated stream");

    CLI::App* c_predict = app.add_subcommand("predict", "run the model: PSD and eta summary");
    add_config(c_predict);

    CLI::App* c_sim = app.add_subcommand("simulate", "split-step eta estimate and run manifest");
    add_config(c_sim);
    bool dump_symbols = false, dump_waveform = false;
    long dump_count = 4096;
    c_sim->add_flag("--dump-symbols", dump_symbols, "write the first run's symbol stream");
    c_sim->add_flag("--dump-waveform", dump_waveform, "write the head of the first run's waveform");
    c_sim->add_option("--dump-count", dump_count, "entries per dump file");

    CLI::App* c_sweep = app.add_subcommand("sweep", "evaluate the configured sweep grid");
    add_config(c_sweep);
    bool compare_sim = false;
    c_sweep->add_flag("--compare-sim", compare_sim, "run the simulator at every grid point");

    CLI::App* c_plot = app.add_subcommand("plot", "render static SVG plots from an artifact CSV");
    c_plot->add_option("--csv", csv_path, "input csv file")->required();
    c_plot->add_option("--out", outdir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_plot->parsed()) {
            for (const std::string& f : emit_plots(csv_path, outdir))
                std::printf("wrote %s\n", f.c_str());
            return 0;
        }

        Experiment e = load_experiment(config_path);
        if (seed_override != 0) e.sim.seed = seed_override;
        apply_workers(e, workers);
        if (verbose) std::fputs(e.describe().c_str(), stdout);
        std::filesystem::create_directories(outdir);

        if (c_kernels->parsed()) {
            if (channel_functions) {
                write_channel_functions(e, outdir + "/channel_functions.csv", freq_points);
            } else {
                CsvWriter csv(outdir + "/kernels.csv", e.config_hash,
                              {"kernel_id", "tau", "tau_prime", "f_hz", "value"});
                for (int fi = 0; fi < freq_points; ++fi) {
                    double f = freq_points < 2
                                   ? 0.0
                                   : (-0.5 + static_cast<double>(fi) / (freq_points - 1)) *
                                         e.pulse.symbol_rate_hz;
                    auto grid = std::make_shared<const KernelGrid>(
                        build_kernel_grid(f, e.pulse, e.link, e.model.quad));
                    KernelTable t = compute_kernel_table(grid, e.model.memory, false);
                    for (int id = 1; id <= 4; ++id) {
                        csv.field("phi" + std::to_string(id));
                        csv.field(std::string());
                        csv.field(std::string());
                        csv.field(f);
                        csv.field(t.phi[id - 1]);
                        csv.end_row();
                    }
                    for (int tau = 1; tau <= e.model.memory; ++tau)
                        for (auto [name, arr] :
                             {std::pair{"chi1", &t.chi1}, std::pair{"chi2", &t.chi2},
                              std::pair{"chi3", &t.chi3}, std::pair{"xi1", &t.xi1},
                              std::pair{"psi1", &t.psi1}, std::pair{"psi2", &t.psi2}}) {
                            csv.field(std::string(name));
                            csv.field(tau);
                            csv.field(std::string());
                            csv.field(f);
                            csv.field(t.at(*arr, tau));
                            csv.end_row();
                        }
                }
                std::printf("wrote %s/kernels.csv\n", outdir.c_str());
            }
            return 0;
        }

        if (c_corr->parsed()) {
            const int ms = e.shaping.symbol_block_length();
            AmplitudeComposition sc = e.shaping.scaled_composition();
            CovarianceSet ana =
                covariances_from_correlations(sc, e.shaping.mapping_h, ms, ms);
            write_covariances(e, ana, outdir + "/covariances_analytic.csv");
            if (empirical) {
                SymbolStream stream = generate_stream(e.shaping, blocks, e.sim.seed);
                CovarianceSet emp = empirical_covariances(stream, ms, ms, ms);
                write_covariances(e, emp, outdir + "/covariances_empirical.csv");
            }
            return 0;
        }

        if (c_predict->parsed()) {
            AmplitudeComposition sc = e.shaping.scaled_composition();
            MomentSet mom = scheme_moments(sc, e.shaping.mapping_h);
            MomentSet iid = iid_moments(sc);
            CovarianceSet cov = covariances_from_correlations(
                sc, e.shaping.mapping_h, 2 * e.model.memory, e.model.memory);
            CovarianceSet nil = zero_covariances(iid, 2 * e.model.memory, e.model.memory);
            std::vector<NLISpectrum> spectra = assemble_spectra(
                e.model, e.pulse, e.link,
                {{mom, &cov, e.model.mode}, {iid, &nil, ModelMode::approx}});
            NLIResult megn = eta_and_snr(spectra[0], e.shaping.power_w, e.link,
                                         e.pulse.symbol_rate_hz);
            NLIResult egn =
                eta_and_snr(spectra[1], e.shaping.power_w, e.link, e.pulse.symbol_rate_hz);

            CsvWriter psd(outdir + "/psd.csv", e.config_hash,
                          {"f_hz", "g_egn", "g_spt1", "g_spt2", "g_xpt1", "g_xpt2", "g_xp",
                           "g_total"});
            for (std::size_t i = 0; i < spectra[0].f_hz.size(); ++i) {
                psd.field(spectra[0].f_hz[i]);
                psd.field(spectra[0].g_egn[i]);
                psd.field(spectra[0].g_spt1[i]);
                psd.field(spectra[0].g_spt2[i]);
                psd.field(spectra[0].g_xpt1[i]);
                psd.field(spectra[0].g_xpt2[i]);
                psd.field(spectra[0].g_xp[i]);
                psd.field(spectra[0].g_total[i]);
                psd.end_row();
            }
            CsvWriter sum(outdir + "/summary.csv", e.config_hash,
                          {"eta_megn", "eta_egn", "p_nli_w", "p_ase_w", "snr_eff_db",
                           "snr_opt_db", "p_opt_dbm"});
            sum.field(megn.eta_per_w2);
            sum.field(egn.eta_per_w2);
            sum.field(megn.p_nli_w);
            sum.field(megn.p_ase_w);
            sum.field(megn.snr_eff_db);
            sum.field(megn.snr_opt_db);
            sum.field(watt_to_dbm(megn.p_opt_w));
            sum.end_row();
            std::printf("eta_megn %.6g 1/W^2, eta_egn %.6g 1/W^2, snr_eff %.3f dB\n",
                        megn.eta_per_w2, egn.eta_per_w2, megn.snr_eff_db);
            std::printf("wrote %s/psd.csv and %s/summary.csv\n", outdir.c_str(), outdir.c_str());
            return 0;
        }

        if (c_sim->parsed()) {
            if (dump_symbols || dump_waveform) {
                const std::size_t ms = static_cast<std::size_t>(e.shaping.symbol_block_length());
                SymbolStream stream = generate_stream(
                    e.shaping, (e.sim.num_symbols + ms - 1) / ms, derive_seed(e.sim.seed, 0));
                stream.x_pol.resize(e.sim.num_symbols);
                stream.y_pol.resize(e.sim.num_symbols);
                if (dump_symbols) {
                    CsvWriter csv(outdir + "/symbols.csv", e.config_hash,
                                  {"slot", "x_re", "x_im", "y_re", "y_im"});
                    for (long i = 0; i < dump_count && i < static_cast<long>(stream.size()); ++i) {
                        csv.field(i);
                        csv.field(stream.x_pol[i].real());
                        csv.field(stream.x_pol[i].imag());
                        csv.field(stream.y_pol[i].real());
                        csv.field(stream.y_pol[i].imag());
                        csv.end_row();
                    }
                    std::printf("wrote %s/symbols.csv\n", outdir.c_str());
                }
                if (dump_waveform) {
                    Waveform w = transmit(stream, e.sim, e.pulse);
                    CsvWriter csv(outdir + "/waveform.csv", e.config_hash,
                                  {"sample", "x_re", "x_im", "y_re", "y_im"});
                    for (long i = 0; i < dump_count && i < static_cast<long>(w.x.size()); ++i) {
                        csv.field(i);
                        csv.field(w.x[i].real());
                        csv.field(w.x[i].imag());
                        csv.field(w.y[i].real());
                        csv.field(w.y[i].imag());
                        csv.end_row();
                    }
                    std::printf("wrote %s/waveform.csv\n", outdir.c_str());
                }
            }
            EtaSimResult r = estimate_eta_sim(e.shaping, e.link, e.sim, e.pulse);
            CsvWriter csv(outdir + "/simulation.csv", e.config_hash,
                          {"run", "seed", "err_power_x_w", "err_power_y_w", "eta_run"});
            for (std::size_t i = 0; i < r.per_run_eta.size(); ++i) {
                csv.field(static_cast<long>(i));
                csv.field(static_cast<unsigned long>(r.per_run_seed[i]));
                csv.field(r.per_run_err_power_x[i]);
                csv.field(r.per_run_err_power_y[i]);
                csv.field(r.per_run_eta[i]);
                csv.end_row();
            }
            std::printf("eta_sim %.6g +- %.2g 1/W^2 (%d runs)\n", r.eta, r.stderr_,
                        e.sim.num_runs);
            std::printf("wrote %s/simulation.csv\n", outdir.c_str());
            return 0;
        }

        if (c_sweep->parsed()) {
            if (compare_sim) e.sweep.compare_sim = true;
            std::printf("sweep grid: %zu points\n", e.sweep.grid_size());
            SweepOutcome out = run_sweep(e, outdir);
            for (const std::string& f : out.files) std::printf("wrote %s\n", f.c_str());
            if (!out.all_ok) {
                std::fprintf(stderr, "sweep finished with failed points (see eta.csv status)\n");
                return 1;
            }
            return 0;
        }
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    }
    return 0;
}
