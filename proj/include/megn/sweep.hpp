#pragma once

#include <optional>
#include <string>
#include <vector>

#include "megn/config.hpp"

namespace megn {

struct SweepPoint {
    double rs_gbd = 0.0;
    int spans = 0, blocklength = 0, mapping = 0, memory = 0;

    double eta_megn = 0.0, eta_egn = 0.0;
    double snr_eff_db = 0.0, snr_opt_db = 0.0, p_opt_dbm = 0.0;
    std::optional<double> eta_sim, sim_stderr, delta_eta;
    bool ok = false;
    std::string error;
};

// Evaluates the cartesian grid of the sweep axes, writes eta.csv (one row per
// grid point, deterministic order) plus any requested per-point artifacts into
// outdir. Simulator failures mark the point and the partial results are still
// flushed; the return value reports whether every point succeeded.
struct SweepOutcome {
    std::vector<SweepPoint> points;
    std::vector<std::string> files;
    bool all_ok = true;
};

SweepOutcome run_sweep(const Experiment& base, const std::string& outdir);

}  // namespace megn
