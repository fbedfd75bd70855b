#pragma once

#include <cstdint>
#include <vector>

#include "megn/common.hpp"
#include "megn/link.hpp"
#include "megn/shaping.hpp"

namespace megn {

struct SimConfig {
    int oversampling = 2;          // samples per symbol, simulation bandwidth o*Rs
    double step_km = 0.1;          // uniform symmetrized split step
    std::size_t num_symbols = 65536;  // per run
    int num_runs = 4;
    std::uint64_t seed = 1;
    bool ase_enabled = false;
    double launch_power_dbm = -5.0;  // per polarization
    int guard_symbols = 256;         // trimmed from each stream edge at the receiver

    void validate(const LinkConfig& link) const;
    double launch_power_w() const { return dbm_to_watt(launch_power_dbm); }
    int steps_per_span(const LinkConfig& link) const;
};

struct Waveform {
    std::vector<cplx> x, y;
    double sample_rate_hz = 0.0;

    double mean_power_x() const;
    double mean_power_y() const;
};

// Frequency-domain RRC shaping of the symbol stream onto an oversampled
// circular waveform scaled to the launch power.
Waveform transmit(const SymbolStream& stream, const SimConfig& sim, const PulseShape& pulse);

// Symmetrized split-step solution of the dual-polarization Manakov equation
// over one span: linear (loss + dispersion) half steps around full nonlinear
// steps with coefficient (8/9) gamma (|Ax|^2 + |Ay|^2).
void propagate_span(Waveform& wave, const LinkConfig& link, const SimConfig& sim);

// EDFA: exact span-loss compensation, plus circular complex Gaussian ASE from
// the same per-polarization budget the model uses when enabled.
void amplify(Waveform& wave, const LinkConfig& link, const SimConfig& sim, Rng& rng);

struct ReceiveResult {
    std::vector<cplx> err_x, err_y;  // a_hat/c - a after guard trimming
    double err_power_x = 0.0, err_power_y = 0.0;
    cplx gain_x{0.0, 0.0}, gain_y{0.0, 0.0};  // data-aided LS scalar per polarization
};

// EDC over the full link, matched RRC filter, symbol-rate decimation, one
// complex least-squares gain/phase per polarization against the known data.
ReceiveResult receive(const Waveform& wave, const SymbolStream& stream, const LinkConfig& link,
                      const SimConfig& sim, const PulseShape& pulse);

struct EtaSimResult {
    double eta = 0.0;      // per-polarization NLI power / P_ch^3
    double stderr_ = 0.0;  // jackknife over runs (0 when num_runs < 2)
    std::vector<double> per_run_eta;
    std::vector<double> per_run_err_power_x, per_run_err_power_y;  // W
    std::vector<std::uint64_t> per_run_seed;
};

// Monte-Carlo eta from num_runs independent shaped streams; ASE must be
// disabled so the error vector isolates NLI.
EtaSimResult estimate_eta_sim(const ShapingScheme& scheme, const LinkConfig& link,
                              const SimConfig& sim, const PulseShape& pulse);

}  // namespace megn
