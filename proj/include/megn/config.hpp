#pragma once

#include <map>
#include <string>
#include <vector>

#include "megn/shaping.hpp"
#include "megn/spectrum.hpp"
#include "megn/ssfm.hpp"

namespace megn {

// Sweep axes over the experiment grid; empty axes fall back to the base
// configuration's single value.
struct SweepSpec {
    std::vector<int> blocklengths;
    std::vector<int> mappings;
    std::vector<double> symbol_rates_gbd;
    std::vector<int> spans;
    std::vector<int> memories;
    std::vector<std::string> outputs = {"eta"};  // eta, psd, snr, covariances, kernels
    bool compare_sim = false;
    int workers = 0;  // 0 = all hardware threads; MEGN_WORKERS overrides

    std::size_t grid_size() const;
    void validate() const;
};

// One experiment: every physical and numerical parameter, loaded from a
// sectioned key-value file. No hidden defaults beyond the struct initializers
// printed by describe().
struct Experiment {
    LinkConfig link;
    PulseShape pulse;
    ShapingScheme shaping;
    MEGNConfig model;
    SimConfig sim;
    SweepSpec sweep;
    std::string config_hash;

    // Derived SI values for inspection.
    std::string describe() const;
};

Experiment load_experiment(const std::string& path);
Experiment experiment_from_text(const std::string& text);

int resolve_workers(const SweepSpec& spec);

}  // namespace megn
