#pragma once

#include <cstdint>
#include <vector>

#include "megn/common.hpp"
#include "megn/composition.hpp"
#include "megn/correlations.hpp"

namespace megn {

// Ideal constant-composition shaping: every arrangement of the composition
// multiset is an equiprobable codeword, realized by a uniform multiset
// permutation. Signs are independent equiprobable per real dimension.
struct ShapingScheme {
    AmplitudeComposition composition;  // unscaled levels, e.g. {1,3,5,7}
    int mapping_h = 4;                 // 1-D, 2-D or 4-D amplitude-to-dimension mapping
    double power_w = 1e-3;             // target E|a|^2 per polarization

    void validate() const;
    double amplitude_scale() const;  // sqrt(power / (2 E[u^2]))
    AmplitudeComposition scaled_composition() const;
    int symbol_block_length() const { return composition.blocklength() / mapping_h; }  // Ms
    MomentSet moments() const { return scheme_moments(scaled_composition(), mapping_h); }
};

struct SymbolStream {
    std::vector<cplx> x_pol, y_pol;
    int block_len_symbols = 0;  // Ms
    int mapping_h = 4;
    std::uint64_t seed = 0;

    std::size_t size() const { return x_pol.size(); }
};

// Uniformly random arrangement of the composition multiset (Fisher-Yates).
std::vector<double> generate_block(const AmplitudeComposition& comp, Rng& rng);

// Map pre-generated amplitude blocks onto the four real dimensions.
// H=1: four blocks fill X-I, X-Q, Y-I, Y-Q in that fixed order over Ms = N
// slots. H=2: two blocks fill (I,Q) of X and of Y over Ms = N/2 slots, the
// block consumed pairwise per slot. H=4: one block fills all four dimensions
// over Ms = N/4 slots. Amplitudes are already scaled; signs drawn from rng.
SymbolStream map_to_qam(const std::vector<std::vector<double>>& blocks, int mapping_h,
                        Rng& sign_rng);

// num_groups block groups (each spanning Ms symbol slots) with per-group seeds
// derived from the master seed, concatenated in group order.
SymbolStream generate_stream(const ShapingScheme& scheme, std::size_t num_groups,
                             std::uint64_t seed);

}  // namespace megn
