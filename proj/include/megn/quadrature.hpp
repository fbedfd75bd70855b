#pragma once

#include <stdexcept>
#include <vector>

#include "megn/link.hpp"

namespace megn {

// Tensor-product trapezoidal mesh on B2 = [-bound, bound]^2. The node count
// must be odd so that f = 0 and the axis midlines are grid nodes. At the
// default 401 points the per-cell phase change of the span-coherence factor
// stays below pi/3 for the Table-style links up to Ns = 20 at 32 GBd.
struct QuadratureConfig {
    int points_per_axis = 401;
    double integration_bound_hz = 0.0;  // 0 = use Rs/2
    int singular_refinement = 1;        // >1 refines the whole mesh; the
                                        // phase-matched set (f1-f)(f2-f)=0 crosses
                                        // the full domain, so local refinement
                                        // degenerates to global refinement anyway

    void validate() const {
        if (points_per_axis < 3 || points_per_axis % 2 == 0)
            throw std::invalid_argument("points_per_axis must be odd and >= 3");
        if (integration_bound_hz < 0.0)
            throw std::invalid_argument("integration_bound_hz must be non-negative");
        if (singular_refinement < 1)
            throw std::invalid_argument("singular_refinement must be >= 1");
    }

    double bound_hz(const PulseShape& pulse) const {
        return integration_bound_hz > 0.0 ? integration_bound_hz : 0.5 * pulse.symbol_rate_hz;
    }

    int effective_points() const {
        if (singular_refinement == 1) return points_per_axis;
        int n = points_per_axis * singular_refinement;
        return n % 2 == 0 ? n + 1 : n;
    }
};

}  // namespace megn
