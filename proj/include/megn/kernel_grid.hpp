#pragma once

#include <cstddef>
#include <vector>

#include "megn/common.hpp"
#include "megn/link.hpp"
#include "megn/linkfn.hpp"
#include "megn/quadrature.hpp"

namespace megn {

// Precomputed beating tables at one PSD frequency f. All twelve kernels are
// weighted reductions over these tables, so the expensive mu evaluations are
// paid once per frequency and shared across every (kernel, tau) evaluation.
//
// Row-major n*n layout, index [i*n + j] with i the f1 axis and j the f2 axis.
//   t_row[i,j] = S(f2_j) S(f1_i + f2_j - f) mu(f1_i, f2_j, f)
//   u_row[i,j] = S(f2_j) S(f1_i - f2_j + f) mu(f1_i - f2_j + f, f2_j, f)
// The full triplet beating is upsilon[i,j] = s_axis[i] * t_row[i,j]; it is not
// stored separately.
struct KernelGrid {
    double f_target = 0.0;
    double symbol_rate_hz = 0.0;
    double bound_hz = 0.0;
    int n = 0;

    std::vector<double> freq;    // axis nodes, size n
    std::vector<double> weight;  // trapezoid weights, size n
    std::vector<double> s_axis;  // S(freq[i]), size n

    std::vector<cplx> t_row;  // size n*n
    std::vector<cplx> u_row;  // size n*n

    // Reductions shared by several kernels.
    std::vector<cplx> rowsum_t;  // sum_j w_j t_row[i,j]
    std::vector<cplx> rowsum_u;
    double sum_abs_upsilon_sq = 0.0;  // sum_ij w_i w_j |upsilon|^2
    cplx b00{0.0, 0.0};               // sum_ij w_i w_j upsilon[i,j]

    std::size_t table_values() const { return static_cast<std::size_t>(n) * n; }
    std::size_t memory_bytes() const { return 2 * table_values() * sizeof(cplx); }

    cplx upsilon(int i, int j) const { return s_axis[i] * t_row[static_cast<std::size_t>(i) * n + j]; }
};

KernelGrid build_kernel_grid(double f, const PulseShape& pulse, const LinkConfig& link,
                             const QuadratureConfig& quad);

}  // namespace megn
