#pragma once

#include <array>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "megn/kernel_grid.hpp"

namespace megn {

// Per-polarization normalization of the beating integrals. The dual-pol
// sixth-order moment admits three noise-type Gaussian pairings (two
// same-polarization, one cross-polarization), which puts the GN prefactor at
// 64/27 per polarization; the widely quoted 16/27 table is a factor 4 lower.
// The factor is applied uniformly to all twelve kernels (it cancels in every
// kernel identity) and is pinned by the split-step reference and the GN
// closed form.
inline constexpr double kernel_pol_norm = 4.0;

enum class KernelId { phi1, phi2, phi3, phi4, chi1, chi2, chi3, xi1, xi2, psi1, psi2, psi3 };

const char* to_string(KernelId id);
KernelId kernel_id_from_string(const std::string& name);

struct KernelValue {
    KernelId id;
    int tau = -1;        // -1 for the phi family
    int tau_prime = -1;  // set for xi2/psi3 only
    double f_hz = 0.0;
    double value = 0.0;  // NLI-efficiency units, strictly positive
};

// Weighted reductions over one KernelGrid. Every trigonometric delay weight
// in the kernel integrals is separable per axis, so each kernel becomes a
// combination of row transforms
//   RT(q)[i] = sum_j w_j t_row[i,j] e^{j 2 pi q f2_j / Rs}
// and of the beating transform
//   B(p,q)   = sum_i w_i S(f1_i) e^{j 2 pi p f1_i / Rs} RT(q)[i],
// which is symmetric in (p,q) because the triplet beating is symmetric in
// (f1,f2). prepare_delays() batches the transforms for a range of delays;
// ad-hoc calls compute them on the fly. One evaluator per thread: the
// transform caches are not synchronized.
class KernelEvaluator {
public:
    explicit KernelEvaluator(std::shared_ptr<const KernelGrid> grid);

    const KernelGrid& grid() const { return *grid_; }

    // Batch all row transforms needed for tau in [0, max_tau]; when
    // with_double_sums is set, also those for the xi2/psi3 pairs with
    // tau' - tau up to max_tau.
    void prepare_delays(int max_tau, bool with_double_sums);

    double phi(int id) const;  // id in 1..4
    double chi1(int tau) const;
    double chi2(int tau) const;
    double chi3(int tau) const;
    double xi1(int tau) const;
    double psi1(int tau) const;
    double psi2(int tau) const;
    double xi2(int tau, int tau_prime) const;
    double psi3(int tau, int tau_prime) const;

    double single_delay(KernelId id, int tau) const;

private:
    std::vector<cplx> compute_row_transform(const std::vector<cplx>& table, int q) const;
    const std::vector<cplx>& rt(int q) const;
    const std::vector<cplx>& ru(int q) const;
    cplx bcoef(int p, int q) const;

    std::shared_ptr<const KernelGrid> grid_;
    mutable std::unordered_map<int, std::vector<cplx>> rt_cache_;
    mutable std::unordered_map<int, std::vector<cplx>> ru_cache_;
    mutable std::unordered_map<long long, cplx> b_cache_;
};

// Full set of kernel values needed by the PSD assembly at one frequency:
// the four phi kernels plus every single-delay kernel for tau in [1, M], and,
// when requested, the double-delay kernels on tau in [1,M], tau' in
// (tau, tau+M] stored at [(tau-1)*M + (tau'-tau-1)].
struct KernelTable {
    double f_hz = 0.0;
    int memory = 0;
    std::array<double, 4> phi{};
    std::vector<double> chi1, chi2, chi3, xi1, psi1, psi2;
    std::vector<double> xi2, psi3;

    double at(const std::vector<double>& v, int tau) const { return v[tau - 1]; }
    double at2(const std::vector<double>& v, int tau, int tau_prime) const {
        return v[static_cast<std::size_t>(tau - 1) * memory + (tau_prime - tau - 1)];
    }
};

KernelTable compute_kernel_table(std::shared_ptr<const KernelGrid> grid, int memory,
                                 bool with_double_sums);

// Process-wide grid cache keyed by (f, link, pulse, quadrature). The MEGN sums
// evaluate dozens of delays per frequency; re-integrating the beating tables
// for each would multiply the cost by the memory length.
std::shared_ptr<const KernelGrid> shared_kernel_grid(double f, const PulseShape& pulse,
                                                     const LinkConfig& link,
                                                     const QuadratureConfig& quad);
void clear_kernel_grid_cache();

// Spec-level operations producing tagged values.
KernelValue eval_phi(int id, double f, const PulseShape& pulse, const LinkConfig& link,
                     const QuadratureConfig& quad);
KernelValue eval_single_delay_kernel(KernelId id, int tau, double f, const PulseShape& pulse,
                                     const LinkConfig& link, const QuadratureConfig& quad);
// Valid only on the model summation domain 0 < tau < tau_prime.
KernelValue eval_double_delay_kernel(KernelId id, int tau, int tau_prime, double f,
                                     const PulseShape& pulse, const LinkConfig& link,
                                     const QuadratureConfig& quad);

}  // namespace megn
