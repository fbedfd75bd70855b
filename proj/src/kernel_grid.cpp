#include "megn/kernel_grid.hpp"

namespace megn {

KernelGrid build_kernel_grid(double f, const PulseShape& pulse, const LinkConfig& link,
                             const QuadratureConfig& quad) {
    pulse.validate();
    link.validate_for_eval();
    quad.validate();

    KernelGrid g;
    g.f_target = f;
    g.symbol_rate_hz = pulse.symbol_rate_hz;
    g.bound_hz = quad.bound_hz(pulse);
    g.n = quad.effective_points();

    const int n = g.n;
    const double step = 2.0 * g.bound_hz / (n - 1);

    g.freq.resize(n);
    g.weight.resize(n);
    g.s_axis.resize(n);
    for (int i = 0; i < n; ++i) {
        g.freq[i] = -g.bound_hz + i * step;
        g.weight[i] = (i == 0 || i == n - 1) ? 0.5 * step : step;
        g.s_axis[i] = pulse.spectrum(g.freq[i]);
    }

    g.t_row.assign(g.table_values(), cplx(0.0, 0.0));
    g.u_row.assign(g.table_values(), cplx(0.0, 0.0));

#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const double f1 = g.freq[i];
        cplx* trow = g.t_row.data() + static_cast<std::size_t>(i) * n;
        cplx* urow = g.u_row.data() + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
            const double f2 = g.freq[j];
            const double s2 = g.s_axis[j];
            if (s2 == 0.0) continue;
            const double st = pulse.spectrum(f1 + f2 - f);
            if (st != 0.0) trow[j] = s2 * st * mu(f1, f2, f, link);
            const double fu = f1 - f2 + f;
            const double su = pulse.spectrum(fu);
            if (su != 0.0) urow[j] = s2 * su * mu(fu, f2, f, link);
        }
    }

    g.rowsum_t.assign(n, cplx(0.0, 0.0));
    g.rowsum_u.assign(n, cplx(0.0, 0.0));
    // Fixed-order accumulation keeps results bit-identical across thread counts.
    std::vector<double> abs2_partial(n, 0.0);
    std::vector<cplx> b00_partial(n, cplx(0.0, 0.0));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const cplx* trow = g.t_row.data() + static_cast<std::size_t>(i) * n;
        const cplx* urow = g.u_row.data() + static_cast<std::size_t>(i) * n;
        cplx st(0.0, 0.0), su(0.0, 0.0);
        double a2 = 0.0;
        for (int j = 0; j < n; ++j) {
            st += g.weight[j] * trow[j];
            su += g.weight[j] * urow[j];
            a2 += g.weight[j] * std::norm(trow[j]);
        }
        g.rowsum_t[i] = st;
        g.rowsum_u[i] = su;
        const double s1 = g.s_axis[i];
        abs2_partial[i] = g.weight[i] * s1 * s1 * a2;
        b00_partial[i] = g.weight[i] * s1 * st;
    }
    for (int i = 0; i < n; ++i) {
        g.sum_abs_upsilon_sq += abs2_partial[i];
        g.b00 += b00_partial[i];
    }
    return g;
}

}  // namespace megn
