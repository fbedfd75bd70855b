#include "megn/empirical.hpp"

#include <cmath>
#include <stdexcept>

namespace megn {

namespace {

// Flat layout of every raw sum the estimator tracks. Index helpers keep the
// accumulation loop and the jackknife reduction in sync.
struct Layout {
    int max_tau;
    int max_delta;
    // [0..2]: sum |a|^2, |a|^4, |a|^6 over both polarizations
    // then per-tau pair sums, the tau=0 cross terms, the X3 zero row and the
    // two triple grids.
    int pairs_base = 3;
    int x0_base() const { return pairs_base + 4 * max_tau; }
    int row0_base() const { return x0_base() + 2; }
    int s3_base() const { return row0_base() + max_tau; }
    int x3_base() const { return s3_base() + max_tau * max_delta; }
    int total() const { return x3_base() + max_tau * max_delta; }

    int s1(int tau) const { return pairs_base + 4 * (tau - 1); }
    int s2(int tau) const { return s1(tau) + 1; }
    int x1(int tau) const { return s1(tau) + 2; }
    int x2(int tau) const { return s1(tau) + 3; }
    int row0(int tau) const { return row0_base() + tau - 1; }
    int s3(int tau, int d) const { return s3_base() + (tau - 1) * max_delta + d - 1; }
    int x3(int tau, int d) const { return x3_base() + (tau - 1) * max_delta + d - 1; }
};

struct Sums {
    double anchors = 0.0;  // number of anchor slots
    std::vector<double> v;
};

// Covariances (and moments) from raw sums. Every pattern sum holds the two
// polarization assignments added together, hence the 1/(2n) normalizations.
struct Estimates {
    MomentSet moments;
    std::vector<double> cov;  // same layout as the sums from pairs_base on
};

Estimates reduce(const Layout& lay, const Sums& s) {
    Estimates e;
    const double n = s.anchors;
    const double e2 = s.v[0] / (2.0 * n);
    const double e4 = s.v[1] / (2.0 * n);
    const double e6 = s.v[2] / (2.0 * n);
    e.moments.e_a2 = e2;
    e.moments.e_a4 = e4;
    e.moments.e_a6 = e6;
    e.moments.p_ch = e2;
    e.cov.assign(lay.total(), 0.0);
    const double a22 = e2 * e2, a24 = e2 * e4, a23 = e2 * e2 * e2;
    for (int tau = 1; tau <= lay.max_tau; ++tau) {
        e.cov[lay.s1(tau)] = s.v[lay.s1(tau)] / (2.0 * n) - a22;
        e.cov[lay.s2(tau)] = s.v[lay.s2(tau)] / (2.0 * n) - a24;
        e.cov[lay.x1(tau)] = s.v[lay.x1(tau)] / (2.0 * n) - a22;
        e.cov[lay.x2(tau)] = s.v[lay.x2(tau)] / (2.0 * n) - a24;
        e.cov[lay.row0(tau)] = s.v[lay.row0(tau)] / (2.0 * n) - a23;
        for (int d = 1; d <= lay.max_delta; ++d) {
            e.cov[lay.s3(tau, d)] = s.v[lay.s3(tau, d)] / (2.0 * n) - a23;
            e.cov[lay.x3(tau, d)] = s.v[lay.x3(tau, d)] / (2.0 * n) - a23;
        }
    }
    e.cov[lay.x0_base()] = s.v[lay.x0_base()] / n - a22;  // single pattern
    e.cov[lay.x0_base() + 1] = s.v[lay.x0_base() + 1] / (2.0 * n) - a24;
    return e;
}

}  // namespace

CovarianceSet empirical_covariances(const SymbolStream& stream, int period_ms, int max_tau,
                                    int max_delta) {
    if (period_ms < 1) throw std::invalid_argument("period must be positive");
    if (max_tau < 1 || max_delta < 1) throw std::invalid_argument("covariance window must be positive");
    const std::size_t n_sym = stream.size();
    if (stream.y_pol.size() != n_sym) throw std::invalid_argument("polarization lengths differ");

    const std::size_t ms = static_cast<std::size_t>(period_ms);
    const std::size_t reach = static_cast<std::size_t>(max_tau) + max_delta;
    const std::size_t groups_total = n_sym / ms;
    const std::size_t groups_pad = (reach + ms - 1) / ms;
    if (groups_total < groups_pad + 2)
        throw std::invalid_argument("stream too short for the requested covariance window");
    const std::size_t anchors_groups = groups_total - groups_pad;

    // Energy arrays, both polarizations.
    std::vector<double> p2x(n_sym), p4x(n_sym), p2y(n_sym), p4y(n_sym);
    for (std::size_t w = 0; w < n_sym; ++w) {
        p2x[w] = std::norm(stream.x_pol[w]);
        p4x[w] = p2x[w] * p2x[w];
        p2y[w] = std::norm(stream.y_pol[w]);
        p4y[w] = p2y[w] * p2y[w];
    }

    Layout lay{max_tau, max_delta};
    const std::size_t n_super = std::min<std::size_t>(anchors_groups, 200);
    std::vector<Sums> super(n_super);

#pragma omp parallel for schedule(static)
    for (std::size_t j = 0; j < n_super; ++j) {
        const std::size_t g0 = j * anchors_groups / n_super;
        const std::size_t g1 = (j + 1) * anchors_groups / n_super;
        std::vector<KahanSum> acc(lay.total());
        std::vector<double> local(lay.total());
        for (std::size_t g = g0; g < g1; ++g) {
            std::fill(local.begin(), local.end(), 0.0);
            for (std::size_t w = g * ms; w < (g + 1) * ms; ++w) {
                local[0] += p2x[w] + p2y[w];
                local[1] += p4x[w] + p4y[w];
                local[2] += p4x[w] * p2x[w] + p4y[w] * p2y[w];
                local[lay.x0_base()] += p2x[w] * p2y[w];
                local[lay.x0_base() + 1] += p2x[w] * p4y[w] + p2y[w] * p4x[w];
                for (int tau = 1; tau <= max_tau; ++tau) {
                    const std::size_t wt = w + tau;
                    local[lay.s1(tau)] += p2x[w] * p2x[wt] + p2y[w] * p2y[wt];
                    local[lay.s2(tau)] += p2x[w] * p4x[wt] + p2y[w] * p4y[wt];
                    local[lay.x1(tau)] += p2x[w] * p2y[wt] + p2y[w] * p2x[wt];
                    local[lay.x2(tau)] += p2x[w] * p4y[wt] + p2y[w] * p4x[wt];
                    local[lay.row0(tau)] += p2x[w] * p2y[w] * p2x[wt] + p2y[w] * p2x[w] * p2y[wt];
                    const double sx = p2x[w] * p2x[wt];
                    const double sy = p2y[w] * p2y[wt];
                    const double cx = p2x[w] * p2y[wt];
                    const double cy = p2y[w] * p2x[wt];
                    for (int d = 1; d <= max_delta; ++d) {
                        const std::size_t wp = wt + d;
                        local[lay.s3(tau, d)] += sx * p2x[wp] + sy * p2y[wp];
                        local[lay.x3(tau, d)] += cx * p2x[wp] + cy * p2y[wp];
                    }
                }
            }
            for (int k = 0; k < lay.total(); ++k) acc[k].add(local[k]);
        }
        super[j].anchors = static_cast<double>((g1 - g0) * ms);
        super[j].v.resize(lay.total());
        for (int k = 0; k < lay.total(); ++k) super[j].v[k] = acc[k].value();
    }

    Sums total;
    total.v.assign(lay.total(), 0.0);
    for (const Sums& s : super) {
        total.anchors += s.anchors;
        for (int k = 0; k < lay.total(); ++k) total.v[k] += s.v[k];
    }
    Estimates full = reduce(lay, total);

    // Delete-one jackknife across superblocks.
    std::vector<double> mean(lay.total(), 0.0);
    std::vector<double> m2(lay.total(), 0.0);
    std::vector<std::vector<double>> loo(n_super);
    for (std::size_t j = 0; j < n_super; ++j) {
        Sums rest;
        rest.anchors = total.anchors - super[j].anchors;
        rest.v.resize(lay.total());
        for (int k = 0; k < lay.total(); ++k) rest.v[k] = total.v[k] - super[j].v[k];
        loo[j] = reduce(lay, rest).cov;
        for (int k = 0; k < lay.total(); ++k) mean[k] += loo[j][k];
    }
    for (double& m : mean) m /= static_cast<double>(n_super);
    for (std::size_t j = 0; j < n_super; ++j)
        for (int k = 0; k < lay.total(); ++k) {
            double d = loo[j][k] - mean[k];
            m2[k] += d * d;
        }
    std::vector<double> stderr_(lay.total());
    const double jfac = (static_cast<double>(n_super) - 1.0) / static_cast<double>(n_super);
    for (int k = 0; k < lay.total(); ++k) stderr_[k] = std::sqrt(jfac * m2[k]);

    CovarianceSet cov;
    cov.empirical = true;
    cov.mapping_h = stream.mapping_h;
    cov.corr_length = period_ms;
    cov.max_tau = max_tau;
    cov.max_delta = max_delta;
    cov.moments = full.moments;
    cov.k_s1.resize(max_tau);
    cov.k_s2.resize(max_tau);
    cov.k_x1.resize(max_tau);
    cov.k_x2.resize(max_tau);
    cov.k_x3_row0.resize(max_tau);
    cov.se_s1.resize(max_tau);
    cov.se_s2.resize(max_tau);
    cov.se_x1.resize(max_tau);
    cov.se_x2.resize(max_tau);
    cov.se_x3_row0.resize(max_tau);
    cov.k_s3.resize(static_cast<std::size_t>(max_tau) * max_delta);
    cov.k_x3.resize(static_cast<std::size_t>(max_tau) * max_delta);
    cov.se_s3.resize(cov.k_s3.size());
    cov.se_x3.resize(cov.k_x3.size());
    for (int tau = 1; tau <= max_tau; ++tau) {
        cov.k_s1[tau - 1] = full.cov[lay.s1(tau)];
        cov.k_s2[tau - 1] = full.cov[lay.s2(tau)];
        cov.k_x1[tau - 1] = full.cov[lay.x1(tau)];
        cov.k_x2[tau - 1] = full.cov[lay.x2(tau)];
        cov.k_x3_row0[tau - 1] = full.cov[lay.row0(tau)];
        cov.se_s1[tau - 1] = stderr_[lay.s1(tau)];
        cov.se_s2[tau - 1] = stderr_[lay.s2(tau)];
        cov.se_x1[tau - 1] = stderr_[lay.x1(tau)];
        cov.se_x2[tau - 1] = stderr_[lay.x2(tau)];
        cov.se_x3_row0[tau - 1] = stderr_[lay.row0(tau)];
        for (int d = 1; d <= max_delta; ++d) {
            const std::size_t idx = static_cast<std::size_t>(tau - 1) * max_delta + d - 1;
            cov.k_s3[idx] = full.cov[lay.s3(tau, d)];
            cov.k_x3[idx] = full.cov[lay.x3(tau, d)];
            cov.se_s3[idx] = stderr_[lay.s3(tau, d)];
            cov.se_x3[idx] = stderr_[lay.x3(tau, d)];
        }
    }
    cov.k_x1_0 = full.cov[lay.x0_base()];
    cov.k_x2_0 = full.cov[lay.x0_base() + 1];
    cov.se_x1_0 = stderr_[lay.x0_base()];
    cov.se_x2_0 = stderr_[lay.x0_base() + 1];
    return cov;
}

}  // namespace megn
