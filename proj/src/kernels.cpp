#include "megn/kernels.hpp"

#include <algorithm>
#include <list>
#include <mutex>
#include <stdexcept>

namespace megn {

namespace {

constexpr double k16_27 = kernel_pol_norm * 16.0 / 27.0;
constexpr double k16_81 = kernel_pol_norm * 16.0 / 81.0;
constexpr double k32_81 = kernel_pol_norm * 32.0 / 81.0;

long long b_key(int p, int q) {
    // B(p,q) = B(q,p); normalize the key order.
    if (p > q) std::swap(p, q);
    return (static_cast<long long>(p) << 32) ^ (static_cast<long long>(q) & 0xffffffffLL);
}

}  // namespace

const char* to_string(KernelId id) {
    switch (id) {
        case KernelId::phi1: return "phi1";
        case KernelId::phi2: return "phi2";
        case KernelId::phi3: return "phi3";
        case KernelId::phi4: return "phi4";
        case KernelId::chi1: return "chi1";
        case KernelId::chi2: return "chi2";
        case KernelId::chi3: return "chi3";
        case KernelId::xi1: return "xi1";
        case KernelId::xi2: return "xi2";
        case KernelId::psi1: return "psi1";
        case KernelId::psi2: return "psi2";
        case KernelId::psi3: return "psi3";
    }
    return "?";
}

KernelId kernel_id_from_string(const std::string& name) {
    static const std::unordered_map<std::string, KernelId> map = {
        {"phi1", KernelId::phi1}, {"phi2", KernelId::phi2}, {"phi3", KernelId::phi3},
        {"phi4", KernelId::phi4}, {"chi1", KernelId::chi1}, {"chi2", KernelId::chi2},
        {"chi3", KernelId::chi3}, {"xi1", KernelId::xi1},   {"xi2", KernelId::xi2},
        {"psi1", KernelId::psi1}, {"psi2", KernelId::psi2}, {"psi3", KernelId::psi3},
    };
    auto it = map.find(name);
    if (it == map.end()) throw std::invalid_argument("unknown kernel id: " + name);
    return it->second;
}

KernelEvaluator::KernelEvaluator(std::shared_ptr<const KernelGrid> grid) : grid_(std::move(grid)) {}

std::vector<cplx> KernelEvaluator::compute_row_transform(const std::vector<cplx>& table,
                                                         int q) const {
    const KernelGrid& g = *grid_;
    const int n = g.n;
    std::vector<cplx> phase(n);
    for (int j = 0; j < n; ++j)
        phase[j] = g.weight[j] * std::polar(1.0, 2.0 * pi * q * g.freq[j] / g.symbol_rate_hz);
    std::vector<cplx> out(n);
    for (int i = 0; i < n; ++i) {
        const cplx* row = table.data() + static_cast<std::size_t>(i) * n;
        cplx acc(0.0, 0.0);
        for (int j = 0; j < n; ++j) acc += row[j] * phase[j];
        out[i] = acc;
    }
    return out;
}

const std::vector<cplx>& KernelEvaluator::rt(int q) const {
    auto it = rt_cache_.find(q);
    if (it == rt_cache_.end())
        it = rt_cache_.emplace(q, compute_row_transform(grid_->t_row, q)).first;
    return it->second;
}

const std::vector<cplx>& KernelEvaluator::ru(int q) const {
    auto it = ru_cache_.find(q);
    if (it == ru_cache_.end())
        it = ru_cache_.emplace(q, compute_row_transform(grid_->u_row, q)).first;
    return it->second;
}

cplx KernelEvaluator::bcoef(int p, int q) const {
    const long long key = b_key(p, q);
    auto it = b_cache_.find(key);
    if (it != b_cache_.end()) return it->second;
    // Use the symmetric representative that reuses an existing row transform
    // if possible.
    int pp = p, qq = q;
    if (rt_cache_.count(qq) == 0 && rt_cache_.count(pp) != 0) std::swap(pp, qq);
    const KernelGrid& g = *grid_;
    const std::vector<cplx>& row = rt(qq);
    cplx acc(0.0, 0.0);
    for (int i = 0; i < g.n; ++i) {
        acc += g.weight[i] * g.s_axis[i] *
               std::polar(1.0, 2.0 * pi * pp * g.freq[i] / g.symbol_rate_hz) * row[i];
    }
    b_cache_.emplace(key, acc);
    return acc;
}

void KernelEvaluator::prepare_delays(int max_tau, bool with_double_sums) {
    const int qmax = with_double_sums ? 2 * max_tau : max_tau;
    std::vector<int> qs;
    qs.push_back(0);
    for (int q = 1; q <= qmax; ++q) {
        qs.push_back(q);
        qs.push_back(-q);
    }
    std::vector<std::vector<cplx>> rt_results(qs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t k = 0; k < qs.size(); ++k)
        rt_results[k] = compute_row_transform(grid_->t_row, qs[k]);
    for (std::size_t k = 0; k < qs.size(); ++k) rt_cache_[qs[k]] = std::move(rt_results[k]);

    std::vector<int> qu;
    qu.push_back(0);
    for (int q = 1; q <= max_tau; ++q) {
        qu.push_back(q);
        qu.push_back(-q);
    }
    std::vector<std::vector<cplx>> ru_results(qu.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t k = 0; k < qu.size(); ++k)
        ru_results[k] = compute_row_transform(grid_->u_row, qu[k]);
    for (std::size_t k = 0; k < qu.size(); ++k) ru_cache_[qu[k]] = std::move(ru_results[k]);
}

double KernelEvaluator::phi(int id) const {
    const KernelGrid& g = *grid_;
    const double rs = g.symbol_rate_hz;
    switch (id) {
        case 1:
            return k16_27 * rs * rs * rs * g.sum_abs_upsilon_sq;
        case 2: {
            double acc = 0.0;
            for (int i = 0; i < g.n; ++i)
                acc += g.weight[i] * g.s_axis[i] * g.s_axis[i] * std::norm(g.rowsum_t[i]);
            return k16_81 * rs * rs * acc;
        }
        case 3: {
            double acc = 0.0;
            for (int i = 0; i < g.n; ++i)
                acc += g.weight[i] * g.s_axis[i] * g.s_axis[i] * std::norm(g.rowsum_u[i]);
            return k16_81 * rs * rs * acc;
        }
        case 4:
            return k16_81 * rs * std::norm(g.b00);
        default:
            throw std::invalid_argument("phi id must be in 1..4");
    }
}

double KernelEvaluator::chi1(int tau) const {
    const KernelGrid& g = *grid_;
    const double rs = g.symbol_rate_hz;
    const cplx rot = std::polar(1.0, 2.0 * pi * tau * g.f_target / rs);
    const cplx c = 0.5 * (rot * bcoef(0, -tau) + std::conj(rot) * bcoef(0, tau));
    // |iint U cos^2|^2 - |iint U sin^2|^2 with cos^2 = (A+C)/2, sin^2 = (A-C)/2
    return k32_81 * rs * (g.b00 * std::conj(c)).real();
}

double KernelEvaluator::chi2(int tau) const {
    const double rs = grid_->symbol_rate_hz;
    return k32_81 * rs * 0.5 * (std::norm(bcoef(tau, 0)) + std::norm(bcoef(-tau, 0)));
}

double KernelEvaluator::chi3(int tau) const {
    const double rs = grid_->symbol_rate_hz;
    return k32_81 * rs * 0.5 * (std::norm(bcoef(tau, tau)) + std::norm(bcoef(-tau, -tau)));
}

double KernelEvaluator::xi1(int tau) const {
    const KernelGrid& g = *grid_;
    const double rs = g.symbol_rate_hz;
    // cos^2 - sin^2 of the outer weight collapses to cos(2 pi tau (f - f1)/Rs).
    double acc = 0.0;
    for (int i = 0; i < g.n; ++i) {
        double w = std::cos(2.0 * pi * tau * (g.f_target - g.freq[i]) / rs);
        acc += g.weight[i] * w * g.s_axis[i] * g.s_axis[i] * std::norm(g.rowsum_t[i]);
    }
    return k32_81 * rs * rs * acc;
}

double KernelEvaluator::psi1(int tau) const {
    const KernelGrid& g = *grid_;
    const double rs = g.symbol_rate_hz;
    const std::vector<cplx>& plus = rt(tau);
    const std::vector<cplx>& minus = rt(-tau);
    double acc = 0.0;
    for (int i = 0; i < g.n; ++i)
        acc += g.weight[i] * g.s_axis[i] * g.s_axis[i] * 0.5 *
               (std::norm(plus[i]) + std::norm(minus[i]));
    return k32_81 * rs * rs * acc;
}

double KernelEvaluator::psi2(int tau) const {
    const KernelGrid& g = *grid_;
    const double rs = g.symbol_rate_hz;
    const std::vector<cplx>& plus = ru(tau);
    const std::vector<cplx>& minus = ru(-tau);
    double acc = 0.0;
    for (int i = 0; i < g.n; ++i)
        acc += g.weight[i] * g.s_axis[i] * g.s_axis[i] * 0.5 *
               (std::norm(plus[i]) + std::norm(minus[i]));
    return k16_81 * rs * rs * acc;
}

double KernelEvaluator::xi2(int tau, int tau_prime) const {
    const KernelGrid& g = *grid_;
    const double rs = g.symbol_rate_hz;
    // A(p) = iint Upsilon exp(j 2 pi p (f1 - f)/Rs) = e^{-j 2 pi p f/Rs} B(p,0)
    auto A = [&](int p) {
        return std::polar(1.0, -2.0 * pi * p * g.f_target / rs) * bcoef(p, 0);
    };
    const int d = tau_prime - tau;
    double v = 0.0;
    v += std::norm(A(tau) + A(tau_prime)) - std::norm(bcoef(tau, 0)) - std::norm(bcoef(tau_prime, 0));
    v += std::norm(A(d) + A(-tau)) - std::norm(bcoef(d, 0)) - std::norm(bcoef(-tau, 0));
    v += std::norm(A(-d) + A(-tau_prime)) - std::norm(bcoef(-d, 0)) - std::norm(bcoef(-tau_prime, 0));
    return k16_81 * rs * v;
}

double KernelEvaluator::psi3(int tau, int tau_prime) const {
    const double rs = grid_->symbol_rate_hz;
    const int d = tau_prime - tau;
    double v = std::norm(bcoef(-tau, -tau_prime)) + std::norm(bcoef(-tau_prime, -tau)) +
               std::norm(bcoef(tau, -d)) + std::norm(bcoef(-d, tau)) +
               std::norm(bcoef(d, tau_prime)) + std::norm(bcoef(tau_prime, d));
    return k16_81 * rs * v;
}

double KernelEvaluator::single_delay(KernelId id, int tau) const {
    switch (id) {
        case KernelId::chi1: return chi1(tau);
        case KernelId::chi2: return chi2(tau);
        case KernelId::chi3: return chi3(tau);
        case KernelId::xi1: return xi1(tau);
        case KernelId::psi1: return psi1(tau);
        case KernelId::psi2: return psi2(tau);
        default:
            throw std::invalid_argument("not a single-delay kernel: " + std::string(to_string(id)));
    }
}

KernelTable compute_kernel_table(std::shared_ptr<const KernelGrid> grid, int memory,
                                 bool with_double_sums) {
    if (memory < 0) throw std::invalid_argument("memory must be non-negative");
    KernelEvaluator ev(grid);
    ev.prepare_delays(memory, with_double_sums);

    KernelTable t;
    t.f_hz = grid->f_target;
    t.memory = memory;
    for (int id = 1; id <= 4; ++id) t.phi[id - 1] = ev.phi(id);
    t.chi1.resize(memory);
    t.chi2.resize(memory);
    t.chi3.resize(memory);
    t.xi1.resize(memory);
    t.psi1.resize(memory);
    t.psi2.resize(memory);
    for (int tau = 1; tau <= memory; ++tau) {
        t.chi1[tau - 1] = ev.chi1(tau);
        t.chi2[tau - 1] = ev.chi2(tau);
        t.chi3[tau - 1] = ev.chi3(tau);
        t.xi1[tau - 1] = ev.xi1(tau);
        t.psi1[tau - 1] = ev.psi1(tau);
        t.psi2[tau - 1] = ev.psi2(tau);
    }
    if (with_double_sums) {
        t.xi2.resize(static_cast<std::size_t>(memory) * memory);
        t.psi3.resize(static_cast<std::size_t>(memory) * memory);
        for (int tau = 1; tau <= memory; ++tau) {
            for (int tp = tau + 1; tp <= tau + memory; ++tp) {
                const std::size_t idx =
                    static_cast<std::size_t>(tau - 1) * memory + (tp - tau - 1);
                t.xi2[idx] = ev.xi2(tau, tp);
                t.psi3[idx] = ev.psi3(tau, tp);
            }
        }
    }
    return t;
}

namespace {

struct GridCacheEntry {
    std::size_t key;
    std::shared_ptr<const KernelGrid> grid;
};

std::size_t hash_combine(std::size_t h, double v) {
    std::size_t x = std::hash<double>{}(v);
    return h ^ (x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t grid_key(double f, const PulseShape& pulse, const LinkConfig& link,
                     const QuadratureConfig& quad) {
    std::size_t h = 0;
    h = hash_combine(h, f);
    h = hash_combine(h, pulse.symbol_rate_hz);
    h = hash_combine(h, pulse.rolloff);
    h = hash_combine(h, link.alpha_db_per_km);
    h = hash_combine(h, link.dispersion_ps_nm_km);
    h = hash_combine(h, link.gamma_per_w_km);
    h = hash_combine(h, link.span_length_km);
    h = hash_combine(h, link.num_spans);
    h = hash_combine(h, link.center_wavelength_nm);
    h = hash_combine(h, quad.points_per_axis);
    h = hash_combine(h, quad.integration_bound_hz);
    h = hash_combine(h, quad.singular_refinement);
    return h;
}

std::mutex cache_mutex;
std::list<GridCacheEntry> grid_cache;  // small LRU
constexpr std::size_t kCacheCapacity = 8;

}  // namespace

std::shared_ptr<const KernelGrid> shared_kernel_grid(double f, const PulseShape& pulse,
                                                     const LinkConfig& link,
                                                     const QuadratureConfig& quad) {
    const std::size_t key = grid_key(f, pulse, link, quad);
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        for (auto it = grid_cache.begin(); it != grid_cache.end(); ++it) {
            if (it->key == key) {
                grid_cache.splice(grid_cache.begin(), grid_cache, it);
                return grid_cache.front().grid;
            }
        }
    }
    auto grid = std::make_shared<const KernelGrid>(build_kernel_grid(f, pulse, link, quad));
    std::lock_guard<std::mutex> lock(cache_mutex);
    grid_cache.push_front({key, grid});
    if (grid_cache.size() > kCacheCapacity) grid_cache.pop_back();
    return grid;
}

void clear_kernel_grid_cache() {
    std::lock_guard<std::mutex> lock(cache_mutex);
    grid_cache.clear();
}

KernelValue eval_phi(int id, double f, const PulseShape& pulse, const LinkConfig& link,
                     const QuadratureConfig& quad) {
    if (id < 1 || id > 4) throw std::invalid_argument("phi id must be in 1..4");
    KernelEvaluator ev(shared_kernel_grid(f, pulse, link, quad));
    KernelValue v;
    v.id = static_cast<KernelId>(static_cast<int>(KernelId::phi1) + id - 1);
    v.f_hz = f;
    v.value = ev.phi(id);
    return v;
}

KernelValue eval_single_delay_kernel(KernelId id, int tau, double f, const PulseShape& pulse,
                                     const LinkConfig& link, const QuadratureConfig& quad) {
    if (tau < 0) throw std::invalid_argument("tau must be a non-negative integer");
    KernelEvaluator ev(shared_kernel_grid(f, pulse, link, quad));
    KernelValue v;
    v.id = id;
    v.tau = tau;
    v.f_hz = f;
    v.value = ev.single_delay(id, tau);
    return v;
}

KernelValue eval_double_delay_kernel(KernelId id, int tau, int tau_prime, double f,
                                     const PulseShape& pulse, const LinkConfig& link,
                                     const QuadratureConfig& quad) {
    if (id != KernelId::xi2 && id != KernelId::psi3)
        throw std::invalid_argument("not a double-delay kernel: " + std::string(to_string(id)));
    if (tau <= 0 || tau >= tau_prime)
        throw std::invalid_argument("double-delay kernels require 0 < tau < tau_prime");
    KernelEvaluator ev(shared_kernel_grid(f, pulse, link, quad));
    KernelValue v;
    v.id = id;
    v.tau = tau;
    v.tau_prime = tau_prime;
    v.f_hz = f;
    v.value = id == KernelId::xi2 ? ev.xi2(tau, tau_prime) : ev.psi3(tau, tau_prime);
    return v;
}

}  // namespace megn
