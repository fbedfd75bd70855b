#pragma once

// Exhaustive oracle for constant-composition energy statistics. Expectations
// are taken literally: enumerate every multiset permutation of a block with
// std::next_permutation and average the requested monomial. Distinct blocks
// are independent by construction of the mapping, so multi-block monomials
// factor into per-block enumerations. Test-only; O(N! / prod N_u!) per block.

#include <algorithm>
#include <map>
#include <tuple>
#include <vector>

#include "megn/composition.hpp"

namespace oracle {

using megn::AmplitudeComposition;

class BlockEnumerator {
public:
    explicit BlockEnumerator(const AmplitudeComposition& comp) : values_(comp.expanded()) {
        std::sort(values_.begin(), values_.end());
    }

    // E[ prod_k u_{pos_k}^{exp_k} ] over all multiset permutations. By
    // exchangeability the value depends only on the exponent multiset, which
    // is used as the memoization key.
    double expectation(std::vector<int> exponents) {
        std::sort(exponents.begin(), exponents.end());
        auto it = memo_.find(exponents);
        if (it != memo_.end()) return it->second;

        std::vector<double> perm = values_;
        double total = 0.0;
        long count = 0;
        do {
            double prod = 1.0;
            for (std::size_t k = 0; k < exponents.size(); ++k)
                prod *= std::pow(perm[k], exponents[k]);
            total += prod;
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        double result = total / static_cast<double>(count);
        memo_.emplace(std::move(exponents), result);
        return result;
    }

private:
    std::vector<double> values_;
    std::map<std::vector<int>, double> memo_;
};

// Resolves (dimension, time) to (block id, position in block) for H-D mapping.
// Dimensions are 0:X-I, 1:X-Q, 2:Y-I, 3:Y-Q; time is the global symbol slot.
struct Mapping {
    int n;  // blocklength
    int h;
    int ms() const { return n / h; }

    std::pair<long, int> locate(int dim, long w) const {
        long group = w / ms();
        int slot = static_cast<int>(w % ms());
        switch (h) {
            case 1: return {group * 4 + dim, slot};
            case 2: return {group * 2 + dim / 2, 2 * slot + dim % 2};
            default: return {group, 4 * slot + dim};
        }
    }
};

// One |a^{pol}_w|^{2e} factor.
struct EnergyFactor {
    int pol;  // 0 = x, 1 = y
    long w;
    int e;  // 1, 2 or 3
};

// E[ prod |a^{pol}_w|^{2e} ] for ideal CCDM with i.u.d. signs (signs cancel in
// energies). Expands each (u_I^2 + u_Q^2)^e binomially, maps every monomial
// term to block positions and multiplies per-block enumerated expectations.
inline double energy_moment(const AmplitudeComposition& comp, int h,
                            const std::vector<EnergyFactor>& factors) {
    Mapping map{comp.blocklength(), h};
    BlockEnumerator blocks(comp);

    // term: list of (dim-exponent) pairs with multiplicity weight
    struct Term {
        double weight;
        std::vector<std::pair<std::pair<long, int>, int>> powers;  // (block,pos) -> exponent
    };
    std::vector<Term> terms{{1.0, {}}};
    for (const EnergyFactor& fac : factors) {
        int dim_i = fac.pol * 2;
        int dim_q = dim_i + 1;
        auto loc_i = map.locate(dim_i, fac.w);
        auto loc_q = map.locate(dim_q, fac.w);
        // (uI^2 + uQ^2)^e expanded: sum_k C(e,k) uI^{2k} uQ^{2(e-k)}
        std::vector<std::tuple<double, int, int>> expansion;
        if (fac.e == 1)
            expansion = {{1, 2, 0}, {1, 0, 2}};
        else if (fac.e == 2)
            expansion = {{1, 4, 0}, {2, 2, 2}, {1, 0, 4}};
        else
            expansion = {{1, 6, 0}, {3, 4, 2}, {3, 2, 4}, {1, 0, 6}};

        std::vector<Term> next;
        for (const Term& t : terms)
            for (auto [w8, ei, eq] : expansion) {
                Term nt = t;
                nt.weight *= w8;
                if (ei > 0) nt.powers.push_back({loc_i, ei});
                if (eq > 0) nt.powers.push_back({loc_q, eq});
                next.push_back(std::move(nt));
            }
        terms = std::move(next);
    }

    double total = 0.0;
    for (const Term& t : terms) {
        // merge repeated positions, then group by block
        std::map<std::pair<long, int>, int> merged;
        for (auto& [pos, e] : t.powers) merged[pos] += e;
        std::map<long, std::vector<int>> per_block;
        for (auto& [pos, e] : merged) per_block[pos.first].push_back(e);
        double prod = t.weight;
        for (auto& [b, exps] : per_block) prod *= blocks.expectation(exps);
        total += prod;
    }
    return total;
}

// Time-averaged correlations over one period, matching the closed-form
// correlation functions.
inline double avg_pair(const AmplitudeComposition& comp, int h, int pol2, int tau, int e2) {
    Mapping map{comp.blocklength(), h};
    double acc = 0.0;
    for (int w = 0; w < map.ms(); ++w)
        acc += energy_moment(comp, h, {{0, w, 1}, {pol2, w + tau, e2}});
    return acc / map.ms();
}

inline double avg_triple(const AmplitudeComposition& comp, int h, int pol_mid, int tau,
                         int tau_prime) {
    Mapping map{comp.blocklength(), h};
    double acc = 0.0;
    for (int w = 0; w < map.ms(); ++w)
        acc += energy_moment(comp, h, {{0, w, 1}, {pol_mid, w + tau, 1}, {0, w + tau_prime, 1}});
    return acc / map.ms();
}

// time-averaged same-time cross-polarization pair with a third symbol at
// delay tau: E[|a^x_w|^2 |a^y_w|^2 |a^x_{w+tau}|^2] averaged over the period
inline double avg_x3_row0(const AmplitudeComposition& comp, int h, int tau) {
    Mapping map{comp.blocklength(), h};
    double acc = 0.0;
    for (int w = 0; w < map.ms(); ++w)
        acc += energy_moment(comp, h, {{0, w, 1}, {1, w, 1}, {0, w + tau, 1}});
    return acc / map.ms();
}

}  // namespace oracle
