#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace megn {

// Fixed multiset of amplitude levels forming one constant-composition block.
struct AmplitudeComposition {
    std::vector<double> alphabet;  // positive levels, ascending
    std::vector<int> counts;       // per-level multiplicities

    int blocklength() const { return std::accumulate(counts.begin(), counts.end(), 0); }

    void validate() const {
        if (alphabet.empty() || alphabet.size() != counts.size())
            throw std::invalid_argument("composition needs matching alphabet/count lists");
        for (double u : alphabet)
            if (u <= 0.0) throw std::invalid_argument("amplitude levels must be positive");
        for (int c : counts)
            if (c < 0) throw std::invalid_argument("composition counts must be non-negative");
        if (blocklength() < 1) throw std::invalid_argument("composition must be non-empty");
    }

    AmplitudeComposition scaled(double s) const {
        AmplitudeComposition out = *this;
        for (double& u : out.alphabet) u *= s;
        return out;
    }

    std::vector<double> expanded() const {
        std::vector<double> v;
        v.reserve(blocklength());
        for (std::size_t k = 0; k < alphabet.size(); ++k)
            v.insert(v.end(), counts[k], alphabet[k]);
        return v;
    }
};

// Round n*pmf to integer counts with largest-remainder correction.
inline AmplitudeComposition make_composition(const std::vector<double>& pmf,
                                             const std::vector<double>& alphabet, int n) {
    if (pmf.size() != alphabet.size())
        throw std::invalid_argument("pmf and alphabet sizes differ");
    if (n < 1) throw std::invalid_argument("blocklength must be positive");
    double total = std::accumulate(pmf.begin(), pmf.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("pmf must sum to 1");
    for (double p : pmf)
        if (p < 0.0) throw std::invalid_argument("pmf entries must be non-negative");

    AmplitudeComposition comp;
    comp.alphabet = alphabet;
    comp.counts.resize(pmf.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    int assigned = 0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        double exact = pmf[k] * n;
        comp.counts[k] = static_cast<int>(std::floor(exact + 1e-12));
        assigned += comp.counts[k];
        remainders.push_back({exact - comp.counts[k], k});
    }
    int missing = n - assigned;
    if (missing < 0 || missing > static_cast<int>(pmf.size()))
        throw std::invalid_argument("cannot realize pmf at this blocklength");
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (int k = 0; k < missing; ++k) comp.counts[remainders[k].second] += 1;
    comp.validate();
    return comp;
}

}  // namespace megn
