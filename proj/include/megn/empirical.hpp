#pragma once

#include "megn/correlations.hpp"
#include "megn/shaping.hpp"

namespace megn {

// Sample estimate of the time-averaged energy covariances from a symbol
// stream whose block boundaries are known (index 0 starts a shaping block of
// period_ms symbols). Pair entries cover tau in [1, max_tau]; triple entries
// tau' = tau + delta with delta in [1, max_delta], matching the summation
// domain of the PSD assembly. Standard errors are delete-one jackknife over
// contiguous block groups, which respects the dependence of products that
// cross block boundaries.
CovarianceSet empirical_covariances(const SymbolStream& stream, int period_ms, int max_tau,
                                    int max_delta);

}  // namespace megn
