#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "transition.hpp"

namespace qgossip {

struct ConductanceReport {
    double value = 0.0;
    std::vector<std::int32_t> argmin_set;  // ascending; lexicographically smallest minimizer
    std::int32_t k = 0;                    // cardinality cap used for the minimization
};

// Exhaustive subset enumeration is the exact oracle; beyond this size callers
// must use the circulant fast path or reduce n.
inline constexpr std::int32_t kEnumerationCap = 20;

// Exact minimum over nonempty S with |S| <= k of cut(S)/|S|, where
// cut(S) = sum of P[i][j] over i in S, j outside S. Requires 1 <= k <= n/2.
ConductanceReport k_conductance(const TransitionMatrix& P, std::int32_t k,
                                std::int32_t cap = kEnumerationCap);

// k_conductance with k = floor(n/2).
ConductanceReport conductance(const TransitionMatrix& P, std::int32_t cap = kEnumerationCap);

// sum over k = 1..n-1 of k / phi_eff(k) with phi_eff(k) = phi_min(k, n-k);
// the min(k, n-k) reduction uses the complement symmetry of the cut.
double mean_conductance(const TransitionMatrix& P, std::int32_t cap = kEnumerationCap);

// O(n*k) fast path for ring matrices: on a ring every minimizer is a
// contiguous arc, so only arcs are enumerated. Agrees exactly with the
// exhaustive result, including the tie-broken argmin.
ConductanceReport circulant_arc_k_conductance(const TransitionMatrix& P, std::int32_t k);
ConductanceReport circulant_arc_conductance(const TransitionMatrix& P);
double circulant_mean_conductance(const TransitionMatrix& P);

// Conductance / mean conductance for bound evaluation at sizes beyond the
// enumeration cap: rings use the arc path, exact complete-graph matrices use
// the closed forms (n - min(k, n-k))/n, anything else falls back to
// enumeration or raises CapacityError.
double conductance_value(const TransitionMatrix& P, std::int32_t cap = kEnumerationCap,
                         bool allow_fast_paths = true);
double mean_conductance_value(const TransitionMatrix& P, std::int32_t cap = kEnumerationCap,
                              bool allow_fast_paths = true);

// {"value": <float>, "argmin": [ints], "k": <int>}
std::string report_to_json(const ConductanceReport& report);

}  // namespace qgossip
