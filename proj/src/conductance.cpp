#include "conductance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

#include "errors.hpp"

namespace qgossip {

namespace {

// Compares bit masks as ascending vertex sequences; a proper prefix sorts
// first. Used to break exact value ties deterministically.
bool subset_lex_less(std::uint32_t a, std::uint32_t b) {
    while (a != 0 && b != 0) {
        const int ba = std::countr_zero(a);
        const int bb = std::countr_zero(b);
        if (ba != bb) return ba < bb;
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

std::vector<std::int32_t> mask_to_set(std::uint32_t mask) {
    std::vector<std::int32_t> out;
    while (mask != 0) {
        out.push_back(std::countr_zero(mask));
        mask &= mask - 1;
    }
    return out;
}

struct SizeMinima {
    std::vector<double> value;        // index = |S|, 1-based
    std::vector<std::uint32_t> mask;  // lexicographically smallest minimizer per size
};

// One pass over all nonempty subsets up to max_size, tracking the minimum
// cut ratio per subset size.
SizeMinima size_minima(const TransitionMatrix& P, std::int32_t max_size) {
    const std::int32_t n = P.size();
    const auto& edges = P.graph().edges();
    SizeMinima minima;
    minima.value.assign(static_cast<std::size_t>(max_size) + 1,
                        std::numeric_limits<double>::infinity());
    minima.mask.assign(static_cast<std::size_t>(max_size) + 1, 0);

    const std::uint32_t limit = static_cast<std::uint32_t>(1) << n;
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
        const int size = std::popcount(mask);
        if (size > max_size) continue;
        double cut = 0.0;
        for (const auto& [a, b] : edges) {
            const bool ina = (mask >> a) & 1u;
            const bool inb = (mask >> b) & 1u;
            if (ina != inb) cut += P.at(a, b);
        }
        const double ratio = cut / static_cast<double>(size);
        auto& best = minima.value[static_cast<std::size_t>(size)];
        auto& best_mask = minima.mask[static_cast<std::size_t>(size)];
        if (ratio < best || (ratio == best && subset_lex_less(mask, best_mask))) {
            best = ratio;
            best_mask = mask;
        }
    }
    return minima;
}

void check_enumeration_inputs(const TransitionMatrix& P, std::int32_t k, std::int32_t cap) {
    require_valid(P);
    const std::int32_t n = P.size();
    if (n > cap) {
        throw CapacityError("exhaustive conductance is capped at n <= " + std::to_string(cap) +
                            " (got n = " + std::to_string(n) +
                            "); use the circulant arc fast path for rings or reduce n");
    }
    if (k < 1 || k > n / 2) {
        throw InvalidParameter("subset size cap k = " + std::to_string(k) +
                               " must lie in [1, n/2] with n = " + std::to_string(n));
    }
}

bool is_canonical_ring(const Graph& g) {
    const std::int32_t n = g.vertex_count();
    if (n < 3 || g.edge_count() != n) return false;
    for (std::int32_t i = 0; i < n; ++i) {
        if (!g.has_edge(i, (i + 1) % n)) return false;
    }
    return true;
}

bool is_uniform_complete(const TransitionMatrix& P) {
    const double expected = 1.0 / static_cast<double>(P.size());
    for (double v : P.entries()) {
        if (v != expected) return false;
    }
    return true;
}

}  // namespace

ConductanceReport k_conductance(const TransitionMatrix& P, std::int32_t k, std::int32_t cap) {
    check_enumeration_inputs(P, k, cap);
    const SizeMinima minima = size_minima(P, k);

    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_mask = 0;
    for (std::int32_t s = 1; s <= k; ++s) {
        const double v = minima.value[static_cast<std::size_t>(s)];
        const std::uint32_t m = minima.mask[static_cast<std::size_t>(s)];
        if (v < best || (v == best && subset_lex_less(m, best_mask))) {
            best = v;
            best_mask = m;
        }
    }
    return ConductanceReport{best, mask_to_set(best_mask), k};
}

ConductanceReport conductance(const TransitionMatrix& P, std::int32_t cap) {
    return k_conductance(P, P.size() / 2, cap);
}

double mean_conductance(const TransitionMatrix& P, std::int32_t cap) {
    const std::int32_t n = P.size();
    check_enumeration_inputs(P, n / 2, cap);
    const SizeMinima minima = size_minima(P, n / 2);

    std::vector<double> prefix_min(static_cast<std::size_t>(n / 2) + 1,
                                   std::numeric_limits<double>::infinity());
    for (std::int32_t s = 1; s <= n / 2; ++s) {
        prefix_min[static_cast<std::size_t>(s)] =
            std::min(prefix_min[static_cast<std::size_t>(s - 1)],
                     minima.value[static_cast<std::size_t>(s)]);
    }

    double sum = 0.0;
    for (std::int32_t k = 1; k <= n - 1; ++k) {
        const std::int32_t m = std::min(k, n - k);
        const double phi = prefix_min[static_cast<std::size_t>(m)];
        if (!(phi > 0.0)) {
            throw DisconnectedGraph("mean conductance undefined: zero k-conductance at k = " +
                                    std::to_string(k) + " (disconnected support)");
        }
        sum += static_cast<double>(k) / phi;
    }
    return sum;
}

namespace {

// Minimum cut ratio over contiguous arcs, per arc length 1..max_size.
struct ArcMinima {
    std::vector<double> value;
    std::vector<std::vector<std::int32_t>> set;
};

ArcMinima arc_minima(const TransitionMatrix& P, std::int32_t max_size) {
    const std::int32_t n = P.size();
    ArcMinima minima;
    minima.value.assign(static_cast<std::size_t>(max_size) + 1,
                        std::numeric_limits<double>::infinity());
    minima.set.assign(static_cast<std::size_t>(max_size) + 1, {});

    for (std::int32_t s = 1; s <= max_size; ++s) {
        double best = std::numeric_limits<double>::infinity();
        std::vector<std::int32_t> best_set;
        for (std::int32_t start = 0; start < n; ++start) {
            const std::int32_t left = (start + n - 1) % n;
            const std::int32_t tail = (start + s - 1) % n;
            const std::int32_t right = (start + s) % n;
            const double ratio = (P.at(left, start) + P.at(tail, right)) / static_cast<double>(s);
            if (ratio > best) continue;
            std::vector<std::int32_t> arc(static_cast<std::size_t>(s));
            for (std::int32_t i = 0; i < s; ++i) arc[static_cast<std::size_t>(i)] = (start + i) % n;
            std::sort(arc.begin(), arc.end());
            if (ratio < best ||
                std::lexicographical_compare(arc.begin(), arc.end(), best_set.begin(), best_set.end())) {
                best = ratio;
                best_set = std::move(arc);
            }
        }
        minima.value[static_cast<std::size_t>(s)] = best;
        minima.set[static_cast<std::size_t>(s)] = std::move(best_set);
    }
    return minima;
}

void check_ring_input(const TransitionMatrix& P) {
    require_valid(P);
    if (!is_canonical_ring(P.graph())) {
        throw InvalidParameter("circulant arc fast path requires a ring matrix");
    }
}

}  // namespace

ConductanceReport circulant_arc_k_conductance(const TransitionMatrix& P, std::int32_t k) {
    check_ring_input(P);
    const std::int32_t n = P.size();
    if (k < 1 || k > n / 2) {
        throw InvalidParameter("subset size cap k = " + std::to_string(k) +
                               " must lie in [1, n/2] with n = " + std::to_string(n));
    }
    const ArcMinima minima = arc_minima(P, k);
    double best = std::numeric_limits<double>::infinity();
    const std::vector<std::int32_t>* best_set = nullptr;
    for (std::int32_t s = 1; s <= k; ++s) {
        const double v = minima.value[static_cast<std::size_t>(s)];
        const auto& set = minima.set[static_cast<std::size_t>(s)];
        if (v < best ||
            (v == best && best_set != nullptr &&
             std::lexicographical_compare(set.begin(), set.end(), best_set->begin(), best_set->end()))) {
            best = v;
            best_set = &set;
        }
    }
    return ConductanceReport{best, *best_set, k};
}

ConductanceReport circulant_arc_conductance(const TransitionMatrix& P) {
    check_ring_input(P);
    return circulant_arc_k_conductance(P, P.size() / 2);
}

double circulant_mean_conductance(const TransitionMatrix& P) {
    check_ring_input(P);
    const std::int32_t n = P.size();
    const ArcMinima minima = arc_minima(P, n / 2);

    std::vector<double> prefix_min(static_cast<std::size_t>(n / 2) + 1,
                                   std::numeric_limits<double>::infinity());
    for (std::int32_t s = 1; s <= n / 2; ++s) {
        prefix_min[static_cast<std::size_t>(s)] =
            std::min(prefix_min[static_cast<std::size_t>(s - 1)],
                     minima.value[static_cast<std::size_t>(s)]);
    }
    double sum = 0.0;
    for (std::int32_t k = 1; k <= n - 1; ++k) {
        const std::int32_t m = std::min(k, n - k);
        const double phi = prefix_min[static_cast<std::size_t>(m)];
        if (!(phi > 0.0)) {
            throw DisconnectedGraph("mean conductance undefined: zero k-conductance");
        }
        sum += static_cast<double>(k) / phi;
    }
    return sum;
}

double conductance_value(const TransitionMatrix& P, std::int32_t cap, bool allow_fast_paths) {
    require_valid(P);
    const std::int32_t n = P.size();
    if (allow_fast_paths && is_canonical_ring(P.graph())) {
        return circulant_arc_conductance(P).value;
    }
    if (allow_fast_paths && is_uniform_complete(P)) {
        return static_cast<double>(n - n / 2) / static_cast<double>(n);
    }
    return conductance(P, cap).value;
}

double mean_conductance_value(const TransitionMatrix& P, std::int32_t cap, bool allow_fast_paths) {
    require_valid(P);
    const std::int32_t n = P.size();
    if (allow_fast_paths && is_canonical_ring(P.graph())) {
        return circulant_mean_conductance(P);
    }
    if (allow_fast_paths && is_uniform_complete(P)) {
        double sum = 0.0;
        for (std::int32_t k = 1; k <= n - 1; ++k) {
            const std::int32_t m = std::min(k, n - k);
            sum += static_cast<double>(k) * static_cast<double>(n) / static_cast<double>(n - m);
        }
        return sum;
    }
    return mean_conductance(P, cap);
}

std::string report_to_json(const ConductanceReport& report) {
    nlohmann::ordered_json j;
    j["value"] = report.value;
    j["argmin"] = report.argmin_set;
    j["k"] = report.k;
    return j.dump();
}

}  // namespace qgossip
