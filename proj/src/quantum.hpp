#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gossip.hpp"
#include "graph.hpp"

namespace qgossip {

struct TwoQubitState {
    // Computational-basis amplitudes, row-major [a00, a01, a10, a11].
    std::array<std::complex<double>, 4> amplitudes;

    static TwoQubitState bell();                      // (|00> + |11>)/sqrt(2)
    static TwoQubitState product(std::int32_t i, std::int32_t j);  // |ij>
};

// C(a) = 2 |det A| for a normalized pure two-qubit state; 1 for Bell states,
// 0 for product states.
double concurrence(const TwoQubitState& state);

// Concurrence after a swap chain: the product of the individual link
// concurrences. Equals 1 iff every link is maximally entangled.
double chain_concurrence(std::span<const TwoQubitState> states);

struct PlannedPair {
    std::int32_t u = 0;
    std::int32_t v = 0;
    std::vector<std::int32_t> path;  // u..v, shortest, lexicographically smallest sequence
    std::int32_t swap_count = 0;     // path length - 2 = distance - 1
};

// Bill of materials for upgrading a connected graph to a complete contact
// graph: one entangled edge per non-adjacent pair, built along a shortest
// path with one swap per intermediate vertex.
struct UpdatePlan {
    std::int32_t n = 0;
    GossipMode mode = GossipMode::kSinglePiece;
    std::int32_t replicas = 1;  // 1 single-piece, n multi-piece
    std::vector<PlannedPair> pairs;

    std::int64_t total_edges() const { return static_cast<std::int64_t>(pairs.size()); }
    std::int64_t total_swaps() const;
    std::int64_t total_swaps_with_replicas() const { return replicas * total_swaps(); }
};

UpdatePlan plan_update(const Graph& g, GossipMode mode);

// {"replicas": r, "pairs": [{"u":, "v":, "path": [...], "swaps": k}, ...],
//  "totals": {...}}
std::string plan_to_json(const UpdatePlan& plan);

// Bell-pair ledger over every vertex pair of the updated network. Physical
// edges are provisioned at the same replica count as the swapped-in edges.
// Built by apply_update.
class QuantumNetwork {
public:
    const Graph& base() const { return base_; }
    std::int32_t vertex_count() const { return n_; }
    std::int64_t ledger(std::int32_t u, std::int32_t v) const;
    std::int64_t total_ledger() const;
    bool contact_complete() const;  // every pair holds at least one Bell pair
    std::vector<std::int64_t> ledger_snapshot() const { return counts_; }

    // Consumes exactly one Bell pair; throws ResourceExhausted naming the
    // pair when none remain.
    void teleport(std::int32_t u, std::int32_t v);

private:
    friend QuantumNetwork apply_update(const Graph& g, const UpdatePlan& plan);

    explicit QuantumNetwork(Graph base);
    std::size_t index(std::int32_t u, std::int32_t v) const;

    Graph base_;
    std::int32_t n_ = 0;
    std::vector<std::int64_t> counts_;
};

// Validates the plan against g, then provisions `replicas` Bell pairs on
// every physical edge and every planned pair.
QuantumNetwork apply_update(const Graph& g, const UpdatePlan& plan);

struct ResourceReport {
    std::int64_t trials = 0;
    std::int64_t max_pair_draw = 0;    // most Bell pairs any one pair lost in a trial
    std::int64_t total_teleports = 0;  // summed over all trials
};

// Plans and applies the update, then runs complete-graph gossip with the
// uniform matrix, consuming one Bell pair per message teleported. Each trial
// works on its own ledger copy; exceeding the provisioning raises
// ResourceExhausted. The contact draws are identical to plain gossip on the
// complete graph with the same seed, so completion rounds match per trial.
TimeEstimate run_quantum_gossip(const Graph& g, GossipMode mode, double epsilon,
                                std::int64_t trials, std::uint64_t seed,
                                ResourceReport* resource_report = nullptr,
                                const EstimateOptions& options = {},
                                std::vector<std::int64_t>* out_completion_rounds = nullptr);

}  // namespace qgossip
