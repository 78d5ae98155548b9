#include "quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "errors.hpp"

namespace qgossip {

namespace {

constexpr double kNormTolerance = 1e-12;

std::string pair_text(std::int32_t a, std::int32_t b) {
    return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

}  // namespace

TwoQubitState TwoQubitState::bell() {
    const double r = 1.0 / std::sqrt(2.0);
    return TwoQubitState{{r, 0.0, 0.0, r}};
}

TwoQubitState TwoQubitState::product(std::int32_t i, std::int32_t j) {
    TwoQubitState s{{0.0, 0.0, 0.0, 0.0}};
    s.amplitudes[static_cast<std::size_t>(2 * i + j)] = 1.0;
    return s;
}

double concurrence(const TwoQubitState& state) {
    double norm = 0.0;
    for (const auto& a : state.amplitudes) norm += std::norm(a);
    if (std::abs(norm - 1.0) > kNormTolerance) {
        throw InvalidParameter("two-qubit state is not normalized: |a|^2 = " +
                               std::to_string(norm));
    }
    const auto& a = state.amplitudes;
    const std::complex<double> det = a[0] * a[3] - a[1] * a[2];
    return 2.0 * std::abs(det);
}

double chain_concurrence(std::span<const TwoQubitState> states) {
    if (states.empty()) {
        throw InvalidParameter("swap chain needs at least one entangled link");
    }
    double product = 1.0;
    for (const auto& s : states) product *= concurrence(s);
    return product;
}

std::int64_t UpdatePlan::total_swaps() const {
    std::int64_t total = 0;
    for (const auto& p : pairs) total += p.swap_count;
    return total;
}

namespace {

// Lexicographically smallest shortest path from u to v: walk from u, always
// taking the smallest neighbor that still lies on some shortest path.
std::vector<std::int32_t> lex_shortest_path(const Graph& g, const DistanceMatrix& dist,
                                            std::int32_t u, std::int32_t v) {
    std::vector<std::int32_t> path{u};
    std::int32_t current = u;
    while (current != v) {
        const std::int32_t remaining = dist.at(current, v);
        for (std::int32_t w : g.neighbors(current)) {
            if (dist.at(w, v) == remaining - 1) {
                path.push_back(w);
                current = w;
                break;
            }
        }
    }
    return path;
}

}  // namespace

UpdatePlan plan_update(const Graph& g, GossipMode mode) {
    const std::int32_t n = g.vertex_count();
    if (n < 2) throw InvalidParameter("update plan needs n >= 2, got " + std::to_string(n));
    if (!is_connected(g)) {
        throw DisconnectedGraph("update plan requires a connected graph");
    }
    const DistanceMatrix dist = distance_matrix(g);

    UpdatePlan plan;
    plan.n = n;
    plan.mode = mode;
    plan.replicas = mode == GossipMode::kMultiPiece ? n : 1;
    for (std::int32_t u = 0; u < n; ++u) {
        for (std::int32_t v = u + 1; v < n; ++v) {
            if (g.has_edge(u, v)) continue;
            PlannedPair pair;
            pair.u = u;
            pair.v = v;
            pair.path = lex_shortest_path(g, dist, u, v);
            pair.swap_count = static_cast<std::int32_t>(pair.path.size()) - 2;
            plan.pairs.push_back(std::move(pair));
        }
    }
    return plan;
}

std::string plan_to_json(const UpdatePlan& plan) {
    nlohmann::ordered_json j;
    j["replicas"] = plan.replicas;
    auto pairs = nlohmann::ordered_json::array();
    for (const auto& p : plan.pairs) {
        nlohmann::ordered_json entry;
        entry["u"] = p.u;
        entry["v"] = p.v;
        entry["path"] = p.path;
        entry["swaps"] = p.swap_count;
        pairs.push_back(std::move(entry));
    }
    j["pairs"] = std::move(pairs);
    j["totals"] = {{"total_edges", plan.total_edges()},
                   {"total_swaps", plan.total_swaps()},
                   {"total_swaps_with_replicas", plan.total_swaps_with_replicas()}};
    return j.dump();
}

QuantumNetwork::QuantumNetwork(Graph base)
    : base_(std::move(base)), n_(base_.vertex_count()) {
    counts_.assign(static_cast<std::size_t>(n_) * (static_cast<std::size_t>(n_) - 1) / 2, 0);
}

std::size_t QuantumNetwork::index(std::int32_t u, std::int32_t v) const {
    if (u > v) std::swap(u, v);
    if (u < 0 || v >= n_ || u == v) {
        throw InvalidParameter("vertex pair " + pair_text(u, v) + " out of range");
    }
    const auto uu = static_cast<std::size_t>(u);
    const auto nn = static_cast<std::size_t>(n_);
    return uu * nn - uu * (uu + 1) / 2 + static_cast<std::size_t>(v - u) - 1;
}

std::int64_t QuantumNetwork::ledger(std::int32_t u, std::int32_t v) const {
    return counts_[index(u, v)];
}

std::int64_t QuantumNetwork::total_ledger() const {
    std::int64_t total = 0;
    for (std::int64_t c : counts_) total += c;
    return total;
}

bool QuantumNetwork::contact_complete() const {
    return std::all_of(counts_.begin(), counts_.end(), [](std::int64_t c) { return c > 0; });
}

void QuantumNetwork::teleport(std::int32_t u, std::int32_t v) {
    auto& count = counts_[index(u, v)];
    if (count < 1) {
        throw ResourceExhausted("no Bell pairs remain on pair " + pair_text(u, v));
    }
    --count;
}

QuantumNetwork apply_update(const Graph& g, const UpdatePlan& plan) {
    const std::int32_t n = g.vertex_count();
    if (plan.n != n) {
        throw InvalidParameter("plan does not match graph: plan n = " + std::to_string(plan.n) +
                               ", graph n = " + std::to_string(n));
    }
    std::int64_t non_adjacent = static_cast<std::int64_t>(n) * (n - 1) / 2 - g.edge_count();
    if (plan.total_edges() != non_adjacent) {
        throw InvalidParameter("plan does not match graph: expected " +
                               std::to_string(non_adjacent) + " non-adjacent pairs, plan has " +
                               std::to_string(plan.total_edges()));
    }
    const PlannedPair* previous = nullptr;
    for (const auto& p : plan.pairs) {
        if (p.u >= p.v || g.has_edge(p.u, p.v)) {
            throw InvalidParameter("plan does not match graph: pair " + pair_text(p.u, p.v));
        }
        if (previous != nullptr &&
            std::make_pair(previous->u, previous->v) >= std::make_pair(p.u, p.v)) {
            throw InvalidParameter("plan does not match graph: unordered or duplicate pair " +
                                   pair_text(p.u, p.v));
        }
        previous = &p;
        if (p.path.size() < 3 || p.path.front() != p.u || p.path.back() != p.v ||
            p.swap_count != static_cast<std::int32_t>(p.path.size()) - 2) {
            throw InvalidParameter("plan does not match graph: malformed path for pair " +
                                   pair_text(p.u, p.v));
        }
        for (std::size_t i = 0; i + 1 < p.path.size(); ++i) {
            if (!g.has_edge(p.path[i], p.path[i + 1])) {
                throw InvalidParameter("plan does not match graph: path for pair " +
                                       pair_text(p.u, p.v) + " uses missing edge " +
                                       pair_text(p.path[i], p.path[i + 1]));
            }
        }
    }

    QuantumNetwork net(g);
    for (const auto& [a, b] : g.edges()) {
        net.counts_[net.index(a, b)] += plan.replicas;
    }
    for (const auto& p : plan.pairs) {
        net.counts_[net.index(p.u, p.v)] += plan.replicas;
    }
    return net;
}

namespace {

// Per-trial ledger: starts from the provisioned counts and burns one Bell
// pair per teleported message. Never shared across trials.
class LedgerConsumer : public ExchangeObserver {
public:
    LedgerConsumer(std::vector<std::int64_t> counts, std::int32_t n, std::int64_t* max_draw_slot,
                   std::int64_t* total_slot)
        : counts_(std::move(counts)),
          drawn_(counts_.size(), 0),
          n_(n),
          max_draw_slot_(max_draw_slot),
          total_slot_(total_slot) {}

    void on_exchange(std::int32_t u, std::int32_t v, std::int32_t message_count) override {
        const std::size_t idx = pair_index(u, v);
        if (counts_[idx] < message_count) {
            throw ResourceExhausted("quantum gossip exhausted pair " + pair_text(u, v) + ": " +
                                    std::to_string(message_count) + " teleport(s) requested, " +
                                    std::to_string(counts_[idx]) + " Bell pair(s) left");
        }
        counts_[idx] -= message_count;
        drawn_[idx] += message_count;
        *max_draw_slot_ = std::max(*max_draw_slot_, drawn_[idx]);
        *total_slot_ += message_count;
    }

private:
    std::size_t pair_index(std::int32_t u, std::int32_t v) const {
        const auto uu = static_cast<std::size_t>(std::min(u, v));
        const auto vv = static_cast<std::size_t>(std::max(u, v));
        const auto nn = static_cast<std::size_t>(n_);
        return uu * nn - uu * (uu + 1) / 2 + (vv - uu) - 1;
    }

    std::vector<std::int64_t> counts_;
    std::vector<std::int64_t> drawn_;
    std::int32_t n_;
    std::int64_t* max_draw_slot_;
    std::int64_t* total_slot_;
};

}  // namespace

TimeEstimate run_quantum_gossip(const Graph& g, GossipMode mode, double epsilon,
                                std::int64_t trials, std::uint64_t seed,
                                ResourceReport* resource_report, const EstimateOptions& options,
                                std::vector<std::int64_t>* out_completion_rounds) {
    const std::int32_t n = g.vertex_count();
    const UpdatePlan plan = plan_update(g, mode);
    const QuantumNetwork net = apply_update(g, plan);
    const std::vector<std::int64_t> provisioned = net.ledger_snapshot();

    const std::int64_t source_count =
        mode == GossipMode::kSinglePiece && !options.vertex_transitive ? n : 1;
    std::vector<std::int64_t> max_draw(static_cast<std::size_t>(source_count * trials), 0);
    std::vector<std::int64_t> totals(static_cast<std::size_t>(source_count * trials), 0);

    const ObserverFactory factory = [&](std::int32_t source, std::int64_t trial) {
        const std::size_t slot =
            static_cast<std::size_t>(source) * static_cast<std::size_t>(trials) +
            static_cast<std::size_t>(trial);
        return std::make_unique<LedgerConsumer>(provisioned, n, &max_draw[slot], &totals[slot]);
    };

    GossipConfig config(Graph::complete(n), TransitionMatrix::complete(n), mode, 0, seed);
    TimeEstimate estimate =
        estimate_time(config, epsilon, trials, options, &factory, out_completion_rounds);

    if (resource_report != nullptr) {
        resource_report->trials = source_count * trials;
        resource_report->max_pair_draw = *std::max_element(max_draw.begin(), max_draw.end());
        std::int64_t sum = 0;
        for (std::int64_t t : totals) sum += t;
        resource_report->total_teleports = sum;
    }
    return estimate;
}

}  // namespace qgossip
