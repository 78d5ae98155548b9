#include "graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace qgossip {

namespace {

std::string pair_text(std::int32_t a, std::int32_t b) {
    return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

}  // namespace

Graph::Graph(std::int32_t n, std::vector<Edge> edges) : n_(n) {
    if (n < 1) {
        throw InvalidParameter("graph needs a positive vertex count, got " + std::to_string(n));
    }
    for (auto& [a, b] : edges) {
        if (a == b) {
            throw InvalidParameter("self-loop " + pair_text(a, b));
        }
        if (a < 0 || b < 0 || a >= n || b >= n) {
            throw InvalidParameter("edge endpoint out of range " + pair_text(a, b) +
                                   " for n=" + std::to_string(n));
        }
        if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    auto dup = std::adjacent_find(edges.begin(), edges.end());
    if (dup != edges.end()) {
        throw InvalidParameter("duplicate edge " + pair_text(dup->first, dup->second));
    }
    edges_ = std::move(edges);

    adj_.resize(static_cast<std::size_t>(n_));
    for (const auto& [a, b] : edges_) {
        adj_[static_cast<std::size_t>(a)].push_back(b);
        adj_[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& list : adj_) std::sort(list.begin(), list.end());
}

Graph Graph::ring(std::int32_t n) {
    if (n < 3) throw InvalidParameter("ring graph needs n >= 3, got " + std::to_string(n));
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n));
    for (std::int32_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return Graph(n, std::move(edges));
}

Graph Graph::complete(std::int32_t n) {
    if (n < 2) throw InvalidParameter("complete graph needs n >= 2, got " + std::to_string(n));
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (std::int32_t i = 0; i < n; ++i)
        for (std::int32_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return Graph(n, std::move(edges));
}

Graph Graph::chain(std::int32_t n) {
    if (n < 2) throw InvalidParameter("chain graph needs n >= 2, got " + std::to_string(n));
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) - 1);
    for (std::int32_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph(n, std::move(edges));
}

Graph Graph::random_connected(std::int32_t n, double p, std::uint64_t seed) {
    if (n < 2) throw InvalidParameter("random connected graph needs n >= 2, got " + std::to_string(n));
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidParameter("edge probability must lie in [0, 1], got " + std::to_string(p));
    }
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(n)));

    // Uniform labeled tree via a random Pruefer sequence.
    std::set<Edge> tree;
    if (n == 2) {
        tree.insert({0, 1});
    } else {
        std::vector<std::int32_t> pruefer(static_cast<std::size_t>(n) - 2);
        for (auto& s : pruefer) s = static_cast<std::int32_t>(rng.next() % static_cast<std::uint64_t>(n));
        std::vector<std::int32_t> degree(static_cast<std::size_t>(n), 1);
        for (auto s : pruefer) ++degree[static_cast<std::size_t>(s)];
        std::set<std::int32_t> leaves;
        for (std::int32_t v = 0; v < n; ++v)
            if (degree[static_cast<std::size_t>(v)] == 1) leaves.insert(v);
        for (auto s : pruefer) {
            std::int32_t leaf = *leaves.begin();
            leaves.erase(leaves.begin());
            tree.insert({std::min(leaf, s), std::max(leaf, s)});
            if (--degree[static_cast<std::size_t>(s)] == 1) leaves.insert(s);
        }
        auto it = leaves.begin();
        std::int32_t a = *it++;
        std::int32_t b = *it;
        tree.insert({a, b});
    }

    std::vector<Edge> edges(tree.begin(), tree.end());
    for (std::int32_t i = 0; i < n; ++i) {
        for (std::int32_t j = i + 1; j < n; ++j) {
            if (tree.count({i, j})) continue;
            if (rng.next_unit() < p) edges.emplace_back(i, j);
        }
    }
    return Graph(n, std::move(edges));
}

const std::vector<std::int32_t>& Graph::neighbors(std::int32_t v) const {
    if (v < 0 || v >= n_) throw InvalidParameter("vertex " + std::to_string(v) + " out of range");
    return adj_[static_cast<std::size_t>(v)];
}

std::int32_t Graph::degree(std::int32_t v) const {
    return static_cast<std::int32_t>(neighbors(v).size());
}

std::int32_t Graph::max_degree() const {
    std::int32_t best = 0;
    for (const auto& list : adj_) best = std::max(best, static_cast<std::int32_t>(list.size()));
    return best;
}

bool Graph::has_edge(std::int32_t u, std::int32_t v) const {
    if (u == v || u < 0 || v < 0 || u >= n_ || v >= n_) return false;
    const auto& list = adj_[static_cast<std::size_t>(u)];
    return std::binary_search(list.begin(), list.end(), v);
}

namespace {

void bfs_fill(const Graph& g, std::int32_t source, std::int32_t* row) {
    const std::int32_t n = g.vertex_count();
    std::fill(row, row + n, DistanceMatrix::kUnreachable);
    std::deque<std::int32_t> queue{source};
    row[source] = 0;
    while (!queue.empty()) {
        std::int32_t v = queue.front();
        queue.pop_front();
        for (std::int32_t w : g.neighbors(v)) {
            if (row[w] == DistanceMatrix::kUnreachable) {
                row[w] = row[v] + 1;
                queue.push_back(w);
            }
        }
    }
}

}  // namespace

DistanceMatrix distance_matrix(const Graph& g) {
    const std::int32_t n = g.vertex_count();
    DistanceMatrix result;
    result.n = n;
    result.hops.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (std::int32_t v = 0; v < n; ++v) {
        bfs_fill(g, v, result.hops.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(n));
    }
    return result;
}

bool is_connected(const Graph& g) {
    const std::int32_t n = g.vertex_count();
    std::vector<std::int32_t> row(static_cast<std::size_t>(n));
    bfs_fill(g, 0, row.data());
    return std::none_of(row.begin(), row.end(),
                        [](std::int32_t d) { return d == DistanceMatrix::kUnreachable; });
}

Rational average_degree(const Graph& g) {
    return Rational(2 * g.edge_count(), g.vertex_count());
}

Rational average_path_length(const Graph& g) {
    const std::int32_t n = g.vertex_count();
    if (n < 2) throw InvalidParameter("average path length needs at least two vertices");
    DistanceMatrix d = distance_matrix(g);
    std::int64_t total = 0;
    for (std::int32_t i = 0; i < n; ++i) {
        for (std::int32_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (d.at(i, j) == DistanceMatrix::kUnreachable) {
                throw DisconnectedGraph("average path length undefined: no path between " +
                                        std::to_string(i) + " and " + std::to_string(j));
            }
            total += d.at(i, j);
        }
    }
    return Rational(total, static_cast<std::int64_t>(n) * (n - 1));
}

std::string graph_to_json(const Graph& g) {
    nlohmann::ordered_json j;
    j["n"] = g.vertex_count();
    auto edges = nlohmann::ordered_json::array();
    for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
    j["edges"] = std::move(edges);
    return j.dump();
}

Graph graph_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("graph JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("edges") ||
        !j["n"].is_number_integer() || !j["edges"].is_array()) {
        throw ParseError("graph JSON must be {\"n\": <int>, \"edges\": [[i, j], ...]}");
    }
    const std::int32_t n = j["n"].get<std::int32_t>();
    std::vector<Graph::Edge> edges;
    for (const auto& item : j["edges"]) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_number_integer() ||
            !item[1].is_number_integer()) {
            throw ParseError("graph JSON edge entries must be [i, j] integer pairs");
        }
        const std::int32_t a = item[0].get<std::int32_t>();
        const std::int32_t b = item[1].get<std::int32_t>();
        if (a >= b) {
            throw ParseError("graph JSON edge " + pair_text(a, b) + " must satisfy i < j");
        }
        edges.emplace_back(a, b);
    }
    try {
        return Graph(n, std::move(edges));
    } catch (const InvalidParameter& e) {
        throw ParseError(std::string("graph JSON: ") + e.what());
    }
}

}  // namespace qgossip
