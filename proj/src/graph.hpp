#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace qgossip {

using Rational = boost::rational<std::int64_t>;

/// Undirected simple graph on dense vertices 0..n-1. Immutable after
/// construction; the constructor rejects self-loops, duplicate edges and
/// out-of-range endpoints with a diagnostic naming the offending pair.
class Graph {
public:
    using Edge = std::pair<std::int32_t, std::int32_t>;  // stored with first < second

    Graph(std::int32_t n, std::vector<Edge> edges);

    static Graph ring(std::int32_t n);      // n >= 3, edges {(i, (i+1) mod n)}
    static Graph complete(std::int32_t n);  // n >= 2
    static Graph chain(std::int32_t n);     // n >= 2, edges {(i, i+1)}

    // Uniform random spanning tree (Pruefer decode) plus each remaining pair
    // independently with probability p. Connected by construction and
    // deterministic for a given (n, p, seed).
    static Graph random_connected(std::int32_t n, double p, std::uint64_t seed);

    std::int32_t vertex_count() const { return n_; }
    std::int64_t edge_count() const { return static_cast<std::int64_t>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::int32_t>& neighbors(std::int32_t v) const;
    std::int32_t degree(std::int32_t v) const;
    std::int32_t max_degree() const;
    bool has_edge(std::int32_t u, std::int32_t v) const;

    bool operator==(const Graph& other) const {
        return n_ == other.n_ && edges_ == other.edges_;
    }

private:
    std::int32_t n_ = 0;
    std::vector<Edge> edges_;                     // sorted ascending, unique
    std::vector<std::vector<std::int32_t>> adj_;  // sorted neighbor lists
};

struct DistanceMatrix {
    static constexpr std::int32_t kUnreachable = -1;

    std::int32_t n = 0;
    std::vector<std::int32_t> hops;  // row-major n*n

    std::int32_t at(std::int32_t i, std::int32_t j) const {
        return hops[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
    }
};

// Exact unweighted shortest-path hops, BFS from every vertex.
DistanceMatrix distance_matrix(const Graph& g);

bool is_connected(const Graph& g);

// 2E/V as an exact rational.
Rational average_degree(const Graph& g);

// Mean hop distance over ordered vertex pairs; throws DisconnectedGraph when
// some pair is unreachable.
Rational average_path_length(const Graph& g);

// {"n": <int>, "edges": [[i, j], ...]} with i < j, edges sorted ascending.
std::string graph_to_json(const Graph& g);
Graph graph_from_json(const std::string& text);

}  // namespace qgossip
