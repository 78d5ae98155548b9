#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graph.hpp"

namespace qgossip {

// Symmetric contact-probability matrix tied to a graph. P[i][j] for i != j is
// the probability that vertex i contacts neighbor j in a round; the diagonal
// plus any residual row mass means "contact nobody".
class TransitionMatrix {
public:
    TransitionMatrix(Graph graph, std::vector<double> entries);  // row-major n*n

    static TransitionMatrix ring(std::int32_t n);      // diag 1/2, ring edges 1/4
    static TransitionMatrix complete(std::int32_t n);  // every entry 1/n
    // Generic rule for arbitrary graphs: 1/(2*d_max) on each edge, the rest on
    // the diagonal. Reproduces ring() on ring graphs.
    static TransitionMatrix lazy_uniform(const Graph& g);

    std::int32_t size() const { return n_; }
    const Graph& graph() const { return graph_; }
    double at(std::int32_t i, std::int32_t j) const {
        return entries_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                        static_cast<std::size_t>(j)];
    }
    const std::vector<double>& entries() const { return entries_; }

private:
    Graph graph_;
    std::int32_t n_ = 0;
    std::vector<double> entries_;
};

inline constexpr double kMatrixTolerance = 1e-12;

// Checks entry range, symmetry, row sums and edge support, in that order,
// within absolute tolerance kMatrixTolerance. Returns the first violation as
// a diagnostic naming the invariant and indices, or nullopt when valid.
std::optional<std::string> validate(const TransitionMatrix& P);

// Throws InvalidParameter carrying the diagnostic if validate() fails.
void require_valid(const TransitionMatrix& P);

// {"n": <int>, "rows": [[...], ...]}. The loader reconstructs the support
// graph from the positive off-diagonal entries, then validates.
std::string matrix_to_json(const TransitionMatrix& P);
TransitionMatrix matrix_from_json(const std::string& text);

}  // namespace qgossip
