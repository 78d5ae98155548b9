#include "transition.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "errors.hpp"

namespace qgossip {

TransitionMatrix::TransitionMatrix(Graph graph, std::vector<double> entries)
    : graph_(std::move(graph)), n_(graph_.vertex_count()), entries_(std::move(entries)) {
    const auto expected = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
    if (entries_.size() != expected) {
        throw InvalidParameter("transition matrix needs " + std::to_string(expected) +
                               " entries, got " + std::to_string(entries_.size()));
    }
}

TransitionMatrix TransitionMatrix::ring(std::int32_t n) {
    Graph g = Graph::ring(n);
    std::vector<double> entries(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (std::int32_t i = 0; i < n; ++i) {
        entries[static_cast<std::size_t>(i) * n + i] = 0.5;
        for (std::int32_t j : g.neighbors(i)) {
            entries[static_cast<std::size_t>(i) * n + j] = 0.25;
        }
    }
    return TransitionMatrix(std::move(g), std::move(entries));
}

TransitionMatrix TransitionMatrix::complete(std::int32_t n) {
    Graph g = Graph::complete(n);
    std::vector<double> entries(static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
                                1.0 / static_cast<double>(n));
    return TransitionMatrix(std::move(g), std::move(entries));
}

TransitionMatrix TransitionMatrix::lazy_uniform(const Graph& g) {
    if (g.edge_count() == 0) {
        throw InvalidParameter("lazy uniform matrix needs a graph with at least one edge");
    }
    const std::int32_t n = g.vertex_count();
    const double contact = 1.0 / (2.0 * static_cast<double>(g.max_degree()));
    std::vector<double> entries(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (std::int32_t i = 0; i < n; ++i) {
        for (std::int32_t j : g.neighbors(i)) {
            entries[static_cast<std::size_t>(i) * n + j] = contact;
        }
        entries[static_cast<std::size_t>(i) * n + i] =
            1.0 - static_cast<double>(g.degree(i)) * contact;
    }
    return TransitionMatrix(g, std::move(entries));
}

std::optional<std::string> validate(const TransitionMatrix& P) {
    const std::int32_t n = P.size();
    for (std::int32_t i = 0; i < n; ++i) {
        for (std::int32_t j = 0; j < n; ++j) {
            const double v = P.at(i, j);
            if (!(v >= -kMatrixTolerance && v <= 1.0 + kMatrixTolerance)) {
                return "entry out of [0, 1] at (" + std::to_string(i) + ", " + std::to_string(j) +
                       "): " + std::to_string(v);
            }
        }
    }
    for (std::int32_t i = 0; i < n; ++i) {
        for (std::int32_t j = i + 1; j < n; ++j) {
            if (std::abs(P.at(i, j) - P.at(j, i)) > kMatrixTolerance) {
                return "asymmetric at (" + std::to_string(i) + ", " + std::to_string(j) + "): " +
                       std::to_string(P.at(i, j)) + " vs " + std::to_string(P.at(j, i));
            }
        }
    }
    for (std::int32_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::int32_t j = 0; j < n; ++j) sum += P.at(i, j);
        if (sum > 1.0 + kMatrixTolerance) {
            return "row " + std::to_string(i) + " sums to " + std::to_string(sum) + " > 1";
        }
    }
    for (std::int32_t i = 0; i < n; ++i) {
        for (std::int32_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (P.at(i, j) > kMatrixTolerance && !P.graph().has_edge(i, j)) {
                return "positive entry off the edge support at (" + std::to_string(i) + ", " +
                       std::to_string(j) + ")";
            }
        }
    }
    return std::nullopt;
}

void require_valid(const TransitionMatrix& P) {
    if (auto diagnostic = validate(P)) {
        throw InvalidParameter("invalid transition matrix: " + *diagnostic);
    }
}

std::string matrix_to_json(const TransitionMatrix& P) {
    nlohmann::ordered_json j;
    j["n"] = P.size();
    auto rows = nlohmann::ordered_json::array();
    for (std::int32_t i = 0; i < P.size(); ++i) {
        auto row = nlohmann::ordered_json::array();
        for (std::int32_t k = 0; k < P.size(); ++k) row.push_back(P.at(i, k));
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j.dump();
}

TransitionMatrix matrix_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("matrix JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("rows") ||
        !j["n"].is_number_integer() || !j["rows"].is_array()) {
        throw ParseError("matrix JSON must be {\"n\": <int>, \"rows\": [[...], ...]}");
    }
    const std::int32_t n = j["n"].get<std::int32_t>();
    if (n < 1 || static_cast<std::size_t>(n) != j["rows"].size()) {
        throw ParseError("matrix JSON row count does not match n");
    }
    std::vector<double> entries;
    entries.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (const auto& row : j["rows"]) {
        if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
            throw ParseError("matrix JSON rows must each hold n numbers");
        }
        for (const auto& cell : row) {
            if (!cell.is_number()) throw ParseError("matrix JSON entries must be numbers");
            entries.push_back(cell.get<double>());
        }
    }

    std::vector<Graph::Edge> support;
    for (std::int32_t i = 0; i < n; ++i) {
        for (std::int32_t k = i + 1; k < n; ++k) {
            const double a = entries[static_cast<std::size_t>(i) * n + k];
            const double b = entries[static_cast<std::size_t>(k) * n + i];
            if (a > kMatrixTolerance || b > kMatrixTolerance) support.emplace_back(i, k);
        }
    }
    TransitionMatrix P(Graph(n, std::move(support)), std::move(entries));
    if (auto diagnostic = validate(P)) {
        throw ParseError("matrix JSON rejected: " + *diagnostic);
    }
    return P;
}

}  // namespace qgossip
