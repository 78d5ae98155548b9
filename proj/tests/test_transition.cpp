#include <doctest.h>

#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "transition.hpp"

using qgossip::Graph;
using qgossip::InvalidParameter;
using qgossip::ParseError;
using qgossip::TransitionMatrix;

TEST_CASE("ring matrix values") {
    const auto P = TransitionMatrix::ring(8);
    CHECK(P.at(0, 0) == 0.5);
    CHECK(P.at(0, 1) == 0.25);
    CHECK(P.at(0, 7) == 0.25);
    CHECK(P.at(0, 2) == 0.0);
    for (int i = 0; i < 8; ++i) {
        double sum = 0.0;
        for (int j = 0; j < 8; ++j) sum += P.at(i, j);
        CHECK(sum == 1.0);  // exact dyadic values
        for (int j = 0; j < 8; ++j) CHECK(P.at(i, j) == P.at(j, i));
    }
    CHECK_FALSE(qgossip::validate(P).has_value());
    CHECK_THROWS_AS(TransitionMatrix::ring(2), InvalidParameter);
}

TEST_CASE("complete matrix values") {
    const auto P8 = TransitionMatrix::complete(8);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) CHECK(P8.at(i, j) == 0.125);
    }
    const auto P2 = TransitionMatrix::complete(2);
    CHECK(P2.at(0, 0) == 0.5);
    CHECK(P2.at(0, 1) == 0.5);
    CHECK_FALSE(qgossip::validate(P8).has_value());
    CHECK_THROWS_AS(TransitionMatrix::complete(1), InvalidParameter);
}

TEST_CASE("lazy uniform matrix") {
    SUBCASE("reproduces the ring matrix on rings") {
        for (int n = 3; n <= 32; ++n) {
            const auto lazy = TransitionMatrix::lazy_uniform(Graph::ring(n));
            const auto ring = TransitionMatrix::ring(n);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) CHECK(lazy.at(i, j) == ring.at(i, j));
            }
        }
    }

    SUBCASE("star graph self-loop mass") {
        const Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
        const auto P = TransitionMatrix::lazy_uniform(star);
        CHECK(P.at(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(P.at(1, 1) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
        CHECK(P.at(0, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
        CHECK_FALSE(qgossip::validate(P).has_value());
    }

    SUBCASE("complete graph gets 1/(2(n-1)) contacts") {
        const auto P = TransitionMatrix::lazy_uniform(Graph::complete(5));
        CHECK(P.at(0, 1) == 0.125);
        CHECK(P.at(0, 0) == 0.5);
    }

    SUBCASE("edgeless graph is rejected") {
        CHECK_THROWS_AS(TransitionMatrix::lazy_uniform(Graph(3, {})), InvalidParameter);
    }
}

TEST_CASE("builders are deterministic") {
    for (int n : {3, 4, 9}) {
        CHECK(TransitionMatrix::ring(n).entries() == TransitionMatrix::ring(n).entries());
        CHECK(TransitionMatrix::complete(n).entries() ==
              TransitionMatrix::complete(n).entries());
        const Graph g = Graph::random_connected(n, 0.5, 11);
        CHECK(TransitionMatrix::lazy_uniform(g).entries() ==
              TransitionMatrix::lazy_uniform(g).entries());
    }
}

TEST_CASE("validate diagnostics") {
    const Graph path3 = Graph::chain(3);

    SUBCASE("symmetry violation names the indices") {
        TransitionMatrix P(path3, {0.5, 0.5, 0.0,
                                   0.25, 0.5, 0.25,
                                   0.0, 0.25, 0.5});
        const auto diag = qgossip::validate(P);
        REQUIRE(diag.has_value());
        CHECK(diag->find("asymmetric") != std::string::npos);
        CHECK(diag->find("(0, 1)") != std::string::npos);
    }

    SUBCASE("off-support entry") {
        TransitionMatrix P(path3, {0.5, 0.25, 0.25,
                                   0.25, 0.5, 0.25,
                                   0.25, 0.25, 0.5});
        const auto diag = qgossip::validate(P);
        REQUIRE(diag.has_value());
        CHECK(diag->find("support") != std::string::npos);
        CHECK(diag->find("(0, 2)") != std::string::npos);
    }

    SUBCASE("row sum above one") {
        TransitionMatrix P(path3, {0.75, 0.5, 0.0,
                                   0.5, 0.5, 0.0,
                                   0.0, 0.0, 1.0});
        const auto diag = qgossip::validate(P);
        REQUIRE(diag.has_value());
        CHECK(diag->find("sums to") != std::string::npos);
    }

    SUBCASE("entry out of range") {
        TransitionMatrix P(path3, {-0.25, 0.5, 0.0,
                                   0.5, 0.5, 0.0,
                                   0.0, 0.0, 1.0});
        const auto diag = qgossip::validate(P);
        REQUIRE(diag.has_value());
        CHECK(diag->find("out of [0, 1]") != std::string::npos);
    }

    SUBCASE("tolerance covers float accumulation only") {
        TransitionMatrix P(path3, {0.5, 0.5 + 5e-13, 0.0,
                                   0.5, 0.25, 0.25,
                                   0.0, 0.25, 0.75});
        CHECK_FALSE(qgossip::validate(P).has_value());
    }
}

TEST_CASE("matrix JSON round trip and rejection") {
    const auto P = TransitionMatrix::ring(4);
    const auto text = qgossip::matrix_to_json(P);
    const auto loaded = qgossip::matrix_from_json(text);
    CHECK(loaded.size() == 4);
    CHECK(loaded.entries() == P.entries());
    CHECK(loaded.graph() == P.graph());

    CHECK_THROWS_AS(qgossip::matrix_from_json("nope"), ParseError);
    CHECK_THROWS_AS(qgossip::matrix_from_json("{\"n\": 2, \"rows\": [[0.5, 0.5]]}"), ParseError);
    // asymmetric -> rejected with the validate diagnostic
    CHECK_THROWS_WITH_AS(
        qgossip::matrix_from_json("{\"n\": 2, \"rows\": [[0.5, 0.5], [0.25, 0.5]]}"),
        doctest::Contains("asymmetric"), ParseError);
}
