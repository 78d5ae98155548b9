#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "gossip.hpp"
#include "graph.hpp"
#include "rng.hpp"
#include "transition.hpp"

using qgossip::ContactPair;
using qgossip::ContactSampler;
using qgossip::GossipConfig;
using qgossip::GossipMode;
using qgossip::Graph;
using qgossip::InvalidParameter;
using qgossip::MultiState;
using qgossip::SingleState;
using qgossip::SplitMix64;
using qgossip::TransitionMatrix;

namespace {

struct CountingObserver : qgossip::ExchangeObserver {
    std::vector<std::tuple<std::int32_t, std::int32_t, std::int32_t>> calls;
    void on_exchange(std::int32_t u, std::int32_t v, std::int32_t count) override {
        calls.emplace_back(u, v, count);
    }
};

GossipConfig ring_config(int n, std::uint64_t seed, GossipMode mode = GossipMode::kSinglePiece) {
    return GossipConfig(Graph::ring(n), TransitionMatrix::ring(n), mode, 0, seed);
}

GossipConfig complete_config(int n, std::uint64_t seed,
                             GossipMode mode = GossipMode::kSinglePiece) {
    return GossipConfig(Graph::complete(n), TransitionMatrix::complete(n), mode, 0, seed);
}

}  // namespace

TEST_CASE("config invariants") {
    CHECK_THROWS_AS(GossipConfig(Graph::ring(8), TransitionMatrix::ring(6),
                                 GossipMode::kSinglePiece, 0, 1),
                    InvalidParameter);
    CHECK_THROWS_AS(GossipConfig(Graph::ring(8), TransitionMatrix::ring(8),
                                 GossipMode::kSinglePiece, 8, 1),
                    InvalidParameter);
}

TEST_CASE("contact sampler matches the row probabilities") {
    const ContactSampler sampler(TransitionMatrix::ring(8));
    SplitMix64 rng(99);
    std::vector<std::int32_t> contacts;
    int left = 0, right = 0, none = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        sampler.draw(rng, contacts);
        if (contacts[0] == 7) ++left;
        else if (contacts[0] == 1) ++right;
        else if (contacts[0] == -1) ++none;
        else FAIL("contact outside the ring neighborhood");
    }
    CHECK(left / double(draws) == doctest::Approx(0.25).epsilon(0.05));
    CHECK(right / double(draws) == doctest::Approx(0.25).epsilon(0.05));
    CHECK(none / double(draws) == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("contact pair collection deduplicates") {
    std::vector<ContactPair> pairs;
    qgossip::collect_contact_pairs({1, 0, -1, 2}, pairs);  // 0<->1 both ways, 3->2
    CHECK(pairs == std::vector<ContactPair>{{0, 1}, {2, 3}});
}

TEST_CASE("single-piece round semantics") {
    SUBCASE("no contacts leaves the state unchanged") {
        SingleState st(4, 0);
        CHECK(qgossip::apply_contacts_single({}, st) == 0);
        CHECK(st.informed_count == 1);
    }

    SUBCASE("push and pull both inform against the pre-round state") {
        SingleState st(3, 0);
        CountingObserver obs;
        // 0-1 informative, 1-2 is not informative yet (1 uninformed pre-round)
        const std::int32_t newly =
            qgossip::apply_contacts_single({{0, 1}, {1, 2}}, st, &obs);
        CHECK(newly == 1);
        CHECK(st.informed[1] == 1);
        CHECK(st.informed[2] == 0);
        REQUIRE(obs.calls.size() == 1);
        CHECK(obs.calls[0] == std::tuple<std::int32_t, std::int32_t, std::int32_t>{0, 1, 1});
    }

    SUBCASE("several vertices may pull from one informed vertex") {
        SingleState st(4, 0);
        const std::int32_t newly = qgossip::apply_contacts_single({{0, 1}, {0, 2}, {0, 3}}, st);
        CHECK(newly == 3);
        CHECK(st.complete());
    }
}

TEST_CASE("two-vertex infection probability is 3/4") {
    // Analytic oracle: infection happens unless both vertices draw their
    // self mass, so per-round probability is 1 - (1/2)^2.
    const ContactSampler sampler(TransitionMatrix::complete(2));
    std::vector<std::int32_t> contacts;
    std::vector<ContactPair> pairs;
    int infected = 0;
    const int trials = 40000;
    for (int k = 0; k < trials; ++k) {
        SplitMix64 rng(qgossip::derive_seed(7, static_cast<std::uint64_t>(k)));
        SingleState st(2, 0);
        sampler.draw(rng, contacts);
        qgossip::collect_contact_pairs(contacts, pairs);
        qgossip::apply_contacts_single(pairs, st);
        if (st.complete()) ++infected;
    }
    CHECK(infected / double(trials) == doctest::Approx(0.75).epsilon(0.02));
}

TEST_CASE("multi-piece exchange unions both ways") {
    MultiState st(3);
    CountingObserver obs;
    qgossip::apply_contacts_multi({{0, 1}}, st, &obs);
    CHECK(st.messages_of(0) == std::vector<std::int32_t>{0, 1});
    CHECK(st.messages_of(1) == std::vector<std::int32_t>{0, 1});
    CHECK(st.messages_of(2) == std::vector<std::int32_t>{2});
    REQUIRE(obs.calls.size() == 1);
    CHECK(std::get<2>(obs.calls[0]) == 2);  // one message each way

    // non-informative once both hold the same set
    qgossip::apply_contacts_multi({{0, 1}}, st, &obs);
    CHECK(obs.calls.size() == 1);
}

TEST_CASE("multi-piece exchanges are evaluated against the pre-round state") {
    MultiState st(3);
    qgossip::apply_contacts_multi({{0, 1}, {1, 2}}, st);
    // message 0 must not ride through vertex 1 to vertex 2 within one round
    CHECK(st.messages_of(0) == std::vector<std::int32_t>{0, 1});
    CHECK(st.messages_of(1) == std::vector<std::int32_t>{0, 1, 2});
    CHECK(st.messages_of(2) == std::vector<std::int32_t>{1, 2});
}

TEST_CASE("degenerate single-vertex network completes at round zero") {
    const Graph g(1, {});
    const TransitionMatrix P(g, {1.0});
    const GossipConfig config(g, P, GossipMode::kSinglePiece, 0, 1);
    const auto trace = qgossip::run_to_completion(config, 10);
    CHECK(trace.completion_round == 0);
    CHECK(trace.informed.size() == 1);
}

TEST_CASE("traces are deterministic in the seed") {
    const auto a = qgossip::run_to_completion(ring_config(8, 42), 1000);
    const auto b = qgossip::run_to_completion(ring_config(8, 42), 1000);
    CHECK(a.completion_round == b.completion_round);
    CHECK(a.informed == b.informed);

    bool any_different = false;
    for (std::uint64_t seed = 43; seed < 48; ++seed) {
        const auto c = qgossip::run_to_completion(ring_config(8, seed), 1000);
        if (c.informed != a.informed) any_different = true;
    }
    CHECK(any_different);
}

TEST_CASE("informed and message sets grow monotonically") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const auto trace = qgossip::run_to_completion(ring_config(8, seed), 1000);
        REQUIRE(trace.completion_round.has_value());
        for (std::size_t t = 1; t < trace.informed.size(); ++t) {
            CHECK(std::includes(trace.informed[t].begin(), trace.informed[t].end(),
                                trace.informed[t - 1].begin(), trace.informed[t - 1].end()));
        }

        const auto multi = qgossip::run_to_completion(
            ring_config(5, seed, GossipMode::kMultiPiece), 5000);
        REQUIRE(multi.completion_round.has_value());
        for (std::size_t t = 1; t < multi.messages.size(); ++t) {
            for (int v = 0; v < 5; ++v) {
                CHECK(std::includes(multi.messages[t][v].begin(), multi.messages[t][v].end(),
                                    multi.messages[t - 1][v].begin(),
                                    multi.messages[t - 1][v].end()));
            }
        }
        // completion means every vertex holds every message
        const auto& last = multi.messages.back();
        for (int v = 0; v < 5; ++v) CHECK(last[v].size() == 5);
    }
}

TEST_CASE("ring dissemination needs at least ceil((n-1)/2) rounds") {
    // The informed set of a ring is an arc that can extend by at most one
    // vertex per end per round.
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto trace = qgossip::run_to_completion(ring_config(8, seed), 2000);
        REQUIRE(trace.completion_round.has_value());
        CHECK(*trace.completion_round >= 4);
    }
}

TEST_CASE("max rounds exhaustion censors instead of throwing") {
    const auto trace = qgossip::run_to_completion(ring_config(8, 5), 2);
    CHECK_FALSE(trace.completion_round.has_value());
    CHECK(trace.informed.size() == 3);  // t = 0, 1, 2
}

TEST_CASE("two-vertex epsilon dissemination time is 2") {
    // P(not done after t) = (1/4)^t, so the 0.9-quantile sits at t = 2.
    const auto estimate =
        qgossip::estimate_time(complete_config(2, 1), 0.1, 10000);
    CHECK(estimate.t_estimate == 2);
    CHECK_FALSE(estimate.censored);
    CHECK(estimate.trials == 10000);
    CHECK(estimate.ci_low <= 2);
    CHECK(estimate.ci_high >= 2);
}

TEST_CASE("estimate satisfies the sample quantile definition") {
    qgossip::EstimateOptions options;
    options.vertex_transitive = true;
    std::vector<std::int64_t> rounds;
    const double epsilon = 0.1;
    const auto estimate = qgossip::estimate_time(complete_config(8, 21), epsilon, 500, options,
                                                 nullptr, &rounds);
    REQUIRE(rounds.size() == 500);
    const auto later = [&](std::int64_t t) {
        return std::count_if(rounds.begin(), rounds.end(),
                             [t](std::int64_t r) { return r > t; });
    };
    const double allowed = epsilon * 500.0;
    CHECK(static_cast<double>(later(estimate.t_estimate)) <= allowed);
    CHECK(static_cast<double>(later(estimate.t_estimate - 1)) > allowed);
}

TEST_CASE("parallel trial execution reproduces the sequential estimate") {
    qgossip::EstimateOptions seq;
    seq.threads = 1;
    qgossip::EstimateOptions par;
    par.threads = 3;
    std::vector<std::int64_t> rounds_seq, rounds_par;
    const auto a =
        qgossip::estimate_time(ring_config(8, 77), 0.1, 400, seq, nullptr, &rounds_seq);
    const auto b =
        qgossip::estimate_time(ring_config(8, 77), 0.1, 400, par, nullptr, &rounds_par);
    CHECK(a.t_estimate == b.t_estimate);
    CHECK(a.ci_low == b.ci_low);
    CHECK(a.ci_high == b.ci_high);
    CHECK(rounds_seq == rounds_par);
}

TEST_CASE("vertex-transitive flag matches the full sweep on a symmetric graph") {
    qgossip::EstimateOptions fast;
    fast.vertex_transitive = true;
    const auto swept = qgossip::estimate_time(complete_config(4, 9), 0.1, 2000);
    const auto single = qgossip::estimate_time(complete_config(4, 9), 0.1, 2000, fast);
    CHECK(std::abs(swept.t_estimate - single.t_estimate) <= 1);
}

TEST_CASE("estimate is non-increasing in epsilon") {
    qgossip::EstimateOptions options;
    options.vertex_transitive = true;
    std::int64_t prev = std::numeric_limits<std::int64_t>::max();
    for (double epsilon : {0.05, 0.1, 0.3, 0.5}) {
        const auto estimate =
            qgossip::estimate_time(ring_config(8, 5), epsilon, 600, options);
        CHECK(estimate.t_estimate <= prev);
        prev = estimate.t_estimate;
    }
}

TEST_CASE("estimate input validation") {
    CHECK_THROWS_AS(qgossip::estimate_time(complete_config(2, 1), 0.1, 99), InvalidParameter);
    CHECK_THROWS_AS(qgossip::estimate_time(complete_config(2, 1), 0.0, 100), InvalidParameter);
    CHECK_THROWS_AS(qgossip::estimate_time(complete_config(2, 1), 1.0, 100), InvalidParameter);
}

TEST_CASE("right-censoring is flagged") {
    qgossip::EstimateOptions options;
    options.vertex_transitive = true;
    options.max_rounds = 1;
    const auto estimate = qgossip::estimate_time(ring_config(8, 3), 0.1, 100, options);
    CHECK(estimate.censored);
    CHECK(estimate.t_estimate == 1);
}

TEST_CASE("conductance bounds") {
    const auto complete8 = TransitionMatrix::complete(8);
    const auto ring8 = TransitionMatrix::ring(8);
    const auto ring4 = TransitionMatrix::ring(4);

    CHECK(qgossip::bound_single(complete8, 0.1) ==
          doctest::Approx((std::log(8.0) + std::log(10.0)) / 0.5).epsilon(1e-13));
    CHECK(qgossip::bound_single(complete8, 0.1) == doctest::Approx(8.764053269347762).epsilon(1e-9));
    CHECK(qgossip::bound_single(ring8, 0.1) ==
          doctest::Approx((std::log(8.0) + std::log(10.0)) * 8.0).epsilon(1e-13));
    CHECK(qgossip::bound_single(ring8, 0.1) == doctest::Approx(35.05621307739105).epsilon(1e-9));

    CHECK(qgossip::bound_multi(ring4, 0.1) ==
          doctest::Approx(4.0 * std::log(10.0)).epsilon(1e-13));
    CHECK(qgossip::bound_multi(ring4, 0.1) == doctest::Approx(9.210340371976184).epsilon(1e-9));

    // single-piece bound ratio ring/complete doubles with n
    const double ratio8 = qgossip::bound_single(ring8, 0.1) / qgossip::bound_single(complete8, 0.1);
    const double ratio16 = qgossip::bound_single(TransitionMatrix::ring(16), 0.1) /
                           qgossip::bound_single(TransitionMatrix::complete(16), 0.1);
    CHECK(ratio16 / ratio8 == doctest::Approx(2.0).epsilon(1e-9));

    // multi-piece bound grows like n^2 over even rings
    const double b8 = qgossip::bound_multi(TransitionMatrix::ring(8), 0.1);
    const double b16 = qgossip::bound_multi(TransitionMatrix::ring(16), 0.1);
    const double b32 = qgossip::bound_multi(TransitionMatrix::ring(32), 0.1);
    CHECK(b16 / b8 == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(b32 / b16 == doctest::Approx(4.0).epsilon(1e-9));

    // epsilon -> 1 sends both bounds to zero
    CHECK(qgossip::bound_multi(ring4, 1.0 - 1e-12) < 1e-9);
    CHECK_THROWS_AS(qgossip::bound_single(complete8, 0.0), InvalidParameter);
}

TEST_CASE("default round budget") {
    CHECK(qgossip::default_max_rounds(1) == 64);
    CHECK(qgossip::default_max_rounds(2) == 192);
    CHECK(qgossip::default_max_rounds(8) == 1600);
}

TEST_CASE("trace JSON shape") {
    const auto config = ring_config(6, 11);
    const auto trace = qgossip::run_to_completion(config, 500);
    const auto parsed = nlohmann::json::parse(qgossip::trace_to_json(trace, config, 500));
    CHECK(parsed["mode"] == "single");
    CHECK(parsed["n"] == 6);
    CHECK(parsed["source"] == 0);
    CHECK(parsed["rounds"][0] == nlohmann::json::array({0}));
    CHECK(parsed["completion_round"].get<std::int64_t>() ==
          *trace.completion_round);
}
