#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "conductance.hpp"
#include "graph.hpp"
#include "rng.hpp"
#include "transition.hpp"

namespace qgossip {

enum class GossipMode : std::int32_t {
    kSinglePiece = 0,
    kMultiPiece = 1,
};

struct GossipConfig {
    GossipConfig(Graph graph, TransitionMatrix matrix, GossipMode mode, std::int32_t source,
                 std::uint64_t seed);

    Graph graph;
    TransitionMatrix matrix;
    GossipMode mode;
    std::int32_t source;  // single-piece only
    std::uint64_t seed;
};

// Per-round contact draws for one matrix: vertex i contacts neighbor j with
// probability P[i][j] and nobody with the residual (diagonal included).
class ContactSampler {
public:
    explicit ContactSampler(const TransitionMatrix& P);

    std::int32_t size() const { return n_; }
    // contacts[i] = contacted neighbor or -1; consumes exactly one draw per vertex.
    void draw(SplitMix64& rng, std::vector<std::int32_t>& contacts) const;

private:
    std::int32_t n_ = 0;
    std::vector<std::int32_t> offsets_;
    std::vector<std::int32_t> targets_;
    std::vector<double> cumulative_;
};

using ContactPair = std::pair<std::int32_t, std::int32_t>;

// Unordered contact pairs of one round, deduplicated and ascending. Two draws
// meeting on the same pair are a single exchange.
void collect_contact_pairs(const std::vector<std::int32_t>& contacts,
                           std::vector<ContactPair>& pairs);

// Notified once per informative exchange (information actually moved across
// the pair); message_count is the number of items that changed hands.
class ExchangeObserver {
public:
    virtual ~ExchangeObserver() = default;
    virtual void on_exchange(std::int32_t u, std::int32_t v, std::int32_t message_count) = 0;
};

struct SingleState {
    SingleState(std::int32_t n, std::int32_t source);

    std::vector<std::uint8_t> informed;
    std::int32_t informed_count = 0;

    bool complete() const {
        return informed_count == static_cast<std::int32_t>(informed.size());
    }
};

struct MultiState {
    explicit MultiState(std::int32_t n);  // vertex v starts with message v

    std::int32_t n = 0;
    std::int32_t words = 0;
    std::vector<std::uint64_t> bits;  // row-major n*words bitsets
    std::vector<std::int32_t> have;   // per-vertex message count

    bool complete() const;
    bool has_message(std::int32_t v, std::int32_t m) const;
    std::vector<std::int32_t> messages_of(std::int32_t v) const;
};

// One synchronous round evaluated against the pre-round state: a pair with
// exactly one informed endpoint informs the other (push-pull). Returns the
// number of newly informed vertices.
std::int32_t apply_contacts_single(const std::vector<ContactPair>& pairs, SingleState& state,
                                   ExchangeObserver* observer = nullptr);

// One synchronous round: contacted pairs exchange all messages they do not
// share, both ways, against the pre-round state.
void apply_contacts_multi(const std::vector<ContactPair>& pairs, MultiState& state,
                          ExchangeObserver* observer = nullptr);

struct DisseminationTrace {
    GossipMode mode = GossipMode::kSinglePiece;
    // informed[t] = sorted informed set at time t (single-piece, t = 0 first)
    std::vector<std::vector<std::int32_t>> informed;
    // messages[t][v] = sorted message ids held by v at time t (multi-piece)
    std::vector<std::vector<std::vector<std::int32_t>>> messages;
    std::optional<std::int64_t> completion_round;
};

// 64 * n * ceil(log2 n) + 64, comfortably past the slowest supported family.
std::int64_t default_max_rounds(std::int32_t n);

// Runs rounds until completion or max_rounds (then completion_round is empty).
// The rng stream is seeded with config.seed directly.
DisseminationTrace run_to_completion(const GossipConfig& config, std::int64_t max_rounds,
                                     ExchangeObserver* observer = nullptr);

std::string trace_to_json(const DisseminationTrace& trace, const GossipConfig& config,
                          std::int64_t max_rounds);

struct TimeEstimate {
    double epsilon = 0.0;
    std::int64_t t_estimate = 0;
    std::int64_t trials = 0;
    std::int64_t ci_low = 0;   // 95% order-statistic confidence bounds
    std::int64_t ci_high = 0;
    bool censored = false;     // some trial hit max_rounds
};

struct EstimateOptions {
    std::int64_t max_rounds = 0;     // 0 -> default_max_rounds(n)
    bool vertex_transitive = false;  // single-piece: skip the sup over sources
    int threads = 0;                 // 0 -> QGOSSIP_THREADS env var, else hardware
};

using ObserverFactory =
    std::function<std::unique_ptr<ExchangeObserver>(std::int32_t source, std::int64_t trial)>;

// Monte Carlo estimate of the epsilon-dissemination time: the smallest t such
// that at most an epsilon fraction of trials complete later than t. Trial k of
// source s draws from derive_seed(derive_seed(seed, s + 1), k), so parallel
// execution reproduces the sequential result exactly. Single-piece mode sweeps
// every source and reports the maximum unless options.vertex_transitive.
// out_completion_rounds receives the per-trial rounds of the source attaining
// the maximum, in trial order; censored trials appear as max_rounds + 1.
TimeEstimate estimate_time(const GossipConfig& config, double epsilon, std::int64_t trials,
                           const EstimateOptions& options = {},
                           const ObserverFactory* observer_factory = nullptr,
                           std::vector<std::int64_t>* out_completion_rounds = nullptr);

// (log n + log(1/epsilon)) / phi(P), constant 1, natural logs. A yardstick for
// the conductance-based round bound, not a certified upper bound.
double bound_single(const TransitionMatrix& P, double epsilon,
                    std::int32_t cap = kEnumerationCap, bool allow_fast_paths = true);

// mean_conductance(P) * log(1/epsilon) / n, same caveat.
double bound_multi(const TransitionMatrix& P, double epsilon,
                   std::int32_t cap = kEnumerationCap, bool allow_fast_paths = true);

}  // namespace qgossip
