#include "gossip.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include <nlohmann/json.hpp>

#include "errors.hpp"

namespace qgossip {

GossipConfig::GossipConfig(Graph graph_in, TransitionMatrix matrix_in, GossipMode mode_in,
                           std::int32_t source_in, std::uint64_t seed_in)
    : graph(std::move(graph_in)),
      matrix(std::move(matrix_in)),
      mode(mode_in),
      source(source_in),
      seed(seed_in) {
    if (!(matrix.graph() == graph)) {
        throw InvalidParameter("gossip config: matrix is defined over a different graph");
    }
    if (mode == GossipMode::kSinglePiece && (source < 0 || source >= graph.vertex_count())) {
        throw InvalidParameter("gossip config: source " + std::to_string(source) +
                               " out of range for n = " + std::to_string(graph.vertex_count()));
    }
}

ContactSampler::ContactSampler(const TransitionMatrix& P) : n_(P.size()) {
    require_valid(P);
    offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (std::int32_t i = 0; i < n_; ++i) {
        double running = 0.0;
        for (std::int32_t j : P.graph().neighbors(i)) {
            const double p = P.at(i, j);
            if (p <= 0.0) continue;
            running += p;
            targets_.push_back(j);
            cumulative_.push_back(running);
        }
        offsets_[static_cast<std::size_t>(i) + 1] = static_cast<std::int32_t>(targets_.size());
    }
}

void ContactSampler::draw(SplitMix64& rng, std::vector<std::int32_t>& contacts) const {
    contacts.resize(static_cast<std::size_t>(n_));
    for (std::int32_t i = 0; i < n_; ++i) {
        const double u = rng.next_unit();
        const std::int32_t lo = offsets_[static_cast<std::size_t>(i)];
        const std::int32_t hi = offsets_[static_cast<std::size_t>(i) + 1];
        if (lo == hi || u >= cumulative_[static_cast<std::size_t>(hi) - 1]) {
            contacts[static_cast<std::size_t>(i)] = -1;
            continue;
        }
        const auto first = cumulative_.begin() + lo;
        const auto last = cumulative_.begin() + hi;
        const auto it = std::upper_bound(first, last, u);
        contacts[static_cast<std::size_t>(i)] =
            targets_[static_cast<std::size_t>(lo + (it - first))];
    }
}

void collect_contact_pairs(const std::vector<std::int32_t>& contacts,
                           std::vector<ContactPair>& pairs) {
    pairs.clear();
    for (std::int32_t i = 0; i < static_cast<std::int32_t>(contacts.size()); ++i) {
        const std::int32_t j = contacts[static_cast<std::size_t>(i)];
        if (j < 0) continue;
        pairs.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

SingleState::SingleState(std::int32_t n, std::int32_t source)
    : informed(static_cast<std::size_t>(n), 0) {
    informed[static_cast<std::size_t>(source)] = 1;
    informed_count = 1;
}

MultiState::MultiState(std::int32_t n_in)
    : n(n_in), words((n_in + 63) / 64),
      bits(static_cast<std::size_t>(n_in) * static_cast<std::size_t>((n_in + 63) / 64), 0),
      have(static_cast<std::size_t>(n_in), 1) {
    for (std::int32_t v = 0; v < n; ++v) {
        bits[static_cast<std::size_t>(v) * words + static_cast<std::size_t>(v / 64)] |=
            std::uint64_t{1} << (v % 64);
    }
}

bool MultiState::complete() const {
    return std::all_of(have.begin(), have.end(),
                       [this](std::int32_t c) { return c == n; });
}

bool MultiState::has_message(std::int32_t v, std::int32_t m) const {
    return (bits[static_cast<std::size_t>(v) * words + static_cast<std::size_t>(m / 64)] >>
            (m % 64)) & 1u;
}

std::vector<std::int32_t> MultiState::messages_of(std::int32_t v) const {
    std::vector<std::int32_t> out;
    out.reserve(static_cast<std::size_t>(have[static_cast<std::size_t>(v)]));
    for (std::int32_t m = 0; m < n; ++m) {
        if (has_message(v, m)) out.push_back(m);
    }
    return out;
}

std::int32_t apply_contacts_single(const std::vector<ContactPair>& pairs, SingleState& state,
                                   ExchangeObserver* observer) {
    // Read the pre-round state for every pair, only then flip bits.
    std::vector<std::int32_t> pending;
    for (const auto& [a, b] : pairs) {
        const bool ia = state.informed[static_cast<std::size_t>(a)] != 0;
        const bool ib = state.informed[static_cast<std::size_t>(b)] != 0;
        if (ia == ib) continue;
        if (observer != nullptr) observer->on_exchange(a, b, 1);
        pending.push_back(ia ? b : a);
    }
    std::int32_t newly = 0;
    for (std::int32_t v : pending) {
        auto& flag = state.informed[static_cast<std::size_t>(v)];
        if (flag == 0) {
            flag = 1;
            ++state.informed_count;
            ++newly;
        }
    }
    return newly;
}

void apply_contacts_multi(const std::vector<ContactPair>& pairs, MultiState& state,
                          ExchangeObserver* observer) {
    if (pairs.empty()) return;
    const std::vector<std::uint64_t> pre = state.bits;
    const std::size_t words = static_cast<std::size_t>(state.words);
    std::vector<std::int32_t> touched;
    for (const auto& [a, b] : pairs) {
        const std::uint64_t* pre_a = pre.data() + static_cast<std::size_t>(a) * words;
        const std::uint64_t* pre_b = pre.data() + static_cast<std::size_t>(b) * words;
        std::int32_t moved = 0;
        for (std::size_t w = 0; w < words; ++w) {
            moved += std::popcount(pre_b[w] & ~pre_a[w]);
            moved += std::popcount(pre_a[w] & ~pre_b[w]);
        }
        if (moved == 0) continue;
        if (observer != nullptr) observer->on_exchange(a, b, moved);
        std::uint64_t* row_a = state.bits.data() + static_cast<std::size_t>(a) * words;
        std::uint64_t* row_b = state.bits.data() + static_cast<std::size_t>(b) * words;
        for (std::size_t w = 0; w < words; ++w) {
            row_a[w] |= pre_b[w];
            row_b[w] |= pre_a[w];
        }
        touched.push_back(a);
        touched.push_back(b);
    }
    for (std::int32_t v : touched) {
        const std::uint64_t* row = state.bits.data() + static_cast<std::size_t>(v) * words;
        std::int32_t count = 0;
        for (std::size_t w = 0; w < words; ++w) count += std::popcount(row[w]);
        state.have[static_cast<std::size_t>(v)] = count;
    }
}

std::int64_t default_max_rounds(std::int32_t n) {
    const std::int64_t log2n =
        n <= 1 ? 0 : static_cast<std::int64_t>(std::bit_width(static_cast<std::uint32_t>(n - 1)));
    return 64 * static_cast<std::int64_t>(n) * log2n + 64;
}

namespace {

constexpr std::int64_t censored_sentinel(std::int64_t max_rounds) { return max_rounds + 1; }

// One full run without trace recording; returns the completion round or the
// censored sentinel. Shared by the traced runner only through the step
// primitives above, so both paths consume randomness identically.
std::int64_t run_trial(const ContactSampler& sampler, GossipMode mode, std::int32_t n,
                       std::int32_t source, std::uint64_t stream_seed, std::int64_t max_rounds,
                       ExchangeObserver* observer) {
    SplitMix64 rng(stream_seed);
    std::vector<std::int32_t> contacts;
    std::vector<ContactPair> pairs;
    if (mode == GossipMode::kSinglePiece) {
        SingleState state(n, source);
        if (state.complete()) return 0;
        for (std::int64_t t = 1; t <= max_rounds; ++t) {
            sampler.draw(rng, contacts);
            collect_contact_pairs(contacts, pairs);
            apply_contacts_single(pairs, state, observer);
            if (state.complete()) return t;
        }
    } else {
        MultiState state(n);
        if (state.complete()) return 0;
        for (std::int64_t t = 1; t <= max_rounds; ++t) {
            sampler.draw(rng, contacts);
            collect_contact_pairs(contacts, pairs);
            apply_contacts_multi(pairs, state, observer);
            if (state.complete()) return t;
        }
    }
    return censored_sentinel(max_rounds);
}

}  // namespace

DisseminationTrace run_to_completion(const GossipConfig& config, std::int64_t max_rounds,
                                     ExchangeObserver* observer) {
    if (max_rounds < 1) throw InvalidParameter("max_rounds must be at least 1");
    const std::int32_t n = config.graph.vertex_count();
    const ContactSampler sampler(config.matrix);
    SplitMix64 rng(config.seed);
    std::vector<std::int32_t> contacts;
    std::vector<ContactPair> pairs;

    DisseminationTrace trace;
    trace.mode = config.mode;
    if (config.mode == GossipMode::kSinglePiece) {
        SingleState state(n, config.source);
        auto snapshot = [&]() {
            std::vector<std::int32_t> set;
            for (std::int32_t v = 0; v < n; ++v) {
                if (state.informed[static_cast<std::size_t>(v)]) set.push_back(v);
            }
            trace.informed.push_back(std::move(set));
        };
        snapshot();
        if (state.complete()) {
            trace.completion_round = 0;
            return trace;
        }
        for (std::int64_t t = 1; t <= max_rounds; ++t) {
            sampler.draw(rng, contacts);
            collect_contact_pairs(contacts, pairs);
            apply_contacts_single(pairs, state, observer);
            snapshot();
            if (state.complete()) {
                trace.completion_round = t;
                break;
            }
        }
    } else {
        MultiState state(n);
        auto snapshot = [&]() {
            std::vector<std::vector<std::int32_t>> sets;
            sets.reserve(static_cast<std::size_t>(n));
            for (std::int32_t v = 0; v < n; ++v) sets.push_back(state.messages_of(v));
            trace.messages.push_back(std::move(sets));
        };
        snapshot();
        if (state.complete()) {
            trace.completion_round = 0;
            return trace;
        }
        for (std::int64_t t = 1; t <= max_rounds; ++t) {
            sampler.draw(rng, contacts);
            collect_contact_pairs(contacts, pairs);
            apply_contacts_multi(pairs, state, observer);
            snapshot();
            if (state.complete()) {
                trace.completion_round = t;
                break;
            }
        }
    }
    return trace;
}

std::string trace_to_json(const DisseminationTrace& trace, const GossipConfig& config,
                          std::int64_t max_rounds) {
    nlohmann::ordered_json j;
    j["mode"] = trace.mode == GossipMode::kSinglePiece ? "single" : "multi";
    j["n"] = config.graph.vertex_count();
    if (trace.mode == GossipMode::kSinglePiece) j["source"] = config.source;
    j["seed"] = config.seed;
    j["max_rounds"] = max_rounds;
    if (trace.completion_round.has_value()) {
        j["completion_round"] = *trace.completion_round;
    } else {
        j["completion_round"] = nullptr;
    }
    if (trace.mode == GossipMode::kSinglePiece) {
        j["rounds"] = trace.informed;
    } else {
        j["rounds"] = trace.messages;
    }
    return j.dump();
}

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QGOSSIP_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void run_source_trials(const ContactSampler& sampler, GossipMode mode, std::int32_t n,
                       std::int32_t source, std::uint64_t seed, std::int64_t trials,
                       std::int64_t max_rounds, int threads,
                       const ObserverFactory* observer_factory,
                       std::vector<std::int64_t>& rounds_out) {
    rounds_out.resize(static_cast<std::size_t>(trials));
    const std::uint64_t source_slot =
        mode == GossipMode::kSinglePiece ? static_cast<std::uint64_t>(source) + 1 : 0;
    const std::uint64_t source_seed = derive_seed(seed, source_slot);

    auto run_range = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t k = lo; k < hi; ++k) {
            std::unique_ptr<ExchangeObserver> observer;
            if (observer_factory != nullptr) {
                observer = (*observer_factory)(source, k);
            }
            rounds_out[static_cast<std::size_t>(k)] =
                run_trial(sampler, mode, n, source,
                          derive_seed(source_seed, static_cast<std::uint64_t>(k)), max_rounds,
                          observer.get());
        }
    };

    const int workers = std::min<std::int64_t>(threads, trials) > 0
                            ? static_cast<int>(std::min<std::int64_t>(threads, trials))
                            : 1;
    if (workers <= 1) {
        run_range(0, trials);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    const std::int64_t chunk = (trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = static_cast<std::int64_t>(w) * chunk;
        const std::int64_t hi = std::min<std::int64_t>(trials, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi, w]() {
            try {
                run_range(lo, hi);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
}

struct QuantileSummary {
    std::int64_t t = 0;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

// Smallest t with #{trials later than t} <= epsilon * trials, plus a 95%
// order-statistic confidence interval (normal approximation of the quantile
// rank distribution).
QuantileSummary summarize_quantile(std::vector<std::int64_t> rounds, double epsilon) {
    std::sort(rounds.begin(), rounds.end());
    const std::int64_t m = static_cast<std::int64_t>(rounds.size());
    const auto allowed =
        static_cast<std::int64_t>(std::floor(epsilon * static_cast<double>(m)));
    const std::int64_t rank = m - allowed;  // 1-indexed

    const double q = 1.0 - epsilon;
    const double mu = q * static_cast<double>(m);
    const double sd = std::sqrt(static_cast<double>(m) * q * epsilon);
    constexpr double kZ95 = 1.959963985;
    const auto lo_rank = std::clamp<std::int64_t>(
        static_cast<std::int64_t>(std::floor(mu - kZ95 * sd)), 1, m);
    const auto hi_rank = std::clamp<std::int64_t>(
        static_cast<std::int64_t>(std::ceil(mu + kZ95 * sd)), 1, m);

    QuantileSummary s;
    s.t = rounds[static_cast<std::size_t>(rank - 1)];
    s.lo = rounds[static_cast<std::size_t>(lo_rank - 1)];
    s.hi = rounds[static_cast<std::size_t>(hi_rank - 1)];
    return s;
}

}  // namespace

TimeEstimate estimate_time(const GossipConfig& config, double epsilon, std::int64_t trials,
                           const EstimateOptions& options,
                           const ObserverFactory* observer_factory,
                           std::vector<std::int64_t>* out_completion_rounds) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw InvalidParameter("epsilon must lie strictly between 0 and 1");
    }
    if (trials < 100) {
        throw InvalidParameter("need at least 100 trials, got " + std::to_string(trials));
    }
    const std::int32_t n = config.graph.vertex_count();
    const std::int64_t max_rounds =
        options.max_rounds > 0 ? options.max_rounds : default_max_rounds(n);
    const int threads = resolve_threads(options.threads);
    const ContactSampler sampler(config.matrix);

    std::vector<std::int32_t> sources;
    if (config.mode == GossipMode::kSinglePiece) {
        if (options.vertex_transitive) {
            sources.push_back(config.source);
        } else {
            for (std::int32_t v = 0; v < n; ++v) sources.push_back(v);
        }
    } else {
        sources.push_back(0);  // multi-piece has no source dimension
    }

    TimeEstimate best;
    best.epsilon = epsilon;
    best.trials = trials;
    bool censored_any = false;
    bool first = true;
    std::vector<std::int64_t> rounds;
    std::vector<std::int64_t> best_rounds;
    for (std::int32_t source : sources) {
        run_source_trials(sampler, config.mode, n, source, config.seed, trials, max_rounds,
                          threads, observer_factory, rounds);
        const std::int64_t sentinel = censored_sentinel(max_rounds);
        censored_any = censored_any ||
                       std::any_of(rounds.begin(), rounds.end(),
                                   [sentinel](std::int64_t r) { return r >= sentinel; });
        const QuantileSummary s = summarize_quantile(rounds, epsilon);
        if (first || s.t > best.t_estimate) {
            best.t_estimate = s.t;
            best.ci_low = s.lo;
            best.ci_high = s.hi;
            best_rounds = rounds;
            first = false;
        }
    }
    best.censored = censored_any;
    const std::int64_t sentinel = censored_sentinel(max_rounds);
    if (best.t_estimate >= sentinel) best.t_estimate = max_rounds;
    if (best.ci_low >= sentinel) best.ci_low = max_rounds;
    if (best.ci_high >= sentinel) best.ci_high = max_rounds;
    if (out_completion_rounds != nullptr) *out_completion_rounds = std::move(best_rounds);
    return best;
}

double bound_single(const TransitionMatrix& P, double epsilon, std::int32_t cap,
                    bool allow_fast_paths) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw InvalidParameter("epsilon must lie strictly between 0 and 1");
    }
    const double phi = conductance_value(P, cap, allow_fast_paths);
    if (!(phi > 0.0)) {
        throw DisconnectedGraph("single-piece bound undefined: zero conductance");
    }
    const double n = static_cast<double>(P.size());
    return (std::log(n) + std::log(1.0 / epsilon)) / phi;
}

double bound_multi(const TransitionMatrix& P, double epsilon, std::int32_t cap,
                   bool allow_fast_paths) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw InvalidParameter("epsilon must lie strictly between 0 and 1");
    }
    const double mean = mean_conductance_value(P, cap, allow_fast_paths);
    return mean * std::log(1.0 / epsilon) / static_cast<double>(P.size());
}

}  // namespace qgossip
