#include "qgossip/qgossip.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "conductance.hpp"
#include "errors.hpp"
#include "gossip.hpp"
#include "graph.hpp"
#include "quantum.hpp"
#include "transition.hpp"

struct qg_graph {
    qgossip::Graph impl;
};
struct qg_matrix {
    qgossip::TransitionMatrix impl;
};
struct qg_report {
    qgossip::ConductanceReport impl;
};
struct qg_plan {
    qgossip::UpdatePlan impl;
};
struct qg_network {
    qgossip::QuantumNetwork impl;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

// Runs fn, translating exceptions into status codes + qg_last_error().
template <typename Fn>
qg_status guarded(Fn&& fn) {
    try {
        fn();
        return QG_OK;
    } catch (const qgossip::InvalidParameter& e) {
        set_error(e.what());
        return QG_ERROR_INVALID_PARAMETER;
    } catch (const qgossip::CapacityError& e) {
        set_error(e.what());
        return QG_ERROR_CAPACITY;
    } catch (const qgossip::DisconnectedGraph& e) {
        set_error(e.what());
        return QG_ERROR_DISCONNECTED;
    } catch (const qgossip::ResourceExhausted& e) {
        set_error(e.what());
        return QG_ERROR_RESOURCE_EXHAUSTED;
    } catch (const qgossip::ParseError& e) {
        set_error(e.what());
        return QG_ERROR_PARSE;
    } catch (const std::exception& e) {
        set_error(e.what());
        return QG_ERROR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return QG_ERROR_INTERNAL;
    }
}

qg_status require(bool ok, const char* message) {
    if (ok) return QG_OK;
    set_error(message);
    return QG_ERROR_INVALID_PARAMETER;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

qgossip::GossipMode to_mode(qg_mode mode) {
    return mode == QG_MODE_MULTI_PIECE ? qgossip::GossipMode::kMultiPiece
                                       : qgossip::GossipMode::kSinglePiece;
}

qgossip::TwoQubitState state_from_doubles(const double* amplitudes) {
    qgossip::TwoQubitState s;
    for (std::size_t i = 0; i < 4; ++i) {
        s.amplitudes[i] = {amplitudes[2 * i], amplitudes[2 * i + 1]};
    }
    return s;
}

std::int32_t effective_cap(std::int32_t cap) {
    return cap > 0 ? cap : qgossip::kEnumerationCap;
}

}  // namespace

extern "C" {

const char* qg_version(void) { return "1.0.0"; }

const char* qg_last_error(void) { return g_last_error.c_str(); }

void qg_string_free(char* s) { std::free(s); }

/* ---- graphs -------------------------------------------------------- */

qg_status qg_graph_ring(int32_t n, qg_graph** out) {
    if (auto st = require(out != nullptr, "out must not be NULL")) return st;
    return guarded([&] { *out = new qg_graph{qgossip::Graph::ring(n)}; });
}

qg_status qg_graph_complete(int32_t n, qg_graph** out) {
    if (auto st = require(out != nullptr, "out must not be NULL")) return st;
    return guarded([&] { *out = new qg_graph{qgossip::Graph::complete(n)}; });
}

qg_status qg_graph_chain(int32_t n, qg_graph** out) {
    if (auto st = require(out != nullptr, "out must not be NULL")) return st;
    return guarded([&] { *out = new qg_graph{qgossip::Graph::chain(n)}; });
}

qg_status qg_graph_random_connected(int32_t n, double p, uint64_t seed, qg_graph** out) {
    if (auto st = require(out != nullptr, "out must not be NULL")) return st;
    return guarded([&] { *out = new qg_graph{qgossip::Graph::random_connected(n, p, seed)}; });
}

void qg_graph_free(qg_graph* g) { delete g; }

int32_t qg_graph_n(const qg_graph* g) { return g == nullptr ? 0 : g->impl.vertex_count(); }

int64_t qg_graph_edge_count(const qg_graph* g) {
    return g == nullptr ? 0 : g->impl.edge_count();
}

int32_t qg_graph_is_connected(const qg_graph* g) {
    return g != nullptr && qgossip::is_connected(g->impl) ? 1 : 0;
}

qg_status qg_graph_distance(const qg_graph* g, int32_t u, int32_t v, int32_t* out) {
    if (auto st = require(g != nullptr && out != nullptr, "g and out must not be NULL")) return st;
    return guarded([&] {
        const std::int32_t n = g->impl.vertex_count();
        if (u < 0 || v < 0 || u >= n || v >= n) {
            throw qgossip::InvalidParameter("vertex out of range");
        }
        *out = qgossip::distance_matrix(g->impl).at(u, v);
    });
}

qg_status qg_graph_average_degree(const qg_graph* g, int64_t* num, int64_t* den) {
    if (auto st = require(g != nullptr && num != nullptr && den != nullptr,
                          "g, num and den must not be NULL"))
        return st;
    return guarded([&] {
        const auto r = qgossip::average_degree(g->impl);
        *num = r.numerator();
        *den = r.denominator();
    });
}

qg_status qg_graph_average_path_length(const qg_graph* g, int64_t* num, int64_t* den) {
    if (auto st = require(g != nullptr && num != nullptr && den != nullptr,
                          "g, num and den must not be NULL"))
        return st;
    return guarded([&] {
        const auto r = qgossip::average_path_length(g->impl);
        *num = r.numerator();
        *den = r.denominator();
    });
}

qg_status qg_graph_to_json(const qg_graph* g, char** out) {
    if (auto st = require(g != nullptr && out != nullptr, "g and out must not be NULL")) return st;
    return guarded([&] { *out = dup_string(qgossip::graph_to_json(g->impl)); });
}

qg_status qg_graph_from_json(const char* json, qg_graph** out) {
    if (auto st = require(json != nullptr && out != nullptr, "json and out must not be NULL"))
        return st;
    return guarded([&] { *out = new qg_graph{qgossip::graph_from_json(json)}; });
}

/* ---- transition matrices ------------------------------------------- */

qg_status qg_matrix_ring(int32_t n, qg_matrix** out) {
    if (auto st = require(out != nullptr, "out must not be NULL")) return st;
    return guarded([&] { *out = new qg_matrix{qgossip::TransitionMatrix::ring(n)}; });
}

qg_status qg_matrix_complete(int32_t n, qg_matrix** out) {
    if (auto st = require(out != nullptr, "out must not be NULL")) return st;
    return guarded([&] { *out = new qg_matrix{qgossip::TransitionMatrix::complete(n)}; });
}

qg_status qg_matrix_lazy_uniform(const qg_graph* g, qg_matrix** out) {
    if (auto st = require(g != nullptr && out != nullptr, "g and out must not be NULL")) return st;
    return guarded([&] { *out = new qg_matrix{qgossip::TransitionMatrix::lazy_uniform(g->impl)}; });
}

void qg_matrix_free(qg_matrix* m) { delete m; }

int32_t qg_matrix_n(const qg_matrix* m) { return m == nullptr ? 0 : m->impl.size(); }

double qg_matrix_at(const qg_matrix* m, int32_t i, int32_t j) {
    if (m == nullptr || i < 0 || j < 0 || i >= m->impl.size() || j >= m->impl.size()) return -1.0;
    return m->impl.at(i, j);
}

qg_status qg_matrix_validate(const qg_matrix* m, char** diagnostic) {
    if (auto st = require(m != nullptr && diagnostic != nullptr,
                          "m and diagnostic must not be NULL"))
        return st;
    return guarded([&] {
        const auto result = qgossip::validate(m->impl);
        *diagnostic = result.has_value() ? dup_string(*result) : nullptr;
    });
}

qg_status qg_matrix_to_json(const qg_matrix* m, char** out) {
    if (auto st = require(m != nullptr && out != nullptr, "m and out must not be NULL")) return st;
    return guarded([&] { *out = dup_string(qgossip::matrix_to_json(m->impl)); });
}

qg_status qg_matrix_from_json(const char* json, qg_matrix** out) {
    if (auto st = require(json != nullptr && out != nullptr, "json and out must not be NULL"))
        return st;
    return guarded([&] { *out = new qg_matrix{qgossip::matrix_from_json(json)}; });
}

/* ---- conductance ---------------------------------------------------- */

qg_status qg_conductance(const qg_matrix* m, int32_t cap, qg_report** out) {
    if (auto st = require(m != nullptr && out != nullptr, "m and out must not be NULL")) return st;
    return guarded(
        [&] { *out = new qg_report{qgossip::conductance(m->impl, effective_cap(cap))}; });
}

qg_status qg_k_conductance(const qg_matrix* m, int32_t k, int32_t cap, qg_report** out) {
    if (auto st = require(m != nullptr && out != nullptr, "m and out must not be NULL")) return st;
    return guarded(
        [&] { *out = new qg_report{qgossip::k_conductance(m->impl, k, effective_cap(cap))}; });
}

qg_status qg_circulant_arc_conductance(const qg_matrix* m, qg_report** out) {
    if (auto st = require(m != nullptr && out != nullptr, "m and out must not be NULL")) return st;
    return guarded([&] { *out = new qg_report{qgossip::circulant_arc_conductance(m->impl)}; });
}

void qg_report_free(qg_report* r) { delete r; }

double qg_report_value(const qg_report* r) { return r == nullptr ? -1.0 : r->impl.value; }

int32_t qg_report_k(const qg_report* r) { return r == nullptr ? -1 : r->impl.k; }

int32_t qg_report_argmin_size(const qg_report* r) {
    return r == nullptr ? 0 : static_cast<int32_t>(r->impl.argmin_set.size());
}

int32_t qg_report_argmin_get(const qg_report* r, int32_t idx) {
    if (r == nullptr || idx < 0 || idx >= static_cast<int32_t>(r->impl.argmin_set.size())) {
        return -1;
    }
    return r->impl.argmin_set[static_cast<std::size_t>(idx)];
}

qg_status qg_report_to_json(const qg_report* r, char** out) {
    if (auto st = require(r != nullptr && out != nullptr, "r and out must not be NULL")) return st;
    return guarded([&] { *out = dup_string(qgossip::report_to_json(r->impl)); });
}

qg_status qg_mean_conductance(const qg_matrix* m, int32_t cap, int32_t use_fast_paths,
                              double* out) {
    if (auto st = require(m != nullptr && out != nullptr, "m and out must not be NULL")) return st;
    return guarded([&] {
        *out = qgossip::mean_conductance_value(m->impl, effective_cap(cap), use_fast_paths != 0);
    });
}

/* ---- gossip simulation ---------------------------------------------- */

qg_status qg_estimate_time(const qg_graph* g, const qg_matrix* m, qg_mode mode, double epsilon,
                           int64_t trials, int64_t max_rounds, uint64_t seed,
                           int32_t vertex_transitive, int32_t threads, qg_estimate* out) {
    if (auto st = require(g != nullptr && m != nullptr && out != nullptr,
                          "g, m and out must not be NULL"))
        return st;
    return guarded([&] {
        qgossip::GossipConfig config(g->impl, m->impl, to_mode(mode), 0, seed);
        qgossip::EstimateOptions options;
        options.max_rounds = max_rounds;
        options.vertex_transitive = vertex_transitive != 0;
        options.threads = threads;
        const auto estimate = qgossip::estimate_time(config, epsilon, trials, options);
        *out = qg_estimate{estimate.epsilon, estimate.t_estimate, estimate.trials,
                           estimate.ci_low,  estimate.ci_high,    estimate.censored ? 1 : 0};
    });
}

qg_status qg_trace_json(const qg_graph* g, const qg_matrix* m, qg_mode mode, int32_t source,
                        uint64_t seed, int64_t max_rounds, char** out) {
    if (auto st = require(g != nullptr && m != nullptr && out != nullptr,
                          "g, m and out must not be NULL"))
        return st;
    return guarded([&] {
        qgossip::GossipConfig config(g->impl, m->impl, to_mode(mode), source, seed);
        const std::int64_t rounds =
            max_rounds > 0 ? max_rounds : qgossip::default_max_rounds(g->impl.vertex_count());
        const auto trace = qgossip::run_to_completion(config, rounds);
        *out = dup_string(qgossip::trace_to_json(trace, config, rounds));
    });
}

qg_status qg_bound_single(const qg_matrix* m, double epsilon, int32_t cap, int32_t use_fast_paths,
                          double* out) {
    if (auto st = require(m != nullptr && out != nullptr, "m and out must not be NULL")) return st;
    return guarded([&] {
        *out = qgossip::bound_single(m->impl, epsilon, effective_cap(cap), use_fast_paths != 0);
    });
}

qg_status qg_bound_multi(const qg_matrix* m, double epsilon, int32_t cap, int32_t use_fast_paths,
                         double* out) {
    if (auto st = require(m != nullptr && out != nullptr, "m and out must not be NULL")) return st;
    return guarded([&] {
        *out = qgossip::bound_multi(m->impl, epsilon, effective_cap(cap), use_fast_paths != 0);
    });
}

/* ---- quantum layer --------------------------------------------------- */

qg_status qg_concurrence(const double* amplitudes, double* out) {
    if (auto st = require(amplitudes != nullptr && out != nullptr,
                          "amplitudes and out must not be NULL"))
        return st;
    return guarded([&] { *out = qgossip::concurrence(state_from_doubles(amplitudes)); });
}

qg_status qg_chain_concurrence(const double* amplitudes, int32_t k, double* out) {
    if (auto st = require(amplitudes != nullptr && out != nullptr,
                          "amplitudes and out must not be NULL"))
        return st;
    return guarded([&] {
        if (k < 1) throw qgossip::InvalidParameter("swap chain needs k >= 1");
        std::vector<qgossip::TwoQubitState> states;
        states.reserve(static_cast<std::size_t>(k));
        for (int32_t i = 0; i < k; ++i) states.push_back(state_from_doubles(amplitudes + 8 * i));
        *out = qgossip::chain_concurrence(states);
    });
}

qg_status qg_plan_update(const qg_graph* g, qg_mode mode, qg_plan** out) {
    if (auto st = require(g != nullptr && out != nullptr, "g and out must not be NULL")) return st;
    return guarded([&] { *out = new qg_plan{qgossip::plan_update(g->impl, to_mode(mode))}; });
}

void qg_plan_free(qg_plan* p) { delete p; }

int32_t qg_plan_replicas(const qg_plan* p) { return p == nullptr ? 0 : p->impl.replicas; }

int64_t qg_plan_total_edges(const qg_plan* p) { return p == nullptr ? 0 : p->impl.total_edges(); }

int64_t qg_plan_total_swaps(const qg_plan* p) { return p == nullptr ? 0 : p->impl.total_swaps(); }

int64_t qg_plan_total_swaps_with_replicas(const qg_plan* p) {
    return p == nullptr ? 0 : p->impl.total_swaps_with_replicas();
}

qg_status qg_plan_to_json(const qg_plan* p, char** out) {
    if (auto st = require(p != nullptr && out != nullptr, "p and out must not be NULL")) return st;
    return guarded([&] { *out = dup_string(qgossip::plan_to_json(p->impl)); });
}

qg_status qg_apply_update(const qg_graph* g, const qg_plan* p, qg_network** out) {
    if (auto st = require(g != nullptr && p != nullptr && out != nullptr,
                          "g, p and out must not be NULL"))
        return st;
    return guarded([&] { *out = new qg_network{qgossip::apply_update(g->impl, p->impl)}; });
}

void qg_network_free(qg_network* net) { delete net; }

int64_t qg_network_ledger(const qg_network* net, int32_t u, int32_t v) {
    if (net == nullptr) return -1;
    try {
        return net->impl.ledger(u, v);
    } catch (const std::exception& e) {
        set_error(e.what());
        return -1;
    }
}

int64_t qg_network_total_ledger(const qg_network* net) {
    return net == nullptr ? 0 : net->impl.total_ledger();
}

int32_t qg_network_contact_complete(const qg_network* net) {
    return net != nullptr && net->impl.contact_complete() ? 1 : 0;
}

qg_status qg_network_teleport(qg_network* net, int32_t u, int32_t v) {
    if (auto st = require(net != nullptr, "net must not be NULL")) return st;
    return guarded([&] { net->impl.teleport(u, v); });
}

qg_status qg_quantum_gossip(const qg_graph* g, qg_mode mode, double epsilon, int64_t trials,
                            uint64_t seed, int64_t max_rounds, int32_t vertex_transitive,
                            int32_t threads, qg_estimate* out, qg_resource_report* resources) {
    if (auto st = require(g != nullptr && out != nullptr, "g and out must not be NULL")) return st;
    return guarded([&] {
        qgossip::EstimateOptions options;
        options.max_rounds = max_rounds;
        options.vertex_transitive = vertex_transitive != 0;
        options.threads = threads;
        qgossip::ResourceReport report;
        const auto estimate = qgossip::run_quantum_gossip(g->impl, to_mode(mode), epsilon, trials,
                                                          seed, &report, options);
        *out = qg_estimate{estimate.epsilon, estimate.t_estimate, estimate.trials,
                           estimate.ci_low,  estimate.ci_high,    estimate.censored ? 1 : 0};
        if (resources != nullptr) {
            *resources = qg_resource_report{report.trials, report.max_pair_draw,
                                            report.total_teleports};
        }
    });
}

}  // extern "C"
