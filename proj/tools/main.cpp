// qgossip command-line front end. Everything goes through the C API of the
// shared library; this translation unit owns only argument parsing and
// CSV/JSON plumbing.

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qgossip/qgossip.h"

namespace {

struct CliError {
    int exit_code;
    std::string message;
};

void check(qg_status status) {
    if (status != QG_OK) {
        throw CliError{static_cast<int>(status), qg_last_error()};
    }
}

struct GraphHandle {
    qg_graph* get = nullptr;
    ~GraphHandle() { qg_graph_free(get); }
};

struct MatrixHandle {
    qg_matrix* get = nullptr;
    ~MatrixHandle() { qg_matrix_free(get); }
};

struct ReportHandle {
    qg_report* get = nullptr;
    ~ReportHandle() { qg_report_free(get); }
};

struct PlanHandle {
    qg_plan* get = nullptr;
    ~PlanHandle() { qg_plan_free(get); }
};

std::string take_string(char* s) {
    std::string out(s == nullptr ? "" : s);
    qg_string_free(s);
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string timestamp_line() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[64];
    std::strftime(buf, sizeof buf, "# generated %Y-%m-%dT%H:%M:%SZ\n", &tm);
    return buf;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError{1, "cannot open output file " + path};
    out << content;
}

struct FamilySpec {
    std::string family;
    double p = 0.5;
    std::uint64_t seed = 1;
};

void build_graph(const FamilySpec& family, std::int32_t n, GraphHandle& graph) {
    if (family.family == "ring") {
        check(qg_graph_ring(n, &graph.get));
    } else if (family.family == "complete") {
        check(qg_graph_complete(n, &graph.get));
    } else if (family.family == "chain") {
        check(qg_graph_chain(n, &graph.get));
    } else if (family.family == "random") {
        check(qg_graph_random_connected(n, family.p, family.seed, &graph.get));
    } else {
        throw CliError{1, "unknown graph family: " + family.family};
    }
}

std::string default_matrix_for(const std::string& family) {
    if (family == "ring") return "ring";
    if (family == "complete") return "complete";
    return "lazy";
}

void build_matrix(const std::string& kind, std::int32_t n, const qg_graph* graph,
                  MatrixHandle& matrix) {
    if (kind == "ring") {
        check(qg_matrix_ring(n, &matrix.get));
    } else if (kind == "complete") {
        check(qg_matrix_complete(n, &matrix.get));
    } else if (kind == "lazy") {
        check(qg_matrix_lazy_uniform(graph, &matrix.get));
    } else {
        throw CliError{1, "unknown matrix builder: " + kind};
    }
}

std::vector<std::int32_t> parse_sizes(const std::string& list) {
    std::vector<std::int32_t> sizes;
    std::stringstream stream(list);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item.empty()) continue;
        try {
            sizes.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw CliError{1, "bad size in --n list: " + item};
        }
    }
    if (sizes.empty()) throw CliError{1, "--n needs at least one size"};
    std::sort(sizes.begin(), sizes.end());
    return sizes;
}

// ---- subcommands ------------------------------------------------------

int cmd_gen(const FamilySpec& family, std::int32_t n, const std::string& out) {
    GraphHandle graph;
    build_graph(family, n, graph);
    char* json = nullptr;
    check(qg_graph_to_json(graph.get, &json));
    write_output(out, take_string(json) + "\n");
    return 0;
}

int cmd_conductance(const FamilySpec& family, std::int32_t n, std::string matrix_kind,
                    bool circulant, const std::string& out) {
    GraphHandle graph;
    build_graph(family, n, graph);
    if (matrix_kind.empty()) matrix_kind = default_matrix_for(family.family);
    MatrixHandle matrix;
    build_matrix(matrix_kind, n, graph.get, matrix);

    ReportHandle report;
    if (circulant) {
        check(qg_circulant_arc_conductance(matrix.get, &report.get));
    } else {
        check(qg_conductance(matrix.get, 0, &report.get));
    }
    double mean = 0.0;
    check(qg_mean_conductance(matrix.get, 0, circulant ? 1 : 0, &mean));

    char* rjson = nullptr;
    check(qg_report_to_json(report.get, &rjson));
    auto j = nlohmann::ordered_json::parse(take_string(rjson));
    j["mean_conductance"] = mean;
    write_output(out, j.dump() + "\n");
    return 0;
}

struct SimulateArgs {
    FamilySpec family;
    std::string sizes;
    std::string matrix_kind;
    std::string mode = "single";
    double epsilon = 0.1;
    std::int64_t trials = 1000;
    bool vertex_transitive = false;
    bool emit_trace = false;
    bool no_timestamp = false;
    std::string out;
};

int cmd_simulate(const SimulateArgs& args) {
    const qg_mode mode = args.mode == "multi" ? QG_MODE_MULTI_PIECE : QG_MODE_SINGLE_PIECE;
    std::string csv;
    if (!args.no_timestamp) csv += timestamp_line();
    csv += "graph,n,matrix,mode,epsilon,trials,t_estimate,ci_low,ci_high,censored,"
           "bound_single,bound_multi\n";

    for (std::int32_t n : parse_sizes(args.sizes)) {
        GraphHandle graph;
        build_graph(args.family, n, graph);
        const std::string matrix_kind =
            args.matrix_kind.empty() ? default_matrix_for(args.family.family) : args.matrix_kind;
        MatrixHandle matrix;
        build_matrix(matrix_kind, n, graph.get, matrix);

        qg_estimate estimate;
        check(qg_estimate_time(graph.get, matrix.get, mode, args.epsilon, args.trials, 0,
                               args.family.seed, args.vertex_transitive ? 1 : 0, 0, &estimate));

        // bound columns stay empty when the matrix has no exact route
        std::string bound_one, bound_many;
        double value = 0.0;
        if (qg_bound_single(matrix.get, args.epsilon, 0, 1, &value) == QG_OK) {
            bound_one = format_double(value);
        }
        if (qg_bound_multi(matrix.get, args.epsilon, 0, 1, &value) == QG_OK) {
            bound_many = format_double(value);
        }

        csv += args.family.family + "," + std::to_string(n) + "," + matrix_kind + "," + args.mode +
               "," + format_double(args.epsilon) + "," + std::to_string(args.trials) + "," +
               std::to_string(estimate.t_estimate) + "," + std::to_string(estimate.ci_low) + "," +
               std::to_string(estimate.ci_high) + "," + std::to_string(estimate.censored) + "," +
               bound_one + "," + bound_many + "\n";

        if (args.emit_trace) {
            char* trace = nullptr;
            check(qg_trace_json(graph.get, matrix.get, mode, 0, args.family.seed, 0, &trace));
            std::filesystem::path dir =
                args.out.empty() ? std::filesystem::path(".")
                                 : std::filesystem::path(args.out).parent_path();
            if (dir.empty()) dir = ".";
            const auto name = args.family.family + "_n" + std::to_string(n) + "_" + args.mode +
                              ".trace.json";
            write_output((dir / name).string(), take_string(trace) + "\n");
        }
    }
    write_output(args.out, csv);
    return 0;
}

int cmd_plan(const FamilySpec& family, std::int32_t n, const std::string& mode,
             const std::string& out) {
    GraphHandle graph;
    build_graph(family, n, graph);
    PlanHandle plan;
    check(qg_plan_update(graph.get,
                         mode == "multi" ? QG_MODE_MULTI_PIECE : QG_MODE_SINGLE_PIECE,
                         &plan.get));
    char* json = nullptr;
    check(qg_plan_to_json(plan.get, &json));
    write_output(out, take_string(json) + "\n");

    std::cerr << "update plan for " << family.family << " n=" << n << " (" << mode << ")\n"
              << "  replicas              " << qg_plan_replicas(plan.get) << "\n"
              << "  non-local edges       " << qg_plan_total_edges(plan.get) << "\n"
              << "  swaps                 " << qg_plan_total_swaps(plan.get) << "\n"
              << "  swaps with replicas   " << qg_plan_total_swaps_with_replicas(plan.get)
              << "\n";
    return 0;
}

struct CompareArgs {
    std::string sizes;
    std::string mode = "single";
    double epsilon = 0.1;
    std::int64_t trials = 1000;
    std::uint64_t seed = 1;
    bool vertex_transitive = false;
    bool no_timestamp = false;
    std::string out;
};

int cmd_compare(const CompareArgs& args) {
    const qg_mode mode = args.mode == "multi" ? QG_MODE_MULTI_PIECE : QG_MODE_SINGLE_PIECE;
    std::string csv;
    if (!args.no_timestamp) csv += timestamp_line();
    csv += "n,t_ring,t_updated,ratio,plan_edges,plan_swaps,plan_swaps_with_replicas\n";

    for (std::int32_t n : parse_sizes(args.sizes)) {
        GraphHandle ring;
        check(qg_graph_ring(n, &ring.get));
        MatrixHandle ring_matrix;
        check(qg_matrix_ring(n, &ring_matrix.get));

        qg_estimate on_ring;
        check(qg_estimate_time(ring.get, ring_matrix.get, mode, args.epsilon, args.trials, 0,
                               args.seed, args.vertex_transitive ? 1 : 0, 0, &on_ring));

        qg_estimate updated;
        qg_resource_report resources;
        check(qg_quantum_gossip(ring.get, mode, args.epsilon, args.trials, args.seed, 0,
                                args.vertex_transitive ? 1 : 0, 0, &updated, &resources));

        PlanHandle plan;
        check(qg_plan_update(ring.get, mode, &plan.get));

        const double ratio = updated.t_estimate > 0
                                 ? static_cast<double>(on_ring.t_estimate) /
                                       static_cast<double>(updated.t_estimate)
                                 : 0.0;
        csv += std::to_string(n) + "," + std::to_string(on_ring.t_estimate) + "," +
               std::to_string(updated.t_estimate) + "," + format_double(ratio) + "," +
               std::to_string(qg_plan_total_edges(plan.get)) + "," +
               std::to_string(qg_plan_total_swaps(plan.get)) + "," +
               std::to_string(qg_plan_total_swaps_with_replicas(plan.get)) + "\n";
    }
    write_output(args.out, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gossip dissemination on classical and quantum networks"};
    app.require_subcommand(1);

    // gen ----------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a graph as JSON");
    FamilySpec gen_spec;
    std::int32_t gen_n = 0;
    std::string gen_out;
    gen->add_option("--family", gen_spec.family, "ring|complete|chain|random")->required();
    gen->add_option("--n", gen_n, "vertex count")->required();
    gen->add_option("--p", gen_spec.p, "extra-edge probability (random family)");
    gen->add_option("--seed", gen_spec.seed, "random seed");
    gen->add_option("--out", gen_out, "output file (default stdout)");
    bool gen_nots = false;
    gen->add_flag("--no-timestamp", gen_nots, "accepted for symmetry; JSON output carries no timestamp");

    // conductance ----------------------------------------------------------
    auto* cond = app.add_subcommand("conductance", "exact conductance report as JSON");
    FamilySpec cond_spec;
    std::int32_t cond_n = 0;
    std::string cond_matrix, cond_out;
    bool cond_circulant = false;
    cond->add_option("--family", cond_spec.family, "ring|complete|chain|random")->required();
    cond->add_option("--n", cond_n, "vertex count")->required();
    cond->add_option("--p", cond_spec.p, "extra-edge probability (random family)");
    cond->add_option("--seed", cond_spec.seed, "random seed");
    cond->add_option("--matrix", cond_matrix, "ring|complete|lazy (default per family)");
    cond->add_flag("--circulant", cond_circulant, "use the ring arc fast path");
    cond->add_option("--out", cond_out, "output file (default stdout)");
    bool cond_nots = false;
    cond->add_flag("--no-timestamp", cond_nots, "accepted for symmetry; JSON output carries no timestamp");

    // simulate -------------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "Monte Carlo dissemination times as CSV");
    SimulateArgs sim_args;
    sim->add_option("--family", sim_args.family.family, "ring|complete|chain|random")->required();
    sim->add_option("--n", sim_args.sizes, "comma-separated sizes")->required();
    sim->add_option("--p", sim_args.family.p, "extra-edge probability (random family)");
    sim->add_option("--matrix", sim_args.matrix_kind, "ring|complete|lazy (default per family)");
    sim->add_option("--mode", sim_args.mode, "single|multi")
        ->check(CLI::IsMember({"single", "multi"}));
    sim->add_option("--epsilon", sim_args.epsilon, "failure probability budget");
    sim->add_option("--trials", sim_args.trials, "Monte Carlo trials per source");
    sim->add_option("--seed", sim_args.family.seed, "base seed");
    sim->add_flag("--vertex-transitive", sim_args.vertex_transitive,
                  "estimate from a single source");
    sim->add_flag("--emit-trace", sim_args.emit_trace, "write a per-round trace JSON per size");
    sim->add_flag("--no-timestamp", sim_args.no_timestamp, "suppress the timestamp header");
    sim->add_option("--out", sim_args.out, "output file (default stdout)");

    // plan -----------------------------------------------------------------
    auto* plan = app.add_subcommand("plan", "entanglement update plan as JSON");
    FamilySpec plan_spec;
    std::int32_t plan_n = 0;
    std::string plan_mode = "single", plan_out;
    plan->add_option("--family", plan_spec.family, "ring|complete|chain|random")->required();
    plan->add_option("--n", plan_n, "vertex count")->required();
    plan->add_option("--p", plan_spec.p, "extra-edge probability (random family)");
    plan->add_option("--seed", plan_spec.seed, "random seed");
    plan->add_option("--mode", plan_mode, "single|multi")
        ->check(CLI::IsMember({"single", "multi"}));
    plan->add_option("--out", plan_out, "output file (default stdout)");
    bool plan_nots = false;
    plan->add_flag("--no-timestamp", plan_nots, "accepted for symmetry; JSON output carries no timestamp");

    // compare ----------------------------------------------------------------
    auto* cmp = app.add_subcommand("compare",
                                   "ring vs updated-network dissemination sweep as CSV");
    CompareArgs cmp_args;
    cmp->add_option("--n", cmp_args.sizes, "comma-separated sizes")->required();
    cmp->add_option("--mode", cmp_args.mode, "single|multi")
        ->check(CLI::IsMember({"single", "multi"}));
    cmp->add_option("--epsilon", cmp_args.epsilon, "failure probability budget");
    cmp->add_option("--trials", cmp_args.trials, "Monte Carlo trials per source");
    cmp->add_option("--seed", cmp_args.seed, "base seed");
    cmp->add_flag("--vertex-transitive", cmp_args.vertex_transitive,
                  "estimate from a single source");
    cmp->add_flag("--no-timestamp", cmp_args.no_timestamp, "suppress the timestamp header");
    cmp->add_option("--out", cmp_args.out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_spec, gen_n, gen_out);
        if (cond->parsed()) {
            return cmd_conductance(cond_spec, cond_n, cond_matrix, cond_circulant, cond_out);
        }
        if (sim->parsed()) return cmd_simulate(sim_args);
        if (plan->parsed()) return cmd_plan(plan_spec, plan_n, plan_mode, plan_out);
        if (cmp->parsed()) return cmd_compare(cmp_args);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.exit_code == 0 ? 1 : e.exit_code;
    }
    return 1;
}
