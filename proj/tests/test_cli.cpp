// End-to-end tests of the command-line binary (path in QGOSSIP_CLI_BIN).

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path tmp_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::path("cli_tmp");
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    const char* bin = std::getenv("QGOSSIP_CLI_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "QGOSSIP_CLI_BIN must point at the CLI binary");
    static int counter = 0;
    const fs::path out = tmp_dir() / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = tmp_dir() / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string command = std::string("\"") + bin + "\" " + args + " > " + out.string() +
                                " 2> " + err.string();
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out);
    result.err = slurp(err);
    return result;
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream stream(line);
    std::string field;
    while (std::getline(stream, field, ',')) fields.push_back(field);
    return fields;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("gen emits graph JSON") {
    const auto r = run_cli("gen --family ring --n 8");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["n"] == 8);
    CHECK(j["edges"].size() == 8);
}

TEST_CASE("gen is deterministic") {
    const auto a = run_cli("gen --family random --n 10 --p 0.2 --seed 7");
    const auto b = run_cli("gen --family random --n 10 --p 0.2 --seed 7");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    const auto c = run_cli("gen --family random --n 10 --p 0.2 --seed 8");
    CHECK(a.out != c.out);
}

TEST_CASE("gen rejects invalid parameters") {
    const auto r = run_cli("gen --family ring --n 2");
    CHECK(r.exit_code == 1);
    CHECK(r.out.empty());
    CHECK(r.err.find("n >= 3") != std::string::npos);

    CHECK(run_cli("gen --family nosuch --n 4").exit_code == 1);
    CHECK(run_cli("gen --n 4").exit_code != 0);  // missing --family
}

TEST_CASE("conductance report") {
    const auto r = run_cli("conductance --family ring --n 8");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["value"] == 0.125);
    CHECK(j["k"] == 4);
    CHECK(j["mean_conductance"] == 128.0);

    const auto complete = run_cli("conductance --family complete --n 8");
    CHECK(nlohmann::json::parse(complete.out)["value"] == 0.5);
}

TEST_CASE("conductance capacity error and circulant fast path") {
    const auto capped = run_cli("conductance --family ring --n 64");
    CHECK(capped.exit_code == 2);
    CHECK(capped.err.find("circulant") != std::string::npos);

    const auto fast = run_cli("conductance --family ring --n 64 --circulant");
    CHECK(fast.exit_code == 0);
    CHECK(nlohmann::json::parse(fast.out)["value"] == 0.015625);
}

TEST_CASE("simulate reproduces the two-vertex analytic answer") {
    const auto r = run_cli(
        "simulate --family complete --n 2 --mode single --epsilon 0.1 --trials 10000 --seed 1 "
        "--no-timestamp");
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] ==
          "graph,n,matrix,mode,epsilon,trials,t_estimate,ci_low,ci_high,censored,bound_single,"
          "bound_multi");
    const auto row = split_csv_row(lines[1]);
    REQUIRE(row.size() == 12);
    CHECK(row[0] == "complete");
    CHECK(row[1] == "2");
    CHECK(row[6] == "2");   // t_estimate
    CHECK(row[9] == "0");   // censored
    CHECK(!row[10].empty());  // bound_single present for the complete matrix
}

TEST_CASE("simulate sweeps sizes in sorted order and is byte-deterministic") {
    const std::string args =
        "simulate --family ring --n 8,4 --trials 200 --seed 5 --vertex-transitive "
        "--no-timestamp";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    const auto lines = lines_of(a.out);
    REQUIRE(lines.size() == 3);
    CHECK(split_csv_row(lines[1])[1] == "4");
    CHECK(split_csv_row(lines[2])[1] == "8");
}

TEST_CASE("simulate with a timestamp differs only in the header line") {
    const auto r = run_cli("simulate --family ring --n 4 --trials 150 --seed 2 "
                           "--vertex-transitive");
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0].rfind("# generated ", 0) == 0);
}

TEST_CASE("simulate emits traces behind the flag") {
    const fs::path out = tmp_dir() / "sim.csv";
    const auto r = run_cli("simulate --family ring --n 6 --trials 150 --seed 5 "
                           "--vertex-transitive --emit-trace --no-timestamp --out " +
                           out.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(out));
    const fs::path trace = tmp_dir() / "ring_n6_single.trace.json";
    REQUIRE(fs::exists(trace));
    const auto j = nlohmann::json::parse(slurp(trace));
    CHECK(j["mode"] == "single");
    CHECK(j["n"] == 6);
    CHECK(j["rounds"].size() >= 1);
}

TEST_CASE("plan reports totals and a summary table") {
    const auto single = run_cli("plan --family ring --n 8 --mode single");
    CHECK(single.exit_code == 0);
    const auto j = nlohmann::json::parse(single.out);
    CHECK(j["totals"]["total_edges"] == 20);
    CHECK(j["totals"]["total_swaps"] == 36);
    CHECK(single.err.find("replicas") != std::string::npos);

    const auto multi = run_cli("plan --family ring --n 8 --mode multi");
    CHECK(nlohmann::json::parse(multi.out)["totals"]["total_swaps_with_replicas"] == 288);

    const auto complete = run_cli("plan --family complete --n 8");
    const auto jc = nlohmann::json::parse(complete.out);
    CHECK(jc["totals"]["total_edges"] == 0);
    CHECK(jc["totals"]["total_swaps"] == 0);
}

TEST_CASE("compare sweeps ring against the updated network") {
    const auto r = run_cli("compare --n 4,8 --trials 200 --seed 9 --vertex-transitive "
                           "--no-timestamp");
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "n,t_ring,t_updated,ratio,plan_edges,plan_swaps,plan_swaps_with_replicas");
    const auto row8 = split_csv_row(lines[2]);
    REQUIRE(row8.size() == 7);
    CHECK(row8[0] == "8");
    CHECK(row8[4] == "20");
    CHECK(row8[5] == "36");
    CHECK(std::stol(row8[1]) > std::stol(row8[2]));  // the update speeds dissemination up
}
