#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "subedge/cli_app.hpp"

using namespace subedge;

namespace {

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("subedge");
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string tmp_path(const std::string& name) { return "cli_test_" + name; }

} // namespace

TEST_CASE("gen writes deterministic edge lists") {
    const std::string a = tmp_path("star_a.txt");
    const std::string b = tmp_path("star_b.txt");
    CHECK(run_cli({"gen", "--gen", "star:11", "--seed", "3", "--out", a}) == 0);
    CHECK(run_cli({"gen", "--gen", "star:11", "--seed", "3", "--out", b}) == 0);
    const std::string ca = slurp(a), cb = slurp(b);
    CHECK(ca == cb);
    CHECK(ca.find("# n=11") == 0);
    CHECK(std::count(ca.begin(), ca.end(), '\n') == 11); // header + 10 edges

    const std::string lolli = tmp_path("lolli.txt");
    CHECK(run_cli({"gen", "--gen", "lollipop:10,50", "--out", lolli}) == 0);
    const std::string cl = slurp(lolli);
    CHECK(std::count(cl.begin(), cl.end(), '\n') == 1 + 45 + 50);
    std::remove(a.c_str());
    std::remove(b.c_str());
    std::remove(lolli.c_str());
}

TEST_CASE("preprocess, sample, and the full round trip") {
    const std::string graph = tmp_path("clique.txt");
    const std::string state = tmp_path("state.json");
    const std::string state2 = tmp_path("state2.json");
    const std::string edges = tmp_path("edges.txt");
    REQUIRE(run_cli({"gen", "--gen", "clique:5", "--out", graph}) == 0);

    SUBCASE("preprocess writes a state file and is deterministic per seed") {
        CHECK(run_cli({"preprocess", "--graph", graph, "--eps", "0.4", "--delta", "0.1", "--x", "1",
                       "--seed", "7", "--out", state}) == 0);
        CHECK(run_cli({"preprocess", "--graph", graph, "--eps", "0.4", "--delta", "0.1", "--x", "1",
                       "--seed", "7", "--out", state2}) == 0);
        CHECK(slurp(state) == slurp(state2));
        CHECK(slurp(state).find("\"format\": \"subedge-state\"") != std::string::npos);
    }

    SUBCASE("sample emits exactly q edges plus a counter trailer") {
        REQUIRE(run_cli({"preprocess", "--graph", graph, "--eps", "0.4", "--seed", "7", "--out", state}) == 0);
        CHECK(run_cli({"sample", "--graph", graph, "--state", state, "--q", "3", "--seed", "9",
                       "--out", edges}) == 0);
        const std::string content = slurp(edges);
        std::istringstream in(content);
        std::string line;
        int edge_lines = 0, comment_lines = 0;
        while (std::getline(in, line)) {
            if (line.rfind('#', 0) == 0) {
                ++comment_lines;
                CHECK(line.find("\"samples\":3") != std::string::npos);
                const json trailer = json::parse(line.substr(2));
                const auto iterations = trailer.at("iterations").get<std::uint64_t>();
                const auto total = trailer.at("queries").at("total").get<std::uint64_t>();
                CHECK(total <= 3 * iterations);
            } else {
                ++edge_lines;
            }
        }
        CHECK(edge_lines == 3);
        CHECK(comment_lines == 1);
    }

    SUBCASE("folded output is ordered") {
        REQUIRE(run_cli({"preprocess", "--graph", graph, "--eps", "0.4", "--seed", "7", "--out", state}) == 0);
        CHECK(run_cli({"sample", "--graph", graph, "--state", state, "--q", "50", "--seed", "9", "--fold",
                       "--out", edges}) == 0);
        std::istringstream in(slurp(edges));
        std::string line;
        while (std::getline(in, line)) {
            if (line.rfind('#', 0) == 0) continue;
            std::istringstream ls(line);
            int u = -1, v = -1;
            ls >> u >> v;
            CHECK(u <= v);
        }
    }

    SUBCASE("sampling against the wrong graph is refused") {
        REQUIRE(run_cli({"preprocess", "--graph", graph, "--eps", "0.4", "--seed", "7", "--out", state}) == 0);
        const std::string other = tmp_path("other.txt");
        REQUIRE(run_cli({"gen", "--gen", "star:5", "--out", other}) == 0);
        CHECK(run_cli({"sample", "--graph", other, "--state", state, "--q", "1"}) == 2);
        std::remove(other.c_str());
    }

    std::remove(graph.c_str());
    std::remove(state.c_str());
    std::remove(state2.c_str());
    std::remove(edges.c_str());
}

TEST_CASE("verify on a regular graph reports a near-zero deviation") {
    const std::string report = tmp_path("verify.csv");
    CHECK(run_cli({"verify", "--gen", "clique:5", "--eps", "0.4", "--delta", "0.1", "--x", "1", "--seeds",
                   "5", "--seed", "11", "--out", report}) == 0);
    std::istringstream in(slurp(report));
    std::string line;
    std::getline(in, line); // header
    CHECK(line == VerifyRow::csv_header());
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        // pointwise_dev is third from last; pass flag is last
        const auto last_comma = line.rfind(',');
        CHECK(line.substr(last_comma + 1) == "1");
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        CHECK(std::stod(fields[18]) < 1e-9); // pointwise_dev column
    }
    CHECK(rows == 5);
    std::remove(report.c_str());
}

TEST_CASE("scale emits one row per (q, seed)") {
    const std::string report = tmp_path("scale.csv");
    CHECK(run_cli({"scale", "--gen", "erdos_renyi:400,0.05", "--eps", "0.3", "--q-grid", "2,8,32",
                   "--seeds", "3", "--seed", "5", "--no-factor-check", "--out", report}) == 0);
    std::istringstream in(slurp(report));
    std::string line;
    std::getline(in, line);
    CHECK(line == scaling_cell_csv_header());
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 9);
    std::remove(report.c_str());
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run_cli({"sample", "--graph", "does_not_exist.txt", "--state", "nope.json", "--q", "1"}) == 2);
    CHECK(run_cli({"gen", "--gen", "unknown:4"}) == 2);
    CHECK(run_cli({"bogus-subcommand"}) == 2);
    CHECK(run_cli({"preprocess", "--graph", "missing.txt"}) == 2);
}

TEST_CASE("seed falls back to the environment") {
    const std::string a = tmp_path("env_a.txt");
    const std::string b = tmp_path("env_b.txt");
    setenv("SUBEDGE_SEED", "12345", 1);
    CHECK(run_cli({"gen", "--gen", "erdos_renyi:50,0.2", "--out", a}) == 0);
    unsetenv("SUBEDGE_SEED");
    CHECK(run_cli({"gen", "--gen", "erdos_renyi:50,0.2", "--seed", "12345", "--out", b}) == 0);
    CHECK(slurp(a) == slurp(b));
    std::remove(a.c_str());
    std::remove(b.c_str());
}
