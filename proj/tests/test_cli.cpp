#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int counter = 0;

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("sgq_cli_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter++));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string p(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(SGQ_CLI_PATH) + " " + args;
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

std::string fixture(const std::string& rel) {
  return (fs::path(SGQ_FIXTURE_DIR) / rel).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("stats summarizes a stream") {
  Scratch s;
  CHECK(run("stats --stream " + fixture("streams/path2_demo.ndjson") +
            " --out " + s.p("stats.json")) == 0);
  json j = json::parse(slurp(s.p("stats.json")));
  CHECK(j["total_edges"] == 2);
  CHECK(j["edge_type_counts"]["x"] == 1);
  CHECK(j["edge_type_counts"]["y"] == 1);
}

TEST_CASE("stats of an empty stream is empty but valid") {
  Scratch s;
  std::ofstream(s.p("empty.ndjson")).close();
  CHECK(run("stats --stream " + s.p("empty.ndjson") + " --out " +
            s.p("stats.json")) == 0);
  CHECK(json::parse(slurp(s.p("stats.json")))["total_edges"] == 0);
}

TEST_CASE("a malformed stream line is reported with its number") {
  Scratch s;
  CHECK(run("stats --stream " + fixture("streams/malformed_line2.ndjson") +
            " --out " + s.p("stats.json") + " 2> " + s.p("err.txt")) == 2);
  CHECK(slurp(s.p("err.txt")).find("line 2") != std::string::npos);
}

TEST_CASE("plan prints leaves and falls back to cold-start stats") {
  Scratch s;
  CHECK(run("plan --query " + fixture("queries/path2.json") + " > " +
            s.p("plan.txt") + " 2> " + s.p("err.txt")) == 0);
  const std::string plan = slurp(s.p("plan.txt"));
  CHECK(plan.find("query path2") != std::string::npos);
  CHECK(plan.find("score=") != std::string::npos);
  CHECK(slurp(s.p("err.txt")).find("cold-start") != std::string::npos);
}

TEST_CASE("invalid query files exit with the input-error code") {
  Scratch s;
  for (const char* name :
       {"bad_dangling", "bad_selfloop", "bad_window", "bad_syntax"}) {
    CAPTURE(name);
    CHECK(run("plan --query " +
              fixture("queries/" + std::string(name) + ".json") + " 2> " +
              s.p("err.txt")) == 2);
  }
}

TEST_CASE("bad invocations exit with the input-error code") {
  Scratch s;
  CHECK(run("nosuch 2> /dev/null") == 2);
  CHECK(run("run --stream missing.ndjson 2> /dev/null") == 2);  // no --query
  CHECK(run("plan --query " + fixture("queries/path2.json") +
            " --max-leaf-size 5 2> /dev/null") == 2);
  CHECK(run("--help > /dev/null") == 0);
}

TEST_CASE("run emits the demo match and is byte stable") {
  Scratch s;
  const std::string base = "run --query " + fixture("queries/path2.json") +
                           " --stream " +
                           fixture("streams/path2_demo.ndjson") +
                           " --window-ms 10 --out ";
  CHECK(run(base + s.p("out1.ndjson") + " 2> " + s.p("err.txt")) == 0);
  auto lines = lines_of(slurp(s.p("out1.ndjson")));
  REQUIRE(lines.size() == 1);
  json em = json::parse(lines[0]);
  CHECK(em["query"] == "path2");
  CHECK(em["completed_at"] == 2);
  CHECK(em["bindings"] == json({{"A", "n1"}, {"B", "n2"}, {"C", "n3"}}));
  REQUIRE(em["edges"].size() == 2);
  CHECK(em["edges"][0]["edge_key"] == 0);
  CHECK(em["edges"][1]["etype"] == "y");

  json summary = json::parse(lines_of(slurp(s.p("err.txt"))).back());
  CHECK(summary["edges_processed"] == 2);
  CHECK(summary["emitted_total"] == 1);
  CHECK(summary["queries"][0]["name"] == "path2");

  CHECK(run(base + s.p("out2.ndjson") + " 2> /dev/null") == 0);
  CHECK(slurp(s.p("out1.ndjson")) == slurp(s.p("out2.ndjson")));
}

TEST_CASE("a span equal to the query window emits nothing") {
  Scratch s;
  CHECK(run("run --query " + fixture("queries/path2.json") + " --stream " +
            fixture("streams/boundary_span.ndjson") + " --out " +
            s.p("out.ndjson") + " 2> /dev/null") == 0);
  CHECK(lines_of(slurp(s.p("out.ndjson"))).empty());
}

TEST_CASE("a type conflict aborts with a partial-output marker") {
  Scratch s;
  CHECK(run("run --query " + fixture("queries/path2.json") + " --stream " +
            fixture("streams/type_conflict.ndjson") + " --out " +
            s.p("out.ndjson") + " 2> /dev/null") == 2);
  auto lines = lines_of(slurp(s.p("out.ndjson")));
  REQUIRE(!lines.empty());
  json marker = json::parse(lines.back());
  CHECK(marker["partial_output"] == true);
  CHECK(marker.contains("error"));
}

TEST_CASE("window overrides must match the query list") {
  Scratch s;
  CHECK(run("run --query " + fixture("queries/path2.json") + " --query " +
            fixture("queries/tri.json") + " --stream " +
            fixture("streams/path2_demo.ndjson") + " --out " +
            s.p("out.ndjson") + " --window-ms 10 --window-ms 20 --window-ms 30"
            " 2> /dev/null") == 2);
}

TEST_CASE("gen is deterministic per seed") {
  Scratch s;
  const std::string base = "gen --seed 99 --edges 50 --vertices 8 --out ";
  CHECK(run(base + s.p("a.ndjson") + " 2> /dev/null") == 0);
  CHECK(run(base + s.p("b.ndjson") + " 2> /dev/null") == 0);
  const std::string a = slurp(s.p("a.ndjson"));
  CHECK(a == slurp(s.p("b.ndjson")));
  CHECK(lines_of(a).size() == 50);
}

TEST_CASE("run and oracle agree on a generated stream") {
  Scratch s;
  CHECK(run("gen --seed 5 --edges 120 --vertices 10 --plant " +
            fixture("queries/path3.json") + " --instances 4 --out " +
            s.p("stream.ndjson") + " 2> /dev/null") == 0);
  const std::string tail = " --query " + fixture("queries/path3.json") +
                           " --stream " + s.p("stream.ndjson") +
                           " --window-ms 300 2> /dev/null";
  CHECK(run("run --out " + s.p("run.ndjson") + tail) == 0);
  CHECK(run("oracle --out " + s.p("oracle.ndjson") + tail) == 0);

  auto a = lines_of(slurp(s.p("run.ndjson")));
  auto b = lines_of(slurp(s.p("oracle.ndjson")));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
  CHECK(!a.empty());
}

TEST_CASE("dump-tree prints a well-formed node list") {
  Scratch s;
  CHECK(run("dump-tree --query " + fixture("queries/tree5.json") + " > " +
            s.p("tree.json") + " 2> /dev/null") == 0);
  json j = json::parse(slurp(s.p("tree.json")));
  CHECK(j["query"] == "tree5");
  REQUIRE(j["nodes"].is_array());
  int roots = 0, leaves = 0;
  for (const auto& n : j["nodes"]) {
    if (n["root"].get<bool>()) ++roots;
    if (n["leaf"].get<bool>()) ++leaves;
    if (!n["leaf"].get<bool>()) CHECK(!n["cut"].empty());
  }
  CHECK(roots == 1);
  CHECK(j["nodes"].size() == std::size_t(2 * leaves - 1));
}

TEST_CASE("attribute-bearing records round-trip through stats and run") {
  Scratch s;
  CHECK(run("stats --stream " + fixture("streams/attrs_demo.ndjson") +
            " --out " + s.p("stats.json")) == 0);
  json j = json::parse(slurp(s.p("stats.json")));
  CHECK(j["total_edges"].get<int>() > 0);
  CHECK(run("run --query " + fixture("queries/lateral_move.json") +
            " --stream " + fixture("streams/attrs_demo.ndjson") + " --out " +
            s.p("out.ndjson") + " 2> /dev/null") == 0);
}
