// Command-line front end: statistics passes, plan inspection, stream
// execution, oracle runs, and the synthetic stream generator.
// Exit codes: 0 success, 1 runtime error, 2 input validation error.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sgq/engine.hpp"
#include "sgq/errors.hpp"
#include "sgq/gen.hpp"
#include "sgq/oracle.hpp"
#include "sgq/planner.hpp"
#include "sgq/stats.hpp"
#include "sgq/stream_io.hpp"

namespace {

using namespace sgq;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file: " + path);
  return out;
}

QueryGraph load_query(const std::string& path) {
  try {
    return parse_query(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(std::string(e.what()) + " (in " + path + ")");
  }
}

GraphStatistics load_stats_or_cold(const std::string& path) {
  if (path.empty()) {
    std::cerr << "warning: no statistics file; planning with cold-start "
                 "floor frequencies\n";
    return {};
  }
  std::ifstream probe(path);
  if (!probe) {
    std::cerr << "warning: statistics file '" << path
              << "' not readable; planning with cold-start floor "
                 "frequencies\n";
    return {};
  }
  return stats_from_json(read_text_file(path));
}

int run_stats(const std::string& stream_path, const std::string& out_path) {
  std::ifstream in(stream_path);
  if (!in) throw ParseError("cannot open stream file: " + stream_path);
  DynamicGraph graph;
  StatisticsCollector collector;
  StreamReader reader(in);
  while (auto e = reader.next()) {
    if (graph.insert(*e) == InsertOutcome::accepted)
      collector.on_edge_accepted(graph, *e);
  }
  auto out = open_output(out_path);
  out << stats_to_json(collector.snapshot()) << '\n';
  return 0;
}

int run_plan(const std::string& query_path, const std::string& stats_path,
             int max_leaf_size) {
  QueryGraph q = load_query(query_path);
  GraphStatistics stats = load_stats_or_cold(stats_path);
  DecompositionPlan plan = decompose(q, stats, max_leaf_size);
  SJTree tree = build_sj_tree(plan, q);
  std::cout << render_plan(plan, tree, q);
  return 0;
}

// Per-node structure, table sizes and counters as JSON (tables are empty
// here; the shape and cuts are the point).
int run_dump_tree(const std::string& query_path, const std::string& stats_path,
                  int max_leaf_size) {
  QueryGraph q = load_query(query_path);
  GraphStatistics stats = load_stats_or_cold(stats_path);
  DecompositionPlan plan = decompose(q, stats, max_leaf_size);
  SJTree tree = build_sj_tree(plan, q);

  nlohmann::ordered_json out;
  out["query"] = q.name;
  out["window_ms"] = q.window_ms;
  out["max_leaf_size"] = max_leaf_size;
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < tree.node_count(); ++i) {
    const SJTreeNode& n = tree.node(static_cast<int>(i));
    nlohmann::ordered_json j;
    j["id"] = n.id;
    j["parent"] = n.parent;
    j["left"] = n.left;
    j["right"] = n.right;
    j["root"] = n.is_root();
    j["leaf"] = n.is_leaf();
    j["edges"] = n.query_edges;
    j["vertices"] = n.subgraph_vertices;
    j["cut"] = n.cut_vertices;
    j["table_size"] = n.table_size();
    j["stored"] = n.stored;
    j["duplicates_dropped"] = n.duplicates_dropped;
    j["evicted"] = n.evicted;
    j["rejected_cut"] = n.rejected_cut;
    j["rejected_injectivity"] = n.rejected_injectivity;
    j["rejected_window"] = n.rejected_window;
    nodes.push_back(std::move(j));
  }
  std::size_t leaf_index = 0;
  for (auto& j : nodes)
    if (j["leaf"].get<bool>())
      j["score"] = plan.leaves[leaf_index++].score;
  out["nodes"] = std::move(nodes);
  std::cout << out.dump(2) << '\n';
  return 0;
}

std::vector<QueryGraph> load_queries(
    const std::vector<std::string>& query_paths,
    const std::vector<std::int64_t>& window_overrides) {
  if (!window_overrides.empty() && window_overrides.size() != 1 &&
      window_overrides.size() != query_paths.size())
    throw ParseError("--window-ms count must be 1 or match --query count");
  std::vector<QueryGraph> queries;
  for (std::size_t i = 0; i < query_paths.size(); ++i) {
    QueryGraph q = load_query(query_paths[i]);
    if (!window_overrides.empty()) {
      const std::int64_t w = window_overrides.size() == 1
                                 ? window_overrides[0]
                                 : window_overrides[i];
      if (w <= 0) throw ParseError("--window-ms must be positive");
      q.window_ms = w;
    }
    queries.push_back(std::move(q));
  }
  return queries;
}

nlohmann::ordered_json tree_counters(const SJTree& tree) {
  std::uint64_t stored = 0, dups = 0, evicted = 0, rcut = 0, rinj = 0,
                rwin = 0;
  for (std::size_t i = 0; i < tree.node_count(); ++i) {
    const SJTreeNode& n = tree.node(static_cast<int>(i));
    stored += n.stored;
    dups += n.duplicates_dropped;
    evicted += n.evicted;
    rcut += n.rejected_cut;
    rinj += n.rejected_injectivity;
    rwin += n.rejected_window;
  }
  nlohmann::ordered_json j;
  j["table_size"] = tree.total_table_size();
  j["stored"] = stored;
  j["duplicates_dropped"] = dups;
  j["evicted"] = evicted;
  j["rejected_cut"] = rcut;
  j["rejected_injectivity"] = rinj;
  j["rejected_window"] = rwin;
  return j;
}

int run_run(const std::vector<std::string>& query_paths,
            const std::string& stream_path, const std::string& out_path,
            const std::string& stats_path,
            const std::vector<std::int64_t>& window_overrides,
            int max_leaf_size, std::uint64_t expiry_stride) {
  std::vector<QueryGraph> queries =
      load_queries(query_paths, window_overrides);
  GraphStatistics stats = load_stats_or_cold(stats_path);

  EngineConfig cfg;
  cfg.max_leaf_size = max_leaf_size;
  cfg.expiry_stride = expiry_stride;
  Engine engine(cfg);
  for (const auto& q : queries) engine.register_query(q, stats);

  std::ifstream in(stream_path);
  if (!in) throw ParseError("cannot open stream file: " + stream_path);
  auto out = open_output(out_path);

  const auto t0 = std::chrono::steady_clock::now();
  try {
    StreamReader reader(in);
    while (auto e = reader.next()) {
      for (const EmittedMatch& em : engine.process_edge(*e))
        out << emission_to_json(em) << '\n';
    }
  } catch (const Error& e) {
    nlohmann::ordered_json marker;
    marker["partial_output"] = true;
    marker["error"] = e.what();
    out << marker.dump() << '\n';
    out.flush();
    throw;
  }
  out.flush();
  const auto t1 = std::chrono::steady_clock::now();
  const auto wall_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();

  nlohmann::ordered_json summary;
  summary["edges_processed"] = engine.edges_processed();
  summary["edges_accepted"] = engine.edges_accepted();
  summary["dropped_late"] = engine.dropped_late();
  summary["emitted_total"] = engine.emitted_total();
  summary["wall_ms"] = wall_ms;
  summary["edges_per_sec"] =
      static_cast<double>(engine.edges_processed()) * 1000.0 /
      static_cast<double>(std::max<std::int64_t>(wall_ms, 1));
  nlohmann::ordered_json per_query = nlohmann::ordered_json::array();
  for (const auto& rt : engine.runtimes()) {
    nlohmann::ordered_json j;
    j["name"] = rt->query.name;
    j["window_ms"] = rt->query.window_ms;
    j["leaves"] = rt->plan.leaves.size();
    j["emitted"] = rt->emitted;
    j.update(tree_counters(rt->tree));
    per_query.push_back(std::move(j));
  }
  summary["queries"] = std::move(per_query);
  std::cerr << summary.dump() << '\n';
  return 0;
}

EmittedMatch emitted_from_oracle(const QueryGraph& q, const OracleMatch& om) {
  EmittedMatch em;
  em.query = q.name;
  em.completed_at = om.interval.latest;
  em.bindings = om.vertex_bindings;
  em.signature = om.signature();
  auto vid_of = [&](const std::string& qid) -> const std::string& {
    for (const auto& [k, v] : om.vertex_bindings)
      if (k == qid) return v;
    throw ContractError("oracle match lacks binding for " + qid);
  };
  for (const auto& be : om.edge_bindings) {
    EmittedMatch::Edge e;
    const QueryEdge& qe = q.edges[static_cast<std::size_t>(be.qeid)];
    e.src = vid_of(qe.source_qid);
    e.dst = vid_of(qe.target_qid);
    e.etype = be.etype;
    e.t = be.t;
    e.edge_key = be.key;
    em.edges.push_back(std::move(e));
  }
  std::sort(em.edges.begin(), em.edges.end(),
            [](const EmittedMatch::Edge& a, const EmittedMatch::Edge& b) {
              return a.t < b.t || (a.t == b.t && a.edge_key < b.edge_key);
            });
  return em;
}

int run_oracle(const std::string& query_path, const std::string& stream_path,
               const std::string& out_path,
               const std::vector<std::int64_t>& window_overrides) {
  std::vector<QueryGraph> queries =
      load_queries({query_path}, window_overrides);
  const QueryGraph& q = queries.front();
  std::vector<TimestampedEdge> stream = read_stream_file(stream_path);
  OracleResult res = oracle_windowed_matches(stream, q);

  std::vector<EmittedMatch> ems;
  for (const auto& m : res.matches) ems.push_back(emitted_from_oracle(q, m));
  std::sort(ems.begin(), ems.end(),
            [](const EmittedMatch& a, const EmittedMatch& b) {
              return std::tie(a.completed_at, a.signature) <
                     std::tie(b.completed_at, b.signature);
            });
  auto out = open_output(out_path);
  write_emissions(out, ems);
  return 0;
}

int run_gen(const std::string& out_path, std::uint64_t seed, int edges,
            int vertices, const std::string& plant_path, int instances,
            std::int64_t start_t, std::int64_t max_step) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.noise_edges = edges;
  cfg.vertex_pool = vertices;
  cfg.start_t = start_t;
  cfg.max_step = max_step;
  cfg.instances = instances;
  QueryGraph plant;
  if (!plant_path.empty()) {
    plant = load_query(plant_path);
    cfg.plant = &plant;
  }
  auto stream = generate_stream(cfg);
  auto out = open_output(out_path);
  for (const auto& e : stream) {
    nlohmann::ordered_json j;
    j["t"] = e.timestamp;
    j["src"] = e.source.id;
    j["src_type"] = e.source.type_label;
    j["dst"] = e.target.id;
    j["dst_type"] = e.target.type_label;
    j["etype"] = e.edge_type;
    out << j.dump() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sgq: continuous subgraph-pattern queries over edge streams"};
  app.require_subcommand(1);

  std::vector<std::string> query_paths;
  std::string stream_path, out_path, stats_path, plant_path;
  std::vector<std::int64_t> window_overrides;
  int max_leaf_size = 2;
  std::uint64_t expiry_stride = 1024;
  std::uint64_t seed = 1;
  int gen_edges = 200, gen_vertices = 40, gen_instances = 0;
  std::int64_t gen_start = 1000, gen_step = 20;

  auto* stats_cmd =
      app.add_subcommand("stats", "Summarize an edge stream to a stats file");
  stats_cmd->add_option("--stream", stream_path, "edge stream file")
      ->required();
  stats_cmd->add_option("--out", out_path, "output stats file")->required();

  auto* plan_cmd =
      app.add_subcommand("plan", "Print the decomposition plan for a query");
  auto* dump_cmd =
      app.add_subcommand("dump-tree", "Print the full join tree for a query");
  for (auto* cmd : {plan_cmd, dump_cmd}) {
    cmd->add_option("--query", query_paths, "query file")->required();
    cmd->add_option("--stats", stats_path, "statistics file");
    cmd->add_option("--max-leaf-size", max_leaf_size, "leaf size cap")
        ->check(CLI::Range(1, 3));
  }

  auto* run_cmd =
      app.add_subcommand("run", "Stream a file through registered queries");
  run_cmd->add_option("--query", query_paths, "query file (repeatable)")
      ->required();
  run_cmd->add_option("--stream", stream_path, "edge stream file")->required();
  run_cmd->add_option("--out", out_path, "emissions output file")->required();
  run_cmd->add_option("--stats", stats_path, "statistics file for planning");
  run_cmd->add_option("--max-leaf-size", max_leaf_size, "leaf size cap")
      ->check(CLI::Range(1, 3));
  run_cmd->add_option("--expiry-stride", expiry_stride,
                      "partial-match expiry cadence in edges");
  run_cmd->add_option("--window-ms", window_overrides,
                      "window override (one value, or one per query)");

  auto* oracle_cmd = app.add_subcommand(
      "oracle", "Brute-force reference matches for one query");
  oracle_cmd->add_option("--query", query_paths, "query file")->required();
  oracle_cmd->add_option("--stream", stream_path, "edge stream file")
      ->required();
  oracle_cmd->add_option("--out", out_path, "emissions output file")
      ->required();
  oracle_cmd->add_option("--window-ms", window_overrides, "window override");

  auto* gen_cmd =
      app.add_subcommand("gen", "Generate a synthetic edge stream");
  gen_cmd->add_option("--out", out_path, "output stream file")->required();
  gen_cmd->add_option("--seed", seed, "random seed");
  gen_cmd->add_option("--edges", gen_edges, "noise edge count");
  gen_cmd->add_option("--vertices", gen_vertices, "vertex pool size");
  gen_cmd->add_option("--plant", plant_path, "query file to plant instances of");
  gen_cmd->add_option("--instances", gen_instances, "planted instance count");
  gen_cmd->add_option("--start-t", gen_start, "first timestamp");
  gen_cmd->add_option("--max-step", gen_step, "max timestamp increment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*stats_cmd) return run_stats(stream_path, out_path);
    if (*plan_cmd)
      return run_plan(query_paths.at(0), stats_path, max_leaf_size);
    if (*dump_cmd)
      return run_dump_tree(query_paths.at(0), stats_path, max_leaf_size);
    if (*run_cmd)
      return run_run(query_paths, stream_path, out_path, stats_path,
                     window_overrides, max_leaf_size, expiry_stride);
    if (*oracle_cmd)
      return run_oracle(query_paths.at(0), stream_path, out_path,
                        window_overrides);
    if (*gen_cmd)
      return run_gen(out_path, seed, gen_edges, gen_vertices, plant_path,
                     gen_instances, gen_start, gen_step);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const TypeConflictError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
