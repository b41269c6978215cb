#ifndef SGQ_ENGINE_HPP
#define SGQ_ENGINE_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sgq/graph.hpp"
#include "sgq/planner.hpp"
#include "sgq/query.hpp"
#include "sgq/sj_tree.hpp"
#include "sgq/stats.hpp"

namespace sgq {

// Every match of one leaf primitive in which some query edge is bound to
// seed.  Seed anchoring plus per-node dedup is what keeps cumulative
// emission complete and duplicate-free: a match's chronologically last edge
// anchors it exactly once.  Backtracks over the leaf's edges from each
// compatible anchoring, walking graph neighborhoods, honoring injectivity
// and pruning any partial whose span reaches window_ms.
std::vector<Match> local_search(DynamicGraph& graph, const QueryGraph& q,
                                const std::vector<int>& leaf_qeids,
                                const TimestampedEdge& seed,
                                std::int64_t window_ms);

// A reported complete match.
struct EmittedMatch {
  struct Edge {
    std::string src;
    std::string dst;
    std::string etype;
    Timestamp t = 0;
    EdgeKey edge_key = 0;
  };

  std::string query;
  Timestamp completed_at = 0;  // latest edge timestamp in the match
  std::vector<std::pair<std::string, std::string>> bindings;  // qid -> vertex
  std::vector<Edge> edges;  // sorted by (t, edge_key)
  std::string signature;    // canonical edge-binding signature
};

// One registered query: its plan, its tree, and its counters.
struct QueryRuntime {
  QueryGraph query;
  DecompositionPlan plan;
  SJTree tree;
  std::uint64_t emitted = 0;

  QueryRuntime(QueryGraph q, DecompositionPlan p, SJTree t)
      : query(std::move(q)), plan(std::move(p)), tree(std::move(t)) {}
};

struct EngineConfig {
  int max_leaf_size = 2;
  std::uint64_t expiry_stride = 1024;
  std::uint64_t sweep_stride = 4096;
};

// The continuous-query driver: a shared windowed graph, one SJ-tree per
// registered query, per-edge local search feeding the trees.  Owned by a
// single stream-processing thread; edges are processed strictly in input
// order.
class Engine {
public:
  explicit Engine(EngineConfig config = {});

  // Plans and installs a query.  Must happen before the first edge; the
  // graph's retention window is raised to the largest registered window.
  QueryRuntime& register_query(const QueryGraph& q,
                               const GraphStatistics& stats);

  // Ingests one edge and returns the incremental match set it causes, in
  // deterministic order (completion timestamp, then signature, then query
  // name).  Type conflicts propagate as TypeConflictError.
  std::vector<EmittedMatch> process_edge(const TimestampedEdge& edge);

  DynamicGraph& graph() { return graph_; }
  const std::vector<std::unique_ptr<QueryRuntime>>& runtimes() const {
    return runtimes_;
  }
  const EngineConfig& config() const { return config_; }

  std::uint64_t edges_processed() const { return edges_processed_; }
  std::uint64_t edges_accepted() const { return edges_accepted_; }
  std::uint64_t dropped_late() const { return graph_.late_dropped(); }
  std::uint64_t emitted_total() const { return emitted_total_; }

private:
  EngineConfig config_;
  DynamicGraph graph_;
  std::vector<std::unique_ptr<QueryRuntime>> runtimes_;
  bool streaming_started_ = false;
  std::uint64_t edges_processed_ = 0;
  std::uint64_t edges_accepted_ = 0;
  std::uint64_t emitted_total_ = 0;
};

// Builds the reportable form of a completed match.
EmittedMatch make_emitted(const std::string& query_name, const QueryGraph& q,
                          const Match& m);

}  // namespace sgq

#endif  // SGQ_ENGINE_HPP
