#ifndef SGQ_SJ_TREE_HPP
#define SGQ_SJ_TREE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sgq/graph.hpp"
#include "sgq/query.hpp"

namespace sgq {

// An injective binding of a node's query subgraph onto the data graph.
// Bound edges carry enough of the data edge (timestamp, concrete type) to
// report a completed match without consulting the graph again.
struct Match {
  struct BoundEdge {
    int qeid = 0;
    EdgeKey key = 0;
    Timestamp t = 0;
    std::string etype;  // the data edge's concrete type

    bool operator==(const BoundEdge&) const = default;
  };

  // (qid -> data vertex id), sorted by qid; values pairwise distinct.
  std::vector<std::pair<std::string, std::string>> vertex_bindings;
  // (qeid -> bound edge), sorted by qeid; keys pairwise distinct.
  std::vector<BoundEdge> edge_bindings;
  TimeInterval interval;

  const std::string* vertex_of(const std::string& qid) const;

  // Canonical "qeid:key|..." string; equal signatures iff identical edge
  // bindings.
  std::string signature() const;

  bool operator==(const Match&) const = default;
};

enum class JoinReject { cut_mismatch, injectivity, window };

struct JoinResult {
  std::optional<Match> match;        // set iff the join succeeded
  std::optional<JoinReject> reject;  // set iff the join was rejected

  bool ok() const { return match.has_value(); }
};

// Combines two sibling matches.  Rejects, in order: a cut vertex bound to
// different data vertices; a merged binding that breaks vertex or edge
// injectivity; a merged interval whose span reaches window_ms.
JoinResult join_matches(const Match& left, const Match& right,
                        const std::vector<std::string>& cut_vertices,
                        std::int64_t window_ms);

struct SJTreeNode {
  int id = -1;
  int parent = -1;
  int left = -1;
  int right = -1;

  std::vector<int> query_edges;                  // sorted qeids
  std::vector<std::string> subgraph_vertices;    // sorted qids
  std::vector<std::string> cut_vertices;         // empty at leaves

  // Partial matches keyed by the parent's cut projection.  The root stores
  // nothing; its completions are returned to the caller.
  std::unordered_map<std::string, std::vector<Match>> match_table;
  std::unordered_set<std::string> dedup_index;

  std::uint64_t stored = 0;
  std::uint64_t duplicates_dropped = 0;
  std::uint64_t evicted = 0;
  std::uint64_t rejected_cut = 0;
  std::uint64_t rejected_injectivity = 0;
  std::uint64_t rejected_window = 0;

  bool is_leaf() const { return left < 0 && right < 0; }
  bool is_root() const { return parent < 0; }
  std::size_t table_size() const;
};

// The runtime decomposition tree: leaves hold search primitives, internal
// nodes hold joins of their children, the root equals the full query.  One
// tree per registered query, owned by a single execution thread.
class SJTree {
public:
  // Nodes are linked by id; exactly one root.  Built by the planner.
  explicit SJTree(std::vector<SJTreeNode> nodes);

  const SJTreeNode& node(int id) const;
  std::size_t node_count() const { return nodes_.size(); }
  int root_id() const { return root_id_; }
  const std::vector<int>& leaf_ids() const { return leaf_ids_; }

  // Stores m at node_id, joins it against the sibling table, and percolates
  // successful joins upward.  Matches completing the root are returned, in
  // derivation order, rather than stored.  Duplicate matches (by edge
  // signature) are dropped and counted.
  std::vector<Match> insert_and_propagate(int node_id, Match m,
                                          std::int64_t window_ms);

  // Drops every stored match with earliest timestamp <= watermark -
  // window_ms; their dedup entries go too.  Returns the eviction count.
  std::size_t expire(Timestamp watermark, std::int64_t window_ms);

  std::size_t total_table_size() const;
  std::uint64_t completions() const { return completions_; }

  // Walks every match table and throws ContractError on any violated
  // invariant: bindings consistent with the query, injectivity, interval
  // integrity, signature uniqueness, edge set equal to the node subgraph.
  void validate(const QueryGraph& q) const;

private:
  std::string join_key(const SJTreeNode& node, const Match& m) const;
  void propagate(int node_id, Match&& m, std::int64_t window_ms,
                 std::vector<Match>& completions);

  std::vector<SJTreeNode> nodes_;
  std::vector<int> leaf_ids_;
  int root_id_ = -1;
  std::uint64_t completions_ = 0;
};

}  // namespace sgq

#endif  // SGQ_SJ_TREE_HPP
