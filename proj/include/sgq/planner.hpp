#ifndef SGQ_PLANNER_HPP
#define SGQ_PLANNER_HPP

#include <string>
#include <vector>

#include "sgq/query.hpp"
#include "sgq/sj_tree.hpp"
#include "sgq/stats.hpp"

namespace sgq {

// One search primitive: a small connected query-edge set placed at a leaf.
struct PlanLeaf {
  std::vector<int> qeids;  // sorted
  double score = 1.0;      // selectivity at selection time
};

// Ordered leaf list implying a left-deep join sequence.  Leaves partition
// the query's edges; each leaf is connected; every leaf after the first
// shares at least one vertex with the union of its predecessors.
struct DecompositionPlan {
  std::vector<PlanLeaf> leaves;
};

// Greedy selectivity-driven decomposition: each step picks the
// minimum-score connected edge set of size <= max_leaf_size among the
// uncovered edges (and, after the first step, touching the covered vertex
// set).  Ties break on the lexicographic order of the leaves' sorted
// (etype, src_type, dst_type) tuples, then on qeids.  Deterministic.
DecompositionPlan decompose(const QueryGraph& q, const GraphStatistics& stats,
                            int max_leaf_size = 2);

// Materializes the plan as a left-deep SJTree: leaves in plan order, each
// internal node the union of its children, the root equal to the query, and
// each internal cut the (nonempty) vertex intersection of its children.
SJTree build_sj_tree(const DecompositionPlan& plan, const QueryGraph& q);

// Indented text rendering of the tree (node ids, edges, cuts, leaf scores).
std::string render_plan(const DecompositionPlan& plan, const SJTree& tree,
                        const QueryGraph& q);

}  // namespace sgq

#endif  // SGQ_PLANNER_HPP
