#ifndef SGQ_STATS_HPP
#define SGQ_STATS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sgq/graph.hpp"
#include "sgq/query.hpp"

namespace sgq {

// Summary statistics over an edge stream, used by the planner.
//
// The triad census counts typed 3-vertex substructures over distinct vertex
// triples, ignoring direction and independent of arrival order:
//   - wedge: two distinct edges sharing exactly one vertex; signature is the
//     two edge types sorted, "x|y"
//   - triangle: three edges forming a cycle over three distinct vertices;
//     signature is the edge-type triple sorted, "x|y|z"
// Parallel edges produce one triad per distinct edge pair/triple; self-loops
// never participate.
struct GraphStatistics {
  std::uint64_t total_edges = 0;
  std::map<std::string, std::uint64_t> edge_type_counts;
  std::map<std::string, std::uint64_t> vertex_type_counts;  // distinct vertices
  std::map<std::string, std::uint64_t> degree_histogram;
  std::map<std::string, std::uint64_t> triad_census;

  bool operator==(const GraphStatistics&) const = default;
};

// Histogram bucket for a total degree: exact "0".."16", then power-of-two
// ranges "17-32", "33-64", ...
std::string degree_bucket(std::size_t degree);

// Wedge signature from the two edge types around the center.
std::string wedge_signature(const std::string& a, const std::string& b);

// Triangle signature from the three edge types around the cycle.
std::string triangle_signature(const std::string& a, const std::string& b,
                               const std::string& c);

// Incremental statistics maintenance alongside a DynamicGraph.  Feed every
// accepted edge through on_edge_accepted immediately after insertion.
// Single-writer; snapshot() is a deep copy.
class StatisticsCollector {
public:
  // Updates totals, type counts, the degree histogram and the triad census
  // for an edge that was just accepted into graph.
  void on_edge_accepted(DynamicGraph& graph, const TimestampedEdge& edge);

  GraphStatistics snapshot() const { return stats_; }
  const GraphStatistics& current() const { return stats_; }

private:
  void bump_degree(DynamicGraph& graph, const std::string& vertex_id);

  GraphStatistics stats_;
  std::unordered_set<std::string> seen_vertices_;
  std::unordered_map<std::string, std::size_t> accounted_degree_;
};

// Relative frequency of an edge type: count/total for seen types, floored at
// 1/(total+1) for unseen types, 1.0 for the wildcard.
double relative_frequency(const GraphStatistics& stats,
                          const std::string& edge_type);

// Independence-assumption selectivity of a query subgraph: the product of
// relative_frequency over its edges.  Lower means more selective.
double selectivity_score(const GraphStatistics& stats, const QueryGraph& q,
                         const std::vector<int>& subgraph_qeids);

// Stats file round trip (JSON with the five public fields).
std::string stats_to_json(const GraphStatistics& stats);
GraphStatistics stats_from_json(const std::string& text);

}  // namespace sgq

#endif  // SGQ_STATS_HPP
