#ifndef SGQ_QUERY_HPP
#define SGQ_QUERY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sgq/graph.hpp"

namespace sgq {

inline constexpr const char* kWildcard = "*";

struct QueryVertex {
  std::string qid;
  std::string type_label;  // "*" matches any vertex type

  bool operator==(const QueryVertex&) const = default;
};

struct QueryEdge {
  int qeid = 0;  // index into QueryGraph::edges
  std::string source_qid;
  std::string target_qid;
  std::string edge_type;  // "*" matches any edge type

  bool operator==(const QueryEdge&) const = default;
};

// The pattern to detect: typed vertices/edges plus the time window every
// reported match must fit in (interval span strictly below window_ms).
// Immutable after parse; safe to share read-only.
struct QueryGraph {
  std::string name;
  std::vector<QueryVertex> vertices;
  std::vector<QueryEdge> edges;
  std::int64_t window_ms = 0;

  const QueryVertex* find_vertex(const std::string& qid) const;
  // Type label of a declared query vertex; throws ContractError on unknown.
  const std::string& vertex_type_of(const std::string& qid) const;

  bool operator==(const QueryGraph&) const = default;
};

// Parses and validates the query file format:
//   {"name": ..., "window_ms": ..., "vertices": [{"qid","type"}...],
//    "edges": [{"src","dst","etype"}...]}
// Throws ParseError with field diagnostics on syntax errors, duplicate
// qids, dangling endpoints, self-loops, disconnected patterns and
// missing/nonpositive windows.
QueryGraph parse_query(const std::string& text);

// Inverse of parse_query: parse_query(serialize_query(q)) == q.
std::string serialize_query(const QueryGraph& q);

// Per-edge candidacy test: edge type, endpoint vertex types and direction
// all agree (wildcards match anything).  Pure.
bool edge_compatible(const QueryEdge& query_edge, const QueryGraph& q,
                     const TimestampedEdge& data_edge);

}  // namespace sgq

#endif  // SGQ_QUERY_HPP
