#ifndef SGQ_ORACLE_HPP
#define SGQ_ORACLE_HPP

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sgq/graph.hpp"
#include "sgq/query.hpp"

namespace sgq {

// Reference enumerator used by the test suite.  Deliberately independent of
// the streaming engine: its own backtracking over query edges in qeid order,
// its own compatibility checks, whole-stream visibility (retention is
// ignored), and only the span < window_ms constraint.
//
// Desk scale only.  Inputs beyond the caps below, or searches that blow the
// step budget, raise OversizeError rather than truncating.
inline constexpr std::size_t kOracleMaxStreamEdges = 2000;
inline constexpr std::size_t kOracleMaxQueryEdges = 8;
inline constexpr std::uint64_t kOracleStepBudget = 200000000;

struct OracleMatch {
  struct BoundEdge {
    int qeid = 0;
    EdgeKey key = 0;
    Timestamp t = 0;
    std::string etype;
  };

  std::vector<std::pair<std::string, std::string>> vertex_bindings;  // by qid
  std::vector<BoundEdge> edge_bindings;                              // by qeid
  TimeInterval interval{0, 0};

  // "qeid:key|..." over edge bindings; same canonical form the engine uses,
  // so result sets compare directly.
  std::string signature() const;
};

struct OracleResult {
  std::vector<OracleMatch> matches;  // sorted by signature, duplicate-free

  std::set<std::string> signatures() const;
  bool contains(const std::string& sig) const;
};

// All windowed matches of q in the fully materialized stream.  Edge keys in
// the stream must be distinct (ContractError otherwise).
OracleResult oracle_windowed_matches(const std::vector<TimestampedEdge>& stream,
                                     const QueryGraph& q);

// Matches completed exactly by edge k (1-based):
// oracle(stream[1..k]) minus oracle(stream[1..k-1]).
OracleResult oracle_incremental_diff(const std::vector<TimestampedEdge>& stream,
                                     const QueryGraph& q, std::size_t k);

}  // namespace sgq

#endif  // SGQ_ORACLE_HPP
