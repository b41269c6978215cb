#ifndef SGQ_GRAPH_HPP
#define SGQ_GRAPH_HPP

#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "sgq/errors.hpp"

namespace sgq {

using Timestamp = std::int64_t;  // milliseconds since epoch
using EdgeKey = std::uint64_t;   // ordinal position in the input stream

inline constexpr Timestamp kInfiniteWindow =
    std::numeric_limits<Timestamp>::max() / 4;

// A typed vertex reference as it appears on a stream record.  A given id is
// bound to exactly one type label for the lifetime of a stream.
struct VertexRef {
  std::string id;
  std::string type_label;

  bool operator==(const VertexRef&) const = default;
};

// One stream record: a directed, typed, attributed edge with a timestamp.
// Parallel edges are first-class and distinguished by edge_key.
struct TimestampedEdge {
  VertexRef source;
  VertexRef target;
  std::string edge_type;
  Timestamp timestamp = 0;
  std::map<std::string, std::string> attributes;
  EdgeKey edge_key = 0;

  bool operator==(const TimestampedEdge&) const = default;
};

// Closed interval between the earliest and latest edge of a subgraph.
struct TimeInterval {
  Timestamp earliest = 0;
  Timestamp latest = 0;

  Timestamp span() const { return latest - earliest; }

  static TimeInterval merged(const TimeInterval& a, const TimeInterval& b) {
    return {a.earliest < b.earliest ? a.earliest : b.earliest,
            a.latest > b.latest ? a.latest : b.latest};
  }

  bool operator==(const TimeInterval&) const = default;
};

// earliest/latest timestamp over a nonempty edge set.
TimeInterval interval_of(const std::vector<TimestampedEdge>& edges);

enum class InsertOutcome { accepted, dropped_late };

enum class Direction { out, in, both };

// Windowed adjacency store over the recent edge stream.  Edges older than
// watermark - retention_window are dropped on arrival and evicted from
// storage lazily (on neighborhood access) plus a periodic full sweep.
//
// Single-writer: all mutations come from one stream-processing thread.
class DynamicGraph {
public:
  explicit DynamicGraph(Timestamp retention_window = kInfiniteWindow,
                        std::uint64_t sweep_stride = 4096);

  // Indexes the edge in both adjacency directions, or drops it when it is
  // older than the retention window.  Throws TypeConflictError when an
  // endpoint re-declares a known vertex id with a different type label.
  InsertOutcome insert(const TimestampedEdge& edge);

  // All retained edges incident to vertex_id matching direction and the
  // optional edge-type filter, ordered by (timestamp, edge_key).  Unknown
  // vertex yields an empty list.  Returned pointers stay valid until the
  // next insert() or sweep.
  std::vector<const TimestampedEdge*> neighborhood(
      const std::string& vertex_id, Direction direction,
      const std::string* edge_type_filter = nullptr);

  // Retained in+out degree of a vertex (a self-loop counts twice).
  std::size_t degree(const std::string& vertex_id);

  // Snapshot of all retained edges, ordered by (timestamp, edge_key).
  std::vector<TimestampedEdge> retained_edges() const;

  // Type label a vertex id is bound to; nullptr when the id is unknown.
  const std::string* vertex_type(const std::string& vertex_id) const;

  Timestamp watermark() const { return watermark_; }
  Timestamp retention_window() const { return retention_window_; }
  std::uint64_t late_dropped() const { return late_dropped_; }
  std::size_t retained_edge_count() const { return edges_.size(); }

  // Raising the retention window is always sound; lowering it is not
  // supported once edges have been ingested.
  void set_retention_window(Timestamp window);

  // Drops every stored edge older than the retention cutoff.
  void sweep();

private:
  struct AdjRef {
    Timestamp t;
    EdgeKey key;
  };

  struct VertexEntry {
    std::string type_label;
    std::deque<AdjRef> out;
    std::deque<AdjRef> in;
  };

  Timestamp cutoff() const {
    return ever_inserted_ ? watermark_ - retention_window_
                          : std::numeric_limits<Timestamp>::min();
  }

  void bind_vertex_type(const VertexRef& v);
  void check_vertex_type(const VertexRef& v) const;
  static void insert_sorted(std::deque<AdjRef>& list, AdjRef ref);
  void prune_prefix(std::deque<AdjRef>& list) const;

  std::unordered_map<EdgeKey, TimestampedEdge> edges_;
  std::unordered_map<std::string, VertexEntry> vertices_;
  Timestamp watermark_ = 0;
  Timestamp retention_window_;
  bool ever_inserted_ = false;
  std::uint64_t late_dropped_ = 0;
  std::uint64_t sweep_stride_;
  std::uint64_t inserts_since_sweep_ = 0;
};

}  // namespace sgq

#endif  // SGQ_GRAPH_HPP
