#include "sgq/graph.hpp"

#include <algorithm>

namespace sgq {

TimeInterval interval_of(const std::vector<TimestampedEdge>& edges) {
  if (edges.empty())
    throw ContractError("interval_of: edge set must be nonempty");
  TimeInterval iv{edges.front().timestamp, edges.front().timestamp};
  for (const auto& e : edges) {
    iv.earliest = std::min(iv.earliest, e.timestamp);
    iv.latest = std::max(iv.latest, e.timestamp);
  }
  return iv;
}

DynamicGraph::DynamicGraph(Timestamp retention_window,
                           std::uint64_t sweep_stride)
    : retention_window_(retention_window),
      sweep_stride_(sweep_stride == 0 ? 1 : sweep_stride) {}

void DynamicGraph::check_vertex_type(const VertexRef& v) const {
  auto it = vertices_.find(v.id);
  if (it != vertices_.end() && it->second.type_label != v.type_label)
    throw TypeConflictError(v.id, it->second.type_label, v.type_label);
}

void DynamicGraph::bind_vertex_type(const VertexRef& v) {
  vertices_.try_emplace(v.id).first->second.type_label = v.type_label;
}

void DynamicGraph::insert_sorted(std::deque<AdjRef>& list, AdjRef ref) {
  // Streams are near-monotone: the common case is an append.
  if (list.empty() || list.back().t < ref.t ||
      (list.back().t == ref.t && list.back().key < ref.key)) {
    list.push_back(ref);
    return;
  }
  auto pos = std::upper_bound(
      list.begin(), list.end(), ref, [](const AdjRef& a, const AdjRef& b) {
        return a.t < b.t || (a.t == b.t && a.key < b.key);
      });
  list.insert(pos, ref);
}

InsertOutcome DynamicGraph::insert(const TimestampedEdge& edge) {
  if (edge.source.id.empty() || edge.target.id.empty())
    throw ContractError("insert: vertex id must be non-empty");
  if (edge.timestamp < 0)
    throw ContractError("insert: timestamp must be >= 0");

  // A conflicting re-declaration is an error even for a late edge.
  check_vertex_type(edge.source);
  check_vertex_type(edge.target);

  if (ever_inserted_ && edge.timestamp < watermark_ - retention_window_) {
    ++late_dropped_;
    return InsertOutcome::dropped_late;
  }

  bind_vertex_type(edge.source);
  bind_vertex_type(edge.target);

  edges_.emplace(edge.edge_key, edge);
  AdjRef ref{edge.timestamp, edge.edge_key};
  insert_sorted(vertices_[edge.source.id].out, ref);
  insert_sorted(vertices_[edge.target.id].in, ref);

  watermark_ = std::max(watermark_, edge.timestamp);
  ever_inserted_ = true;

  if (++inserts_since_sweep_ >= sweep_stride_) {
    inserts_since_sweep_ = 0;
    sweep();
  }
  return InsertOutcome::accepted;
}

void DynamicGraph::prune_prefix(std::deque<AdjRef>& list) const {
  const Timestamp cut = cutoff();
  while (!list.empty() && list.front().t < cut) list.pop_front();
}

std::vector<const TimestampedEdge*> DynamicGraph::neighborhood(
    const std::string& vertex_id, Direction direction,
    const std::string* edge_type_filter) {
  std::vector<const TimestampedEdge*> result;
  auto it = vertices_.find(vertex_id);
  if (it == vertices_.end()) return result;
  VertexEntry& entry = it->second;

  auto emit = [&](const AdjRef& ref) {
    auto eit = edges_.find(ref.key);
    if (eit == edges_.end()) return;  // swept central copy
    const TimestampedEdge& e = eit->second;
    if (edge_type_filter && e.edge_type != *edge_type_filter) return;
    result.push_back(&e);
  };

  switch (direction) {
    case Direction::out:
      prune_prefix(entry.out);
      for (const auto& ref : entry.out) emit(ref);
      break;
    case Direction::in:
      prune_prefix(entry.in);
      for (const auto& ref : entry.in) emit(ref);
      break;
    case Direction::both: {
      prune_prefix(entry.out);
      prune_prefix(entry.in);
      // Merge the two timestamp-ordered lists; a self-loop sits in both and
      // must appear once.
      std::size_t i = 0, j = 0;
      auto less = [](const AdjRef& a, const AdjRef& b) {
        return a.t < b.t || (a.t == b.t && a.key < b.key);
      };
      while (i < entry.out.size() || j < entry.in.size()) {
        if (i >= entry.out.size()) {
          emit(entry.in[j++]);
        } else if (j >= entry.in.size()) {
          emit(entry.out[i++]);
        } else if (entry.out[i].key == entry.in[j].key) {
          emit(entry.out[i++]);
          ++j;
        } else if (less(entry.out[i], entry.in[j])) {
          emit(entry.out[i++]);
        } else {
          emit(entry.in[j++]);
        }
      }
      break;
    }
  }
  return result;
}

std::size_t DynamicGraph::degree(const std::string& vertex_id) {
  auto it = vertices_.find(vertex_id);
  if (it == vertices_.end()) return 0;
  prune_prefix(it->second.out);
  prune_prefix(it->second.in);
  return it->second.out.size() + it->second.in.size();
}

std::vector<TimestampedEdge> DynamicGraph::retained_edges() const {
  std::vector<TimestampedEdge> result;
  const Timestamp cut = cutoff();
  result.reserve(edges_.size());
  for (const auto& [key, e] : edges_)
    if (e.timestamp >= cut) result.push_back(e);
  std::sort(result.begin(), result.end(),
            [](const TimestampedEdge& a, const TimestampedEdge& b) {
              return a.timestamp < b.timestamp ||
                     (a.timestamp == b.timestamp && a.edge_key < b.edge_key);
            });
  return result;
}

const std::string* DynamicGraph::vertex_type(
    const std::string& vertex_id) const {
  auto it = vertices_.find(vertex_id);
  return it == vertices_.end() ? nullptr : &it->second.type_label;
}

void DynamicGraph::set_retention_window(Timestamp window) {
  if (ever_inserted_ && window < retention_window_)
    throw UnsupportedOperationError(
        "retention window cannot shrink after ingestion started");
  retention_window_ = window;
}

void DynamicGraph::sweep() {
  const Timestamp cut = cutoff();
  std::erase_if(edges_,
                [cut](const auto& kv) { return kv.second.timestamp < cut; });
  for (auto& [id, entry] : vertices_) {
    prune_prefix(entry.out);
    prune_prefix(entry.in);
  }
}

}  // namespace sgq
