#include "sgq/engine.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sgq/errors.hpp"

namespace sgq {

namespace {

// Backtracking state for one leaf search.  Leaves hold at most a handful of
// edges, so plain ordered maps keep bindings sorted for free.
struct LeafSearch {
  DynamicGraph& graph;
  const QueryGraph& q;
  const std::vector<int>& leaf;
  std::int64_t window_ms;

  std::map<std::string, std::string> vertex_bind;   // qid -> data id
  std::set<std::string> bound_data_vertices;
  std::map<int, Match::BoundEdge> edge_bind;        // qeid -> bound edge
  std::set<EdgeKey> used_keys;
  Timestamp lo = 0, hi = 0;

  std::vector<Match>& out;

  bool bind_vertex(const std::string& qid, const std::string& data_id,
                   std::vector<std::string>& undo) {
    auto it = vertex_bind.find(qid);
    if (it != vertex_bind.end()) return it->second == data_id;
    if (bound_data_vertices.count(data_id)) return false;  // injectivity
    vertex_bind.emplace(qid, data_id);
    bound_data_vertices.insert(data_id);
    undo.push_back(qid);
    return true;
  }

  void unbind_vertices(const std::vector<std::string>& undo) {
    for (const auto& qid : undo) {
      auto it = vertex_bind.find(qid);
      bound_data_vertices.erase(it->second);
      vertex_bind.erase(it);
    }
  }

  // Attempts to extend the partial with (qeid -> data edge); recurses on
  // success.
  void try_extend(int qeid, const TimestampedEdge& data) {
    const QueryEdge& qe = q.edges[static_cast<std::size_t>(qeid)];
    if (used_keys.count(data.edge_key)) return;
    if (!edge_compatible(qe, q, data)) return;

    const Timestamp nlo = std::min(lo, data.timestamp);
    const Timestamp nhi = std::max(hi, data.timestamp);
    if (nhi - nlo >= window_ms) return;

    std::vector<std::string> undo;
    if (!bind_vertex(qe.source_qid, data.source.id, undo) ||
        !bind_vertex(qe.target_qid, data.target.id, undo)) {
      unbind_vertices(undo);
      return;
    }
    edge_bind.emplace(
        qeid, Match::BoundEdge{qeid, data.edge_key, data.timestamp,
                               data.edge_type});
    used_keys.insert(data.edge_key);
    const Timestamp olo = lo, ohi = hi;
    lo = nlo;
    hi = nhi;

    descend();

    lo = olo;
    hi = ohi;
    used_keys.erase(data.edge_key);
    edge_bind.erase(qeid);
    unbind_vertices(undo);
  }

  void descend() {
    if (edge_bind.size() == leaf.size()) {
      Match m;
      m.vertex_bindings.assign(vertex_bind.begin(), vertex_bind.end());
      for (const auto& [qeid, be] : edge_bind) m.edge_bindings.push_back(be);
      m.interval = {lo, hi};
      out.push_back(std::move(m));
      return;
    }
    // Next edge: the lowest unbound qeid with a bound endpoint.  Leaves are
    // connected, so one always exists.
    for (int qeid : leaf) {
      if (edge_bind.count(qeid)) continue;
      const QueryEdge& qe = q.edges[static_cast<std::size_t>(qeid)];
      auto src = vertex_bind.find(qe.source_qid);
      auto dst = vertex_bind.find(qe.target_qid);
      if (src == vertex_bind.end() && dst == vertex_bind.end()) continue;

      const std::string* filter =
          qe.edge_type == kWildcard ? nullptr : &qe.edge_type;
      // Walk from a bound endpoint in the matching direction; the other
      // endpoint is checked (or bound) by try_extend.
      if (src != vertex_bind.end()) {
        for (const TimestampedEdge* cand :
             graph.neighborhood(src->second, Direction::out, filter))
          try_extend(qeid, *cand);
      } else {
        for (const TimestampedEdge* cand :
             graph.neighborhood(dst->second, Direction::in, filter))
          try_extend(qeid, *cand);
      }
      return;
    }
    throw ContractError("local_search: leaf primitive is not connected");
  }
};

}  // namespace

std::vector<Match> local_search(DynamicGraph& graph, const QueryGraph& q,
                                const std::vector<int>& leaf_qeids,
                                const TimestampedEdge& seed,
                                std::int64_t window_ms) {
  std::vector<Match> out;
  for (int anchor : leaf_qeids) {
    LeafSearch search{graph, q, leaf_qeids, window_ms,
                      {}, {}, {}, {}, seed.timestamp, seed.timestamp, out};
    search.try_extend(anchor, seed);
  }
  return out;
}

Engine::Engine(EngineConfig config)
    : config_(config), graph_(0, config.sweep_stride) {}

QueryRuntime& Engine::register_query(const QueryGraph& q,
                                     const GraphStatistics& stats) {
  if (streaming_started_)
    throw UnsupportedOperationError(
        "register_query: cannot register after streaming started");
  DecompositionPlan plan = decompose(q, stats, config_.max_leaf_size);
  SJTree tree = build_sj_tree(plan, q);
  runtimes_.push_back(std::make_unique<QueryRuntime>(q, std::move(plan),
                                                     std::move(tree)));
  graph_.set_retention_window(
      std::max(graph_.retention_window(), Timestamp{q.window_ms}));
  return *runtimes_.back();
}

EmittedMatch make_emitted(const std::string& query_name, const QueryGraph& q,
                          const Match& m) {
  EmittedMatch em;
  em.query = query_name;
  em.completed_at = m.interval.latest;
  em.bindings = m.vertex_bindings;
  em.signature = m.signature();
  for (const auto& be : m.edge_bindings) {
    const QueryEdge& qe = q.edges[static_cast<std::size_t>(be.qeid)];
    EmittedMatch::Edge e;
    e.src = *m.vertex_of(qe.source_qid);
    e.dst = *m.vertex_of(qe.target_qid);
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

std::vector<EmittedMatch> Engine::process_edge(const TimestampedEdge& edge) {
  streaming_started_ = true;
  ++edges_processed_;

  const InsertOutcome outcome = graph_.insert(edge);

  // Scheduled expiry runs before matching so dead partials neither join
  // nor linger.
  if (config_.expiry_stride > 0 &&
      edges_processed_ % config_.expiry_stride == 0)
    for (auto& rt : runtimes_)
      rt->tree.expire(graph_.watermark(), rt->query.window_ms);

  if (outcome == InsertOutcome::dropped_late) return {};
  ++edges_accepted_;

  std::vector<EmittedMatch> out;
  for (auto& rt : runtimes_) {
    std::vector<Match> completions;
    const auto& leaf_ids = rt->tree.leaf_ids();
    for (std::size_t i = 0; i < leaf_ids.size(); ++i) {
      const auto& leaf_edges = rt->tree.node(leaf_ids[i]).query_edges;
      for (Match& m : local_search(graph_, rt->query, leaf_edges, edge,
                                   rt->query.window_ms)) {
        auto got = rt->tree.insert_and_propagate(leaf_ids[i], std::move(m),
                                                 rt->query.window_ms);
        for (auto& c : got) completions.push_back(std::move(c));
      }
    }
    rt->emitted += completions.size();
    for (const Match& c : completions)
      out.push_back(make_emitted(rt->query.name, rt->query, c));
  }
  emitted_total_ += out.size();
  std::sort(out.begin(), out.end(),
            [](const EmittedMatch& a, const EmittedMatch& b) {
              return std::tie(a.completed_at, a.signature, a.query) <
                     std::tie(b.completed_at, b.signature, b.query);
            });
  return out;
}

}  // namespace sgq
