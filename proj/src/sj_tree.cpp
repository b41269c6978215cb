#include "sgq/sj_tree.hpp"

#include <algorithm>

#include "sgq/errors.hpp"

namespace sgq {

const std::string* Match::vertex_of(const std::string& qid) const {
  auto it = std::lower_bound(
      vertex_bindings.begin(), vertex_bindings.end(), qid,
      [](const auto& pair, const std::string& key) { return pair.first < key; });
  if (it == vertex_bindings.end() || it->first != qid) return nullptr;
  return &it->second;
}

std::string Match::signature() const {
  std::string sig;
  for (const auto& be : edge_bindings) {
    if (!sig.empty()) sig += '|';
    sig += std::to_string(be.qeid);
    sig += ':';
    sig += std::to_string(be.key);
  }
  return sig;
}

JoinResult join_matches(const Match& left, const Match& right,
                        const std::vector<std::string>& cut_vertices,
                        std::int64_t window_ms) {
  // Cut agreement first: every shared qid must bind the same data vertex.
  for (const auto& qid : cut_vertices) {
    const std::string* lv = left.vertex_of(qid);
    const std::string* rv = right.vertex_of(qid);
    if (lv && rv && *lv != *rv) return {std::nullopt, JoinReject::cut_mismatch};
  }

  Match merged;
  merged.vertex_bindings.reserve(left.vertex_bindings.size() +
                                 right.vertex_bindings.size());
  {
    // Merge two qid-sorted binding lists, checking agreement on shared qids
    // and injectivity of the merged map.
    std::size_t i = 0, j = 0;
    const auto& lv = left.vertex_bindings;
    const auto& rv = right.vertex_bindings;
    while (i < lv.size() || j < rv.size()) {
      if (i < lv.size() && j < rv.size() && lv[i].first == rv[j].first) {
        if (lv[i].second != rv[j].second)
          return {std::nullopt, JoinReject::cut_mismatch};
        merged.vertex_bindings.push_back(lv[i]);
        ++i;
        ++j;
      } else if (j >= rv.size() ||
                 (i < lv.size() && lv[i].first < rv[j].first)) {
        merged.vertex_bindings.push_back(lv[i++]);
      } else {
        merged.vertex_bindings.push_back(rv[j++]);
      }
    }
    std::vector<const std::string*> values;
    values.reserve(merged.vertex_bindings.size());
    for (const auto& [qid, vid] : merged.vertex_bindings)
      values.push_back(&vid);
    std::sort(values.begin(), values.end(),
              [](const std::string* a, const std::string* b) { return *a < *b; });
    for (std::size_t k = 1; k < values.size(); ++k)
      if (*values[k - 1] == *values[k])
        return {std::nullopt, JoinReject::injectivity};
  }

  merged.edge_bindings.reserve(left.edge_bindings.size() +
                               right.edge_bindings.size());
  {
    std::size_t i = 0, j = 0;
    const auto& le = left.edge_bindings;
    const auto& re = right.edge_bindings;
    while (i < le.size() || j < re.size()) {
      if (j >= re.size() || (i < le.size() && le[i].qeid < re[j].qeid))
        merged.edge_bindings.push_back(le[i++]);
      else
        merged.edge_bindings.push_back(re[j++]);
    }
    std::vector<EdgeKey> keys;
    keys.reserve(merged.edge_bindings.size());
    for (const auto& be : merged.edge_bindings) keys.push_back(be.key);
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
      return {std::nullopt, JoinReject::injectivity};
  }

  merged.interval = TimeInterval::merged(left.interval, right.interval);
  if (merged.interval.span() >= window_ms)
    return {std::nullopt, JoinReject::window};
  return {std::move(merged), std::nullopt};
}

std::size_t SJTreeNode::table_size() const {
  std::size_t total = 0;
  for (const auto& [key, bucket] : match_table) total += bucket.size();
  return total;
}

SJTree::SJTree(std::vector<SJTreeNode> nodes) : nodes_(std::move(nodes)) {
  for (const auto& n : nodes_) {
    if (n.id < 0 || static_cast<std::size_t>(n.id) >= nodes_.size() ||
        nodes_[n.id].id != n.id)
      throw ContractError("SJTree: node ids must be dense and self-indexed");
    if (n.is_root()) {
      if (root_id_ >= 0) throw ContractError("SJTree: multiple roots");
      root_id_ = n.id;
    }
  }
  if (root_id_ < 0) throw ContractError("SJTree: no root node");
  for (const auto& n : nodes_)
    if (n.is_leaf()) leaf_ids_.push_back(n.id);
}

const SJTreeNode& SJTree::node(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
    throw ContractError("SJTree: unknown node id " + std::to_string(id));
  return nodes_[id];
}

std::string SJTree::join_key(const SJTreeNode& node, const Match& m) const {
  // Key over the PARENT's cut vertices, sorted qid order.  Collisions from
  // exotic vertex ids are harmless: join_matches re-checks cut agreement.
  const SJTreeNode& parent = nodes_[node.parent];
  std::string key;
  for (const auto& qid : parent.cut_vertices) {
    const std::string* vid = m.vertex_of(qid);
    if (!vid)
      throw ContractError("join key: match does not bind cut vertex '" + qid +
                          "'");
    key += qid;
    key += '=';
    key += *vid;
    key += '|';
  }
  return key;
}

std::vector<Match> SJTree::insert_and_propagate(int node_id, Match m,
                                                std::int64_t window_ms) {
  if (node_id < 0 || static_cast<std::size_t>(node_id) >= nodes_.size())
    throw ContractError("insert_and_propagate: unknown node id " +
                        std::to_string(node_id));
  std::vector<Match> completions;
  propagate(node_id, std::move(m), window_ms, completions);
  return completions;
}

void SJTree::propagate(int node_id, Match&& m, std::int64_t window_ms,
                       std::vector<Match>& completions) {
  SJTreeNode& n = nodes_[node_id];
  if (n.is_root()) {
    // Complete match: reported, never stored.
    ++completions_;
    completions.push_back(std::move(m));
    return;
  }
  if (!n.dedup_index.insert(m.signature()).second) {
    ++n.duplicates_dropped;
    return;
  }

  const std::string key = join_key(n, m);
  SJTreeNode& parent = nodes_[n.parent];
  const int sibling_id = parent.left == node_id ? parent.right : parent.left;
  SJTreeNode& sibling = nodes_[sibling_id];

  n.match_table[key].push_back(m);
  ++n.stored;

  auto it = sibling.match_table.find(key);
  if (it == sibling.match_table.end()) return;
  // Propagation only ever touches ancestors, so the sibling bucket is
  // stable while we scan it.
  const bool m_is_left = parent.left == node_id;
  for (std::size_t i = 0; i < it->second.size(); ++i) {
    const Match& other = it->second[i];
    JoinResult joined = m_is_left
                            ? join_matches(m, other, parent.cut_vertices,
                                           window_ms)
                            : join_matches(other, m, parent.cut_vertices,
                                           window_ms);
    if (joined.ok()) {
      propagate(n.parent, std::move(*joined.match), window_ms, completions);
      continue;
    }
    switch (*joined.reject) {
      case JoinReject::cut_mismatch: ++parent.rejected_cut; break;
      case JoinReject::injectivity: ++parent.rejected_injectivity; break;
      case JoinReject::window: ++parent.rejected_window; break;
    }
  }
}

std::size_t SJTree::expire(Timestamp watermark, std::int64_t window_ms) {
  const Timestamp cut = watermark - window_ms;
  std::size_t total = 0;
  for (auto& n : nodes_) {
    for (auto it = n.match_table.begin(); it != n.match_table.end();) {
      auto& bucket = it->second;
      auto dead = std::stable_partition(
          bucket.begin(), bucket.end(),
          [cut](const Match& m) { return m.interval.earliest > cut; });
      for (auto d = dead; d != bucket.end(); ++d) {
        n.dedup_index.erase(d->signature());
        ++n.evicted;
        ++total;
      }
      bucket.erase(dead, bucket.end());
      it = bucket.empty() ? n.match_table.erase(it) : std::next(it);
    }
  }
  return total;
}

std::size_t SJTree::total_table_size() const {
  std::size_t total = 0;
  for (const auto& n : nodes_) total += n.table_size();
  return total;
}

void SJTree::validate(const QueryGraph& q) const {
  for (const auto& n : nodes_) {
    std::size_t seen = 0;
    std::unordered_set<std::string> signatures;
    for (const auto& [key, bucket] : n.match_table) {
      for (const Match& m : bucket) {
        ++seen;
        if (m.edge_bindings.empty())
          throw ContractError("validate: empty match at node " +
                              std::to_string(n.id));
        if (!signatures.insert(m.signature()).second)
          throw ContractError("validate: duplicate signature at node " +
                              std::to_string(n.id));
        // Bound edge set must equal the node's subgraph.
        std::vector<int> qeids;
        for (const auto& be : m.edge_bindings) qeids.push_back(be.qeid);
        if (qeids != n.query_edges)
          throw ContractError("validate: match edges != node subgraph at node " +
                              std::to_string(n.id));
        // Vertex bindings: sorted, covering the subgraph vertices, injective.
        std::vector<std::string> qids;
        std::unordered_set<std::string> data_ids;
        for (const auto& [qid, vid] : m.vertex_bindings) {
          qids.push_back(qid);
          if (!data_ids.insert(vid).second)
            throw ContractError(
                "validate: vertex bindings not injective at node " +
                std::to_string(n.id));
        }
        if (qids != n.subgraph_vertices)
          throw ContractError(
              "validate: match vertices != node subgraph at node " +
              std::to_string(n.id));
        // Endpoint consistency and interval integrity.
        Timestamp lo = m.edge_bindings.front().t;
        Timestamp hi = lo;
        std::unordered_set<EdgeKey> keys;
        for (const auto& be : m.edge_bindings) {
          lo = std::min(lo, be.t);
          hi = std::max(hi, be.t);
          if (!keys.insert(be.key).second)
            throw ContractError(
                "validate: edge bindings not injective at node " +
                std::to_string(n.id));
          const QueryEdge& qe = q.edges.at(static_cast<std::size_t>(be.qeid));
          if (!m.vertex_of(qe.source_qid) || !m.vertex_of(qe.target_qid))
            throw ContractError(
                "validate: bound edge endpoint not bound at node " +
                std::to_string(n.id));
          if (qe.edge_type != kWildcard && qe.edge_type != be.etype)
            throw ContractError("validate: edge type mismatch at node " +
                                std::to_string(n.id));
        }
        if (m.interval != TimeInterval{lo, hi})
          throw ContractError("validate: interval mismatch at node " +
                              std::to_string(n.id));
      }
    }
    if (seen != signatures.size() || seen != n.dedup_index.size())
      throw ContractError("validate: dedup index out of sync at node " +
                          std::to_string(n.id));
  }
}

}  // namespace sgq
