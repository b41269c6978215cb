#include "sgq/oracle.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "sgq/errors.hpp"

namespace sgq {

std::string OracleMatch::signature() const {
  std::string s;
  for (const auto& be : edge_bindings) {
    if (!s.empty()) s += '|';
    s += std::to_string(be.qeid);
    s += ':';
    s += std::to_string(be.key);
  }
  return s;
}

std::set<std::string> OracleResult::signatures() const {
  std::set<std::string> out;
  for (const auto& m : matches) out.insert(m.signature());
  return out;
}

bool OracleResult::contains(const std::string& sig) const {
  return std::any_of(matches.begin(), matches.end(),
                     [&](const OracleMatch& m) { return m.signature() == sig; });
}

namespace {

struct Enumerator {
  const QueryGraph& q;
  const std::vector<TimestampedEdge>& stream;

  // Candidate narrowing when an endpoint is already bound; plain full scans
  // otherwise.
  std::unordered_map<std::string, std::vector<const TimestampedEdge*>>
      by_source, by_target;
  std::vector<const TimestampedEdge*> all;

  std::map<std::string, std::string> vbind;      // qid -> data id
  std::unordered_set<std::string> used_vertices;
  std::unordered_set<EdgeKey> used_keys;
  std::vector<OracleMatch::BoundEdge> chosen;    // index == qeid
  Timestamp lo = 0, hi = 0;

  std::uint64_t steps = 0;
  std::vector<OracleMatch> found;

  explicit Enumerator(const QueryGraph& query,
                      const std::vector<TimestampedEdge>& s)
      : q(query), stream(s) {
    for (const auto& e : s) {
      all.push_back(&e);
      by_source[e.source.id].push_back(&e);
      by_target[e.target.id].push_back(&e);
    }
  }

  static bool type_ok(const std::string& want, const std::string& got) {
    return want == kWildcard || want == got;
  }

  void run() {
    chosen.clear();
    assign(0);
  }

  void assign(std::size_t qi) {
    if (qi == q.edges.size()) {
      record();
      return;
    }
    if (++steps > kOracleStepBudget)
      throw OversizeError("oracle: step budget exceeded");

    const QueryEdge& qe = q.edges[qi];
    auto src_it = vbind.find(qe.source_qid);
    auto dst_it = vbind.find(qe.target_qid);

    const std::vector<const TimestampedEdge*>* pool = &all;
    if (src_it != vbind.end()) {
      auto b = by_source.find(src_it->second);
      if (b == by_source.end()) return;
      pool = &b->second;
    } else if (dst_it != vbind.end()) {
      auto b = by_target.find(dst_it->second);
      if (b == by_target.end()) return;
      pool = &b->second;
    }

    for (const TimestampedEdge* e : *pool) {
      if (++steps > kOracleStepBudget)
        throw OversizeError("oracle: step budget exceeded");
      if (used_keys.count(e->edge_key)) continue;
      if (!type_ok(qe.edge_type, e->edge_type)) continue;
      if (!type_ok(q.vertex_type_of(qe.source_qid), e->source.type_label))
        continue;
      if (!type_ok(q.vertex_type_of(qe.target_qid), e->target.type_label))
        continue;

      const Timestamp nlo = chosen.empty() ? e->timestamp
                                           : std::min(lo, e->timestamp);
      const Timestamp nhi = chosen.empty() ? e->timestamp
                                           : std::max(hi, e->timestamp);
      if (nhi - nlo >= q.window_ms) continue;

      int bound_here = 0;  // 1 = src, 2 = dst, 3 = both
      if (src_it != vbind.end()) {
        if (src_it->second != e->source.id) continue;
      } else {
        if (used_vertices.count(e->source.id)) continue;
        vbind.emplace(qe.source_qid, e->source.id);
        used_vertices.insert(e->source.id);
        bound_here |= 1;
      }
      // Re-find dst: binding src above may have bound the same qid when
      // source_qid == target_qid is impossible (validated), but a fresh
      // lookup keeps the logic obviously right.
      auto dst_now = vbind.find(qe.target_qid);
      bool dst_ok = true;
      if (dst_now != vbind.end()) {
        dst_ok = dst_now->second == e->target.id;
      } else if (used_vertices.count(e->target.id)) {
        dst_ok = false;
      } else {
        vbind.emplace(qe.target_qid, e->target.id);
        used_vertices.insert(e->target.id);
        bound_here |= 2;
      }

      if (dst_ok) {
        used_keys.insert(e->edge_key);
        chosen.push_back(OracleMatch::BoundEdge{
            static_cast<int>(qi), e->edge_key, e->timestamp, e->edge_type});
        const Timestamp olo = lo, ohi = hi;
        lo = nlo;
        hi = nhi;

        assign(qi + 1);

        lo = olo;
        hi = ohi;
        chosen.pop_back();
        used_keys.erase(e->edge_key);
      }

      if (bound_here & 2) {
        used_vertices.erase(e->target.id);
        vbind.erase(qe.target_qid);
      }
      if (bound_here & 1) {
        used_vertices.erase(e->source.id);
        vbind.erase(qe.source_qid);
      }
    }
  }

  void record() {
    OracleMatch m;
    m.vertex_bindings.assign(vbind.begin(), vbind.end());
    m.edge_bindings = chosen;
    Timestamp mlo = chosen.front().t, mhi = chosen.front().t;
    for (const auto& be : chosen) {
      mlo = std::min(mlo, be.t);
      mhi = std::max(mhi, be.t);
    }
    m.interval = {mlo, mhi};
    found.push_back(std::move(m));
  }
};

}  // namespace

OracleResult oracle_windowed_matches(const std::vector<TimestampedEdge>& stream,
                                     const QueryGraph& q) {
  if (stream.size() > kOracleMaxStreamEdges)
    throw OversizeError("oracle: stream exceeds " +
                        std::to_string(kOracleMaxStreamEdges) + " edges");
  if (q.edges.size() > kOracleMaxQueryEdges)
    throw OversizeError("oracle: query exceeds " +
                        std::to_string(kOracleMaxQueryEdges) + " edges");
  {
    std::unordered_set<EdgeKey> keys;
    for (const auto& e : stream)
      if (!keys.insert(e.edge_key).second)
        throw ContractError("oracle: duplicate edge_key " +
                            std::to_string(e.edge_key));
  }

  Enumerator en(q, stream);
  en.run();
  std::sort(en.found.begin(), en.found.end(),
            [](const OracleMatch& a, const OracleMatch& b) {
              return a.signature() < b.signature();
            });
  OracleResult out;
  out.matches = std::move(en.found);
  return out;
}

OracleResult oracle_incremental_diff(const std::vector<TimestampedEdge>& stream,
                                     const QueryGraph& q, std::size_t k) {
  if (k < 1 || k > stream.size())
    throw ContractError("oracle_incremental_diff: k out of range");
  std::vector<TimestampedEdge> upto(stream.begin(),
                                    stream.begin() + static_cast<long>(k));
  OracleResult full = oracle_windowed_matches(upto, q);
  upto.pop_back();
  OracleResult prev = oracle_windowed_matches(upto, q);
  const auto seen = prev.signatures();
  OracleResult out;
  for (auto& m : full.matches)
    if (!seen.count(m.signature())) out.matches.push_back(std::move(m));
  return out;
}

}  // namespace sgq
