#include "sgq/stats.hpp"

#include <algorithm>
#include <array>

#include <nlohmann/json.hpp>

#include "sgq/errors.hpp"

namespace sgq {

using nlohmann::json;

std::string degree_bucket(std::size_t degree) {
  if (degree <= 16) return std::to_string(degree);
  std::size_t hi = 32;
  while (hi < degree) hi *= 2;
  return std::to_string(hi / 2 + 1) + "-" + std::to_string(hi);
}

std::string wedge_signature(const std::string& a, const std::string& b) {
  return a <= b ? a + "|" + b : b + "|" + a;
}

std::string triangle_signature(const std::string& a, const std::string& b,
                               const std::string& c) {
  std::array<const std::string*, 3> t{&a, &b, &c};
  std::sort(t.begin(), t.end(),
            [](const std::string* x, const std::string* y) { return *x < *y; });
  return *t[0] + "|" + *t[1] + "|" + *t[2];
}

void StatisticsCollector::bump_degree(DynamicGraph& graph,
                                      const std::string& vertex_id) {
  const std::size_t now = graph.degree(vertex_id);
  auto it = accounted_degree_.find(vertex_id);
  if (it != accounted_degree_.end()) {
    auto bit = stats_.degree_histogram.find(degree_bucket(it->second));
    if (bit != stats_.degree_histogram.end() && bit->second > 0) --bit->second;
  }
  ++stats_.degree_histogram[degree_bucket(now)];
  accounted_degree_[vertex_id] = now;
}

void StatisticsCollector::on_edge_accepted(DynamicGraph& graph,
                                           const TimestampedEdge& edge) {
  ++stats_.total_edges;
  ++stats_.edge_type_counts[edge.edge_type];

  for (const VertexRef* v : {&edge.source, &edge.target})
    if (seen_vertices_.insert(v->id).second)
      ++stats_.vertex_type_counts[v->type_label];

  bump_degree(graph, edge.source.id);
  if (edge.target.id != edge.source.id) bump_degree(graph, edge.target.id);

  // Triads completed or extended by the new edge.  A self-loop spans one
  // vertex and forms none.
  const std::string& u = edge.source.id;
  const std::string& v = edge.target.id;
  if (u == v) return;

  // Wedges centered at u and at v: every retained edge sharing exactly that
  // endpoint, whose other endpoint is a third vertex.
  std::unordered_map<std::string, std::vector<const std::string*>> u_side;
  for (const TimestampedEdge* f : graph.neighborhood(u, Direction::both)) {
    if (f->edge_key == edge.edge_key) continue;
    const std::string& w = f->source.id == u ? f->target.id : f->source.id;
    if (w == u || w == v) continue;
    ++stats_.triad_census[wedge_signature(edge.edge_type, f->edge_type)];
    u_side[w].push_back(&f->edge_type);
  }
  for (const TimestampedEdge* g : graph.neighborhood(v, Direction::both)) {
    if (g->edge_key == edge.edge_key) continue;
    const std::string& w = g->source.id == v ? g->target.id : g->source.id;
    if (w == u || w == v) continue;
    ++stats_.triad_census[wedge_signature(edge.edge_type, g->edge_type)];
    // Triangles close through a common third vertex.
    auto it = u_side.find(w);
    if (it == u_side.end()) continue;
    for (const std::string* ft : it->second)
      ++stats_.triad_census[triangle_signature(edge.edge_type, *ft,
                                               g->edge_type)];
  }
}

double relative_frequency(const GraphStatistics& stats,
                          const std::string& edge_type) {
  if (edge_type == kWildcard) return 1.0;
  auto it = stats.edge_type_counts.find(edge_type);
  if (it == stats.edge_type_counts.end() || it->second == 0 ||
      stats.total_edges == 0)
    return 1.0 / static_cast<double>(stats.total_edges + 1);
  return static_cast<double>(it->second) /
         static_cast<double>(stats.total_edges);
}

double selectivity_score(const GraphStatistics& stats, const QueryGraph& q,
                         const std::vector<int>& subgraph_qeids) {
  if (subgraph_qeids.empty())
    throw ContractError("selectivity_score: subgraph must be nonempty");
  double score = 1.0;
  for (int qeid : subgraph_qeids) {
    if (qeid < 0 || static_cast<std::size_t>(qeid) >= q.edges.size())
      throw ContractError("selectivity_score: qeid out of range");
    score *= relative_frequency(stats, q.edges[qeid].edge_type);
  }
  return score;
}

namespace {

json counts_to_json(const std::map<std::string, std::uint64_t>& m) {
  json obj = json::object();
  for (const auto& [k, v] : m) obj[k] = v;
  return obj;
}

std::map<std::string, std::uint64_t> counts_from_json(const json& obj,
                                                      const char* field) {
  if (!obj.is_object())
    throw ParseError(std::string("stats: '") + field + "' must be an object");
  std::map<std::string, std::uint64_t> m;
  for (const auto& [k, v] : obj.items()) {
    if (!v.is_number_unsigned() && !v.is_number_integer())
      throw ParseError(std::string("stats: '") + field + "." + k +
                       "' must be a nonnegative integer");
    m[k] = v.get<std::uint64_t>();
  }
  return m;
}

}  // namespace

std::string stats_to_json(const GraphStatistics& stats) {
  json doc;
  doc["total_edges"] = stats.total_edges;
  doc["edge_type_counts"] = counts_to_json(stats.edge_type_counts);
  doc["vertex_type_counts"] = counts_to_json(stats.vertex_type_counts);
  doc["degree_histogram"] = counts_to_json(stats.degree_histogram);
  doc["triad_census"] = counts_to_json(stats.triad_census);
  return doc.dump(2);
}

GraphStatistics stats_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("stats: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("stats: top level must be an object");
  if (!doc.contains("total_edges"))
    throw ParseError("stats: missing 'total_edges'");
  GraphStatistics stats;
  stats.total_edges = doc["total_edges"].get<std::uint64_t>();
  stats.edge_type_counts =
      counts_from_json(doc.value("edge_type_counts", json::object()),
                       "edge_type_counts");
  stats.vertex_type_counts =
      counts_from_json(doc.value("vertex_type_counts", json::object()),
                       "vertex_type_counts");
  stats.degree_histogram = counts_from_json(
      doc.value("degree_histogram", json::object()), "degree_histogram");
  stats.triad_census =
      counts_from_json(doc.value("triad_census", json::object()),
                       "triad_census");
  std::uint64_t type_total = 0;
  for (const auto& [k, v] : stats.edge_type_counts) type_total += v;
  if (type_total != stats.total_edges)
    throw ParseError("stats: edge_type_counts sum to " +
                     std::to_string(type_total) + " but total_edges is " +
                     std::to_string(stats.total_edges));
  return stats;
}

}  // namespace sgq
