#include "sgq/query.hpp"

#include <queue>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "sgq/errors.hpp"

namespace sgq {

using nlohmann::json;

const QueryVertex* QueryGraph::find_vertex(const std::string& qid) const {
  for (const auto& v : vertices)
    if (v.qid == qid) return &v;
  return nullptr;
}

const std::string& QueryGraph::vertex_type_of(const std::string& qid) const {
  const QueryVertex* v = find_vertex(qid);
  if (!v) throw ContractError("unknown query vertex '" + qid + "'");
  return v->type_label;
}

namespace {

void validate(const QueryGraph& q) {
  if (q.name.empty()) throw ParseError("query: 'name' must be non-empty");
  if (q.window_ms <= 0)
    throw ParseError("query '" + q.name + "': 'window_ms' must be positive");
  if (q.vertices.empty())
    throw ParseError("query '" + q.name + "': no vertices declared");
  if (q.edges.empty())
    throw ParseError("query '" + q.name + "': at least one edge is required");

  std::unordered_set<std::string> qids;
  for (const auto& v : q.vertices) {
    if (v.qid.empty())
      throw ParseError("query '" + q.name + "': vertex qid must be non-empty");
    if (v.type_label.empty())
      throw ParseError("query '" + q.name + "': vertex '" + v.qid +
                       "' has an empty type (use \"*\" for any)");
    if (!qids.insert(v.qid).second)
      throw ParseError("query '" + q.name + "': duplicate qid '" + v.qid + "'");
  }

  std::unordered_map<std::string, std::vector<std::string>> skeleton;
  for (const auto& e : q.edges) {
    for (const std::string* qid : {&e.source_qid, &e.target_qid})
      if (!qids.count(*qid))
        throw ParseError("query '" + q.name + "': edge " +
                         std::to_string(e.qeid) +
                         " references undeclared qid '" + *qid + "'");
    if (e.source_qid == e.target_qid)
      throw ParseError("query '" + q.name + "': edge " +
                       std::to_string(e.qeid) + " is a self-loop on '" +
                       e.source_qid + "' (not supported)");
    if (e.edge_type.empty())
      throw ParseError("query '" + q.name + "': edge " +
                       std::to_string(e.qeid) +
                       " has an empty etype (use \"*\" for any)");
    skeleton[e.source_qid].push_back(e.target_qid);
    skeleton[e.target_qid].push_back(e.source_qid);
  }

  // The undirected skeleton must be connected.
  std::unordered_set<std::string> reached;
  std::queue<std::string> frontier;
  frontier.push(q.vertices.front().qid);
  reached.insert(q.vertices.front().qid);
  while (!frontier.empty()) {
    std::string cur = frontier.front();
    frontier.pop();
    for (const auto& next : skeleton[cur])
      if (reached.insert(next).second) frontier.push(next);
  }
  for (const auto& v : q.vertices)
    if (!reached.count(v.qid))
      throw ParseError("query '" + q.name + "': disconnected pattern (vertex '" +
                       v.qid + "' unreachable from '" +
                       q.vertices.front().qid + "')");
}

std::string require_string(const json& obj, const char* key,
                           const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_string())
    throw ParseError(where + ": missing or non-string '" + key + "'");
  return obj[key].get<std::string>();
}

}  // namespace

QueryGraph parse_query(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("query: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("query: top level must be an object");

  QueryGraph q;
  q.name = require_string(doc, "name", "query");
  if (!doc.contains("window_ms") || !doc["window_ms"].is_number_integer())
    throw ParseError("query '" + q.name +
                     "': missing or non-integer 'window_ms'");
  q.window_ms = doc["window_ms"].get<std::int64_t>();

  if (!doc.contains("vertices") || !doc["vertices"].is_array())
    throw ParseError("query '" + q.name + "': 'vertices' must be an array");
  for (const auto& jv : doc["vertices"]) {
    QueryVertex v;
    v.qid = require_string(jv, "qid", "query '" + q.name + "' vertex");
    v.type_label = require_string(jv, "type", "query '" + q.name + "' vertex");
    q.vertices.push_back(std::move(v));
  }

  if (!doc.contains("edges") || !doc["edges"].is_array())
    throw ParseError("query '" + q.name + "': 'edges' must be an array");
  int qeid = 0;
  for (const auto& je : doc["edges"]) {
    QueryEdge e;
    e.qeid = qeid;
    const std::string where =
        "query '" + q.name + "' edge " + std::to_string(qeid);
    e.source_qid = require_string(je, "src", where);
    e.target_qid = require_string(je, "dst", where);
    e.edge_type = require_string(je, "etype", where);
    q.edges.push_back(std::move(e));
    ++qeid;
  }

  validate(q);
  return q;
}

std::string serialize_query(const QueryGraph& q) {
  json doc;
  doc["name"] = q.name;
  doc["window_ms"] = q.window_ms;
  doc["vertices"] = json::array();
  for (const auto& v : q.vertices)
    doc["vertices"].push_back({{"qid", v.qid}, {"type", v.type_label}});
  doc["edges"] = json::array();
  for (const auto& e : q.edges)
    doc["edges"].push_back(
        {{"src", e.source_qid}, {"dst", e.target_qid}, {"etype", e.edge_type}});
  return doc.dump(2);
}

bool edge_compatible(const QueryEdge& query_edge, const QueryGraph& q,
                     const TimestampedEdge& data_edge) {
  auto type_ok = [](const std::string& want, const std::string& have) {
    return want == kWildcard || want == have;
  };
  return type_ok(query_edge.edge_type, data_edge.edge_type) &&
         type_ok(q.vertex_type_of(query_edge.source_qid),
                 data_edge.source.type_label) &&
         type_ok(q.vertex_type_of(query_edge.target_qid),
                 data_edge.target.type_label);
}

}  // namespace sgq
