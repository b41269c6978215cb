#include "sgq/stream_io.hpp"

#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>

#include "sgq/errors.hpp"

namespace sgq {

namespace {

std::string need_string(const nlohmann::json& obj, const char* key,
                        std::uint64_t lineno) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string() ||
      it->get_ref<const std::string&>().empty())
    throw ParseError(std::string("missing or invalid \"") + key + "\"",
                     lineno);
  return it->get<std::string>();
}

}  // namespace

TimestampedEdge parse_stream_line(const std::string& line, std::uint64_t lineno,
                                  EdgeKey key) {
  if (line.find_first_not_of(" \t\r") == std::string::npos)
    throw ParseError("blank line in edge stream", lineno);

  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("bad JSON: ") + e.what(), lineno);
  }
  if (!obj.is_object())
    throw ParseError("edge record is not a JSON object", lineno);

  TimestampedEdge e;
  auto t_it = obj.find("t");
  if (t_it == obj.end() || !t_it->is_number_integer())
    throw ParseError("missing or non-integer \"t\"", lineno);
  e.timestamp = t_it->get<Timestamp>();
  if (e.timestamp < 0) throw ParseError("negative \"t\"", lineno);

  e.source.id = need_string(obj, "src", lineno);
  e.source.type_label = need_string(obj, "src_type", lineno);
  e.target.id = need_string(obj, "dst", lineno);
  e.target.type_label = need_string(obj, "dst_type", lineno);
  e.edge_type = need_string(obj, "etype", lineno);

  if (auto a = obj.find("attrs"); a != obj.end()) {
    if (!a->is_object())
      throw ParseError("\"attrs\" is not an object", lineno);
    for (const auto& [k, v] : a->items()) {
      if (!v.is_string())
        throw ParseError("\"attrs\" value for \"" + k + "\" is not a string",
                         lineno);
      e.attributes.emplace(k, v.get<std::string>());
    }
  }
  e.edge_key = key;
  return e;
}

std::optional<TimestampedEdge> StreamReader::next() {
  std::string line;
  if (!std::getline(in_, line)) return std::nullopt;
  ++line_;
  return parse_stream_line(line, line_, next_key_++);
}

std::vector<TimestampedEdge> read_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open stream file: " + path);
  StreamReader reader(in);
  std::vector<TimestampedEdge> out;
  while (auto e = reader.next()) out.push_back(std::move(*e));
  return out;
}

std::string emission_to_json(const EmittedMatch& em) {
  nlohmann::ordered_json obj;
  obj["query"] = em.query;
  obj["completed_at"] = em.completed_at;
  nlohmann::ordered_json bindings = nlohmann::ordered_json::object();
  for (const auto& [qid, vid] : em.bindings) bindings[qid] = vid;
  obj["bindings"] = std::move(bindings);
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& e : em.edges) {
    nlohmann::ordered_json je;
    je["src"] = e.src;
    je["dst"] = e.dst;
    je["etype"] = e.etype;
    je["t"] = e.t;
    je["edge_key"] = e.edge_key;
    edges.push_back(std::move(je));
  }
  obj["edges"] = std::move(edges);
  return obj.dump();
}

void write_emissions(std::ostream& out, const std::vector<EmittedMatch>& ems) {
  for (const auto& em : ems) out << emission_to_json(em) << '\n';
}

}  // namespace sgq
