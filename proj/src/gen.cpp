#include "sgq/gen.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "sgq/errors.hpp"

namespace sgq {

namespace {

// mt19937_64 output is standardized; modulo keeps draws portable where
// std::uniform_int_distribution is not.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) {
  return n == 0 ? 0 : rng() % n;
}

std::string pool_vertex(int i) { return "v" + std::to_string(i); }

struct PendingEdge {
  std::string src, dst, etype;
};

// One planted instance: an injective qid -> pool vertex assignment and the
// pattern's edges in a shuffled order.
std::vector<PendingEdge> make_instance(const QueryGraph& q, const GenConfig& c,
                                       std::mt19937_64& rng) {
  std::vector<int> pool(static_cast<std::size_t>(c.vertex_pool));
  for (int i = 0; i < c.vertex_pool; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (std::size_t i = pool.size(); i > 1; --i)
    std::swap(pool[i - 1], pool[draw(rng, i)]);

  std::map<std::string, std::string> assign;
  std::size_t next = 0;
  for (const auto& v : q.vertices) assign[v.qid] = pool_vertex(pool[next++]);

  std::vector<PendingEdge> edges;
  for (const auto& qe : q.edges) {
    PendingEdge pe;
    pe.src = assign[qe.source_qid];
    pe.dst = assign[qe.target_qid];
    pe.etype = qe.edge_type == kWildcard
                   ? c.edge_types[draw(rng, c.edge_types.size())]
                   : qe.edge_type;
    edges.push_back(std::move(pe));
  }
  for (std::size_t i = edges.size(); i > 1; --i)
    std::swap(edges[i - 1], edges[draw(rng, i)]);
  return edges;
}

}  // namespace

std::vector<TimestampedEdge> generate_stream(const GenConfig& cfg) {
  if (cfg.vertex_pool < 1 || cfg.edge_types.empty() || cfg.noise_edges < 0 ||
      cfg.instances < 0 || cfg.max_step < 0 || cfg.start_t < 0)
    throw ContractError("generate_stream: bad config");
  if (cfg.instances > 0 && cfg.plant == nullptr)
    throw ContractError("generate_stream: instances without a pattern");
  if (cfg.plant != nullptr &&
      cfg.plant->vertices.size() > static_cast<std::size_t>(cfg.vertex_pool))
    throw ContractError("generate_stream: pattern larger than vertex pool");

  std::mt19937_64 rng(cfg.seed);

  // Token list: noise placeholders, then each instance's edges spliced in
  // as a contiguous run at a random offset.
  std::vector<PendingEdge> tokens;
  tokens.reserve(static_cast<std::size_t>(cfg.noise_edges));
  for (int i = 0; i < cfg.noise_edges; ++i) {
    PendingEdge pe;
    pe.src = pool_vertex(static_cast<int>(
        draw(rng, static_cast<std::uint64_t>(cfg.vertex_pool))));
    pe.dst = pool_vertex(static_cast<int>(
        draw(rng, static_cast<std::uint64_t>(cfg.vertex_pool))));
    pe.etype = cfg.edge_types[draw(rng, cfg.edge_types.size())];
    tokens.push_back(std::move(pe));
  }
  for (int i = 0; i < cfg.instances; ++i) {
    auto inst = make_instance(*cfg.plant, cfg, rng);
    const auto at = static_cast<std::ptrdiff_t>(draw(rng, tokens.size() + 1));
    tokens.insert(tokens.begin() + at,
                  std::make_move_iterator(inst.begin()),
                  std::make_move_iterator(inst.end()));
  }

  std::vector<TimestampedEdge> out;
  out.reserve(tokens.size());
  Timestamp t = cfg.start_t;
  EdgeKey key = 0;
  for (auto& tok : tokens) {
    t += static_cast<Timestamp>(
        draw(rng, static_cast<std::uint64_t>(cfg.max_step) + 1));
    TimestampedEdge e;
    e.source = {std::move(tok.src), cfg.vertex_type};
    e.target = {std::move(tok.dst), cfg.vertex_type};
    e.edge_type = std::move(tok.etype);
    e.timestamp = t;
    e.edge_key = key++;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace sgq
