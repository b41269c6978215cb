#ifndef SGQ_GEN_HPP
#define SGQ_GEN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sgq/graph.hpp"
#include "sgq/query.hpp"

namespace sgq {

// Synthetic stream generator for the test harness: uniform noise over a
// small vertex pool plus optional planted pattern instances, timestamps
// nondecreasing.  Same seed, same stream, on any platform (no
// distribution-library randomness).
struct GenConfig {
  std::uint64_t seed = 1;
  int noise_edges = 200;
  int vertex_pool = 40;
  std::vector<std::string> edge_types = {"x", "y", "z"};
  std::string vertex_type = "node";
  Timestamp start_t = 1000;
  Timestamp max_step = 20;  // per-record timestamp increment in [0, max_step]

  // Planted instances: each occupies a contiguous run of records whose
  // edges realize the pattern on injectively chosen pool vertices.
  const QueryGraph* plant = nullptr;
  int instances = 0;
};

std::vector<TimestampedEdge> generate_stream(const GenConfig& cfg);

}  // namespace sgq

#endif  // SGQ_GEN_HPP
