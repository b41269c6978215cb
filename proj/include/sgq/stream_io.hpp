#ifndef SGQ_STREAM_IO_HPP
#define SGQ_STREAM_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sgq/engine.hpp"
#include "sgq/graph.hpp"

namespace sgq {

// Stream files are newline-delimited JSON, one edge per line:
//   {"t": <int ms>, "src": ..., "src_type": ..., "dst": ..., "dst_type": ...,
//    "etype": ..., "attrs": {<string map, optional>}}
// edge_key is the 0-based line ordinal.  Blank or malformed lines raise
// ParseError naming the 1-based line.
TimestampedEdge parse_stream_line(const std::string& line, std::uint64_t lineno,
                                  EdgeKey key);

// Incremental reader over an open stream; next() yields records in file
// order until EOF.
class StreamReader {
public:
  explicit StreamReader(std::istream& in) : in_(in) {}

  std::optional<TimestampedEdge> next();
  std::uint64_t line() const { return line_; }  // 1-based, last record read

private:
  std::istream& in_;
  std::uint64_t line_ = 0;
  EdgeKey next_key_ = 0;
};

// Whole-file convenience; throws ParseError (with line) on any bad record.
std::vector<TimestampedEdge> read_stream_file(const std::string& path);

// One emission as a single NDJSON line (no trailing newline):
//   {"query","completed_at","bindings":{qid: vertex},"edges":[{"src","dst",
//    "etype","t","edge_key"}...]}
// Key order is fixed, so identical emissions are byte-identical.
std::string emission_to_json(const EmittedMatch& em);

void write_emissions(std::ostream& out, const std::vector<EmittedMatch>& ems);

}  // namespace sgq

#endif  // SGQ_STREAM_IO_HPP
