#ifndef SGQ_ERRORS_HPP
#define SGQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sgq {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A vertex id was re-declared with a different type label.
class TypeConflictError : public Error {
public:
  TypeConflictError(const std::string& vertex_id, const std::string& declared,
                    const std::string& incoming)
      : Error("type conflict for vertex '" + vertex_id + "': declared '" +
              declared + "', edge carries '" + incoming + "'"),
        vertex_id_(vertex_id) {}

  const std::string& vertex_id() const { return vertex_id_; }

private:
  std::string vertex_id_;
};

// Malformed input file (query JSON, stream line, stats file).  line() is
// 1-based and 0 when no line applies.
class ParseError : public Error {
public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_ = 0;
};

// A precondition stated by the API contract was violated by the caller.
class ContractError : public Error {
public:
  explicit ContractError(const std::string& what) : Error(what) {}
};

// An operation that the engine does not support in its current state.
class UnsupportedOperationError : public Error {
public:
  explicit UnsupportedOperationError(const std::string& what) : Error(what) {}
};

// The oracle was asked to enumerate beyond its exhaustive-search budget.
class OversizeError : public Error {
public:
  explicit OversizeError(const std::string& what) : Error(what) {}
};

}  // namespace sgq

#endif  // SGQ_ERRORS_HPP
