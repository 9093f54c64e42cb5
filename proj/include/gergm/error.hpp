#ifndef GERGM_ERROR_HPP
#define GERGM_ERROR_HPP

#include <cstddef>
#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gergm {

/// Broad failure class; the CLI maps it to an exit code.
enum class ErrorKind { data, numerical, internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define GERGM_DEFINE_ERROR(Name, Kind)                                     \
  class Name : public Error {                                              \
   public:                                                                 \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  }

GERGM_DEFINE_ERROR(IoError, data);
GERGM_DEFINE_ERROR(LoopError, data);
GERGM_DEFINE_ERROR(IndexError, data);
GERGM_DEFINE_ERROR(CoverageError, data);
GERGM_DEFINE_ERROR(ValueError, data);
GERGM_DEFINE_ERROR(NameError, data);
GERGM_DEFINE_ERROR(SizeError, data);
GERGM_DEFINE_ERROR(ShapeError, data);
GERGM_DEFINE_ERROR(StateError, internal);
GERGM_DEFINE_ERROR(ConsistencyError, internal);
GERGM_DEFINE_ERROR(RankError, numerical);
GERGM_DEFINE_ERROR(DegeneracyError, numerical);

#undef GERGM_DEFINE_ERROR

/// Malformed input file; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::data, "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Sink for non-fatal diagnostics (duplicate edges, dropped term ids, ...).
/// Defaults to stderr; tests and the CLI may redirect it.
inline std::function<void(std::string_view)>& warning_sink() {
  static std::function<void(std::string_view)> sink = [](std::string_view msg) {
    std::cerr << "warning: " << msg << '\n';
  };
  return sink;
}

inline void warn(std::string_view msg) {
  if (auto& sink = warning_sink()) sink(msg);
}

}  // namespace gergm

#endif  // GERGM_ERROR_HPP
