#pragma once

#include <stdexcept>
#include <string>

namespace spns {

/// Error categories. The CLI maps each category onto a process exit code.
enum class ErrorKind {
  invalid_input,  // malformed or non-finite data, bad parameters
  resolution,     // the grid cannot resolve the requested scale
  domain,         // the periodic box is too small for the requested object
  contract,       // a theorem precondition is not met
  degenerate,     // zero field or similar input with no meaningful answer
  calibration,    // no finite constant reproduces the expected behaviour
  config,         // configuration file rejected
  io,             // file format or filesystem failure
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace spns
