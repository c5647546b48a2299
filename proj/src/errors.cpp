#include "spns/errors.hpp"

namespace spns {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid input";
    case ErrorKind::resolution: return "resolution error";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::contract: return "contract error";
    case ErrorKind::degenerate: return "degenerate input";
    case ErrorKind::calibration: return "calibration failure";
    case ErrorKind::config: return "config error";
    case ErrorKind::io: return "i/o error";
  }
  return "error";
}

}  // namespace spns
