#include "softopt/error.hpp"

namespace softopt {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::size: return "size";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::solver: return "solver";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::io: return "io";
    case ErrorKind::optimizer: return "optimizer";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace softopt
