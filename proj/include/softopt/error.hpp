#pragma once

#include <stdexcept>
#include <string>

namespace softopt {

enum class ErrorKind {
  config,      // invalid problem description or boundary setup
  size,        // index space or allocation limits exceeded
  dimension,   // array shapes disagree
  solver,      // linear solve failed or did not meet its residual target
  degenerate,  // objective undefined at the current state (e.g. zero strain energy)
  io,
  optimizer,   // MMA subproblem failure
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace softopt
