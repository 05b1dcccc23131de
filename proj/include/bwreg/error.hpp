#pragma once

#include <stdexcept>
#include <string>

namespace bwreg {

enum class ErrorKind {
  InvalidInput,
  InvalidConfig,
  IllConditioned,
  Singular,
  NoConvergence,
  Unreliable,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Process exit code for a failure of the given kind:
// 2 invalid input, 3 numerical failure, 4 unreliable result.
int exit_code(ErrorKind kind);

}  // namespace bwreg
