#include "bwreg/error.hpp"

namespace bwreg {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::Unreliable: return "Unreliable";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::InvalidConfig:
      return 2;
    case ErrorKind::IllConditioned:
    case ErrorKind::Singular:
    case ErrorKind::NoConvergence:
      return 3;
    case ErrorKind::Unreliable:
      return 4;
  }
  return 1;
}

}  // namespace bwreg
