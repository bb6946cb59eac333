#pragma once
#include <stdexcept>
#include <string>

namespace qsp {

class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rank decisions that fall inside the ambiguous band, near-resonant ODE data, etc.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// CLI exit codes
enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitInput = 2, kExitResource = 3 };

}  // namespace qsp
