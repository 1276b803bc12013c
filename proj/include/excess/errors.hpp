#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace excess {

enum class ErrorKind {
  InvalidArgument,
  TailNotConverged,
  ZeroProfile,
  ZeroDensity,
  NotConverged,
  Unbound,
  BracketFailed,
  OutOfRange,
  OptimizerStalled,
  CoincidentPoints,
};

std::string_view to_string(ErrorKind kind);

// Numerical and contract failures. `module` names the component that raised
// the error so the command-line front end can report it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + " [" + module + "]: " + message),
        kind_(kind),
        module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

  // Input errors map to exit status 2, everything else is numerical.
  bool is_input_error() const noexcept {
    return kind_ == ErrorKind::InvalidArgument || kind_ == ErrorKind::OutOfRange;
  }

 private:
  ErrorKind kind_;
  std::string module_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::TailNotConverged: return "TailNotConverged";
    case ErrorKind::ZeroProfile: return "ZeroProfile";
    case ErrorKind::ZeroDensity: return "ZeroDensity";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::Unbound: return "Unbound";
    case ErrorKind::BracketFailed: return "BracketFailed";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::OptimizerStalled: return "OptimizerStalled";
    case ErrorKind::CoincidentPoints: return "CoincidentPoints";
  }
  return "Unknown";
}

}  // namespace excess
