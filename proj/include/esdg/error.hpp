#pragma once

#include <stdexcept>
#include <string>

namespace esdg {

enum class ErrorKind {
  invalid_argument,
  unsupported_degree,
  ill_conditioned_basis,
  invalid_mesh,
  nonconforming_mesh,
  invalid_state,
  blow_up,
  oracle_failure,
  config_error,
  plot_error,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::unsupported_degree: return "unsupported-degree";
    case ErrorKind::ill_conditioned_basis: return "ill-conditioned-basis";
    case ErrorKind::invalid_mesh: return "invalid-mesh";
    case ErrorKind::nonconforming_mesh: return "nonconforming-mesh";
    case ErrorKind::invalid_state: return "invalid-state";
    case ErrorKind::blow_up: return "blow-up";
    case ErrorKind::oracle_failure: return "oracle-failure";
    case ErrorKind::config_error: return "config-error";
    case ErrorKind::plot_error: return "plot-error";
  }
  return "unknown";
}

/// Library exception; `kind()` identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a solution state leaves the admissible set during a run.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double time, int element, int point)
      : Error(ErrorKind::blow_up, what), time_(time), element_(element), point_(point) {}

  double time() const noexcept { return time_; }
  int element() const noexcept { return element_; }
  int point() const noexcept { return point_; }

 private:
  double time_;
  int element_;
  int point_;
};

}  // namespace esdg
