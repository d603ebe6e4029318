#pragma once

#include <stdexcept>
#include <string>

namespace odb {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct NoBoundStateError : std::domain_error {
  using std::domain_error::domain_error;
};

// Raised when an adaptive scheme runs out of budget. Carries the best estimate.
struct ToleranceError : std::runtime_error {
  ToleranceError(const std::string& what, double value, double achieved)
      : std::runtime_error(what), best_value(value), achieved_error(achieved) {}
  double best_value;
  double achieved_error;
};

struct PoleOrderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotFoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace odb
