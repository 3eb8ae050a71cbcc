#pragma once

#include <stdexcept>
#include <string>

namespace pstruct {

/// Evaluation hit a zero of a reduced denominator.
class PoleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Analytic continuation of a square root came too close to a zero of its
/// radicand, or could not resolve the branch.
class BranchPointError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A numeric check exceeded its tolerance; carries the offending residual.
class ToleranceError : public std::runtime_error {
public:
  ToleranceError(const std::string& what, double residual, double tolerance)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + " > " +
                           std::to_string(tolerance) + ")"),
        residual_(residual),
        tolerance_(tolerance) {}
  double residual() const { return residual_; }
  double tolerance() const { return tolerance_; }

private:
  double residual_;
  double tolerance_;
};

/// A data-model invariant failed; name() identifies which one.
class InvariantViolation : public std::runtime_error {
public:
  InvariantViolation(std::string name, const std::string& detail)
      : std::runtime_error("invariant '" + name + "' violated: " + detail),
        name_(std::move(name)) {}
  const std::string& name() const { return name_; }

private:
  std::string name_;
};

}  // namespace pstruct
