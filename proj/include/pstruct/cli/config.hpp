#pragma once

#include <stdexcept>
#include <string>

#include "pstruct/family/family.hpp"
#include "pstruct/projconn/connection.hpp"

namespace pstruct::cli {

/// Malformed configuration; line and column are 1-based (0 when unknown).
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& msg, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_, column_;
};

struct Tolerances {
  double tail = 1e-12;
  double reconstruction = 1e-10;
  double residual = 1e-9;
  double extraction = 1e-8;
  double comparison = 1e-8;

  projconn::PipelineOptions pipeline() const;
};

struct LoadedFamily {
  family::Family family;
  Tolerances tol;
};

/// Reserved builder names: "quadric-11", "branched-cover-12".
family::Family build_named(const std::string& builder);

/// YAML document with either `builder: <name>` or the sections
/// variables, roots, transition, inverse_transition, family, base, annulus,
/// and optionally tolerances. The family is validated before returning;
/// invariant failures propagate as InvariantViolation.
LoadedFamily load_family(const std::string& path);
LoadedFamily load_family_text(const std::string& text);

}  // namespace pstruct::cli
