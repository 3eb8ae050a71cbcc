#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "pstruct/cli/config.hpp"
#include "pstruct/projconn/christoffel.hpp"
#include "pstruct/weyl/weyl.hpp"

namespace pstruct::cli {

using nlohmann::json;
using cd = std::complex<double>;

json to_json(cd z);
json to_json(const std::vector<cd>& v);
json to_json(const projconn::Christoffel& G);  // {"G^g_ab": [re, im], ...} for a <= b
json to_json(const weyl::Matrix& M);

/// One comparison line of a report.
struct Row {
  std::string quantity;
  std::vector<cd> t;
  json computed;
  json reference;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string provenance;  // computed | closed-form | derived-evaluation
  std::string note;

  json to_json() const;
};

struct Report {
  std::string title;
  std::vector<Row> rows;

  bool pass() const;
  json to_json() const;
  /// Fixed-width human-readable table.
  std::string table() const;
};

struct ReproduceOptions {
  std::size_t grid = 3;  // points per axis
  double lo = -0.15, hi = 0.15;  // offsets from t0
  Tolerances tol;
  bool parallel = true;
  bool einstein_weyl = true;
  std::vector<std::vector<cd>> extra_points;  // absolute parameter values
};

/// Full pipeline per grid point plus the global identities, for one of the
/// reserved builders.
Report reproduce_report(const std::string& builder, const ReproduceOptions& opt = {});

}  // namespace pstruct::cli
