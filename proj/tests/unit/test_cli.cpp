#include <random>

#include "doctest.h"
#include "pstruct/cli/config.hpp"
#include "pstruct/cli/report.hpp"
#include "pstruct/exact/errors.hpp"
#include "shared.hpp"

using namespace pstruct::cli;
using pstruct::family::cd;

namespace {

std::string data(const std::string& name) { return std::string(PSTRUCT_TEST_DATA) + "/" + name; }

}  // namespace

TEST_CASE("builder names dispatch") {
  const auto lf = load_family(data("cover.yaml"));
  CHECK(lf.family.name == "branched-cover-12");
  CHECK(lf.tol.comparison == 1e-8);
  CHECK(load_family_text("builder: quadric-11\nannulus: [0.4, 3]\n").family.r_out == 3.0);
  CHECK_THROWS_AS(load_family_text("builder: quadric-12\n"), ConfigError);
}

TEST_CASE("a transition with f(0, z) != 0 is rejected") {
  try {
    load_family(data("bad_f.yaml"));
    FAIL("accepted");
  } catch (const pstruct::InvariantViolation& e) {
    CHECK(e.name() == "chart-normalization");
  }
}

TEST_CASE("expression errors point into the file") {
  try {
    load_family(data("syntax_error.yaml"));
    FAIL("accepted");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 7);
    CHECK(e.column() == 29);  // the stray '*'
  }
}

TEST_CASE("YAML errors carry a position") {
  try {
    load_family_text("variables:\n  parameters: [a, b\nfamily: {}\n");
    FAIL("accepted");
  } catch (const ConfigError& e) {
    CHECK(e.line() >= 2);
  }
}

TEST_CASE("missing sections and bad values are named") {
  const std::string base =
      "variables:\n  parameters: [a0, a1, b1]\n"
      "transition:\n  f: \"-w/(z*(w+z))\"\n  g: \"1/z\"\n"
      "family:\n  phi1: \"(a1*z+a0)/(b1*z+1)-z\"\n  phi2: \"(b1+zh)/(a1+a0*zh)-zh\"\n";
  CHECK_THROWS_WITH_AS(load_family_text(base), doctest::Contains("missing section 'base'"), ConfigError);
  CHECK_NOTHROW(load_family_text(base + "base:\n  t0: [0, 1, 0]\n"));
  CHECK_NOTHROW(load_family_text(base + "base:\n  t0: [0, \"2/2\", 0.0]\n"));
  CHECK_THROWS_AS(load_family_text(base + "base:\n  t0: [0, 1]\n"), ConfigError);
  CHECK_THROWS_AS(load_family_text(base + "base:\n  t0: [0, 1, 0]\ntolerances:\n  tails: 1\n"), ConfigError);
  CHECK_THROWS_AS(load_family_text(base + "base:\n  t0: [0, 1, 0]\nannulus: [0.5]\n"), ConfigError);
  // the base point must be where the curves degenerate to X_0
  CHECK_THROWS_AS(load_family_text(base + "base:\n  t0: [0.5, 1, 0]\n"), pstruct::InvariantViolation);
}

TEST_CASE("longhand quadric evaluates like the builder") {
  const auto lf = load_family(data("quadric_longhand.yaml"));
  CHECK(lf.family.params == std::vector<std::string>{"p", "q", "r"});
  const pstruct::family::FamilyEvaluator ev(lf.family);
  const auto& ref = quadric_ev();
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-0.15, 0.15), A(0.0, 2 * M_PI), R(0.7, 1.4);
  double d = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::vector<cd> t{cd(U(rng), U(rng)), 1.0 + U(rng), U(rng)};
    const cd z = std::polar(R(rng), A(rng));
    const auto a = ev.at(z, t), b = ref.at(z, t);
    d = std::max({d, std::abs(a.phi1 - b.phi1), std::abs(a.phi2 - b.phi2), std::abs(a.F - b.F),
                  std::abs(a.E - b.E)});
    for (std::size_t k = 0; k < 3; ++k)
      d = std::max({d, std::abs(a.d1[k] - b.d1[k]), std::abs(a.tau[k] - b.tau[k])});
  }
  CHECK(d < 1e-12);
}

TEST_CASE("quadric report is projectively flat and deterministic") {
  ReproduceOptions opt;
  opt.grid = 2;
  opt.lo = -0.1;
  opt.hi = 0.1;
  const Report a = reproduce_report("quadric-11", opt);
  CHECK(a.pass());
  bool flat = false;
  for (const auto& r : a.rows) {
    CHECK(!r.provenance.empty());
    if (r.quantity == "projectively flat") flat = r.pass;
  }
  CHECK(flat);
  opt.parallel = false;
  const Report b = reproduce_report("quadric-11", opt);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK_THROWS_AS(reproduce_report("custom"), ConfigError);
}

TEST_CASE("a planted Delta = 0 point is reported without aborting") {
  ReproduceOptions opt;
  opt.grid = 1;
  opt.lo = opt.hi = 0.05;
  opt.einstein_weyl = false;
  opt.extra_points = {{1.0, 0.0, -1.0}};
  const Report r = reproduce_report("branched-cover-12", opt);
  bool saw_error = false, saw_grid = false;
  for (const auto& row : r.rows) {
    if (row.t == std::vector<cd>{1.0, 0.0, -1.0} && row.note.rfind("error:", 0) == 0) {
      saw_error = true;
      CHECK_FALSE(row.pass);
    }
    if (row.t == std::vector<cd>{0.05, 0.05, 0.05} && row.quantity == "christoffel vs sign-corrected table")
      saw_grid = row.pass;
  }
  CHECK(saw_error);
  CHECK(saw_grid);
  const auto j = r.to_json();
  CHECK(j["rows"].size() == r.rows.size());
  CHECK(j["rows"][0].contains("tolerance"));
}
