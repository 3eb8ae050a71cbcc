#include "doctest.h"
#include "pstruct/exact/errors.hpp"
#include "pstruct/cech/split.hpp"
#include "shared.hpp"

using namespace pstruct::family;

TEST_CASE("normal transition of the cover at t = 0 is 1/z^2") {
  const std::vector<cd> t{0.0, 0.0, 0.0};
  const auto F = normal_transition(cover_ev(), t, 64);
  double err = 0.0;
  for (std::size_t k = 0; k < 64; ++k) {
    const cd z = unit_root(k, 64);
    err = std::max(err, std::abs(F[k] - 1.0 / (z * z)));
  }
  CHECK(err < 1e-13);
}

TEST_CASE("normal transition of the quadric at t0 is -1/z^2") {
  const auto& ev = quadric_ev();
  const auto F = normal_transition(ev, ev.family().t0_complex(), 64);
  double err = 0.0;
  for (std::size_t k = 0; k < 64; ++k) {
    const cd z = unit_root(k, 64);
    err = std::max(err, std::abs(F[k] + 1.0 / (z * z)));
  }
  CHECK(err < 1e-13);
}

TEST_CASE("both builders have normal bundle degree 2") {
  CHECK(normal_degree(cover_ev(), std::vector<cd>{0.0, 0.0, 0.0}) == 2);
  CHECK(normal_degree(cover_ev(), std::vector<cd>{0.1, -0.1, 0.05}) == 2);
  CHECK(normal_degree(quadric_ev(), quadric_ev().family().t0_complex()) == 2);
}

TEST_CASE("winding number counts turns") {
  std::vector<cd> v;
  for (std::size_t k = 0; k < 40; ++k) v.push_back(std::pow(unit_root(k, 40), 3));
  CHECK(winding_number(v) == 3);
  for (auto& x : v) x = 1.0 / x;
  CHECK(winding_number(v) == -3);
}

TEST_CASE("kodaira sections of the cover at t = 0 are i z^alpha") {
  const std::vector<cd> t{0.0, 0.0, 0.0};
  for (std::size_t a = 0; a < 3; ++a) {
    std::vector<cd> V(3, 0.0);
    V[a] = 1.0;
    const auto s = kodaira_section(cover_ev(), t, V, 32);
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t k = 0; k < s.z.size(); ++k) {
      e1 = std::max(e1, std::abs(s.sigma1[k] - cd(0, 1) * std::pow(s.z[k], int(a))));
      e2 = std::max(e2, std::abs(s.sigma2[k] - cd(0, 1) * std::pow(s.zh[k], int(2 - a))));
    }
    CHECK(e1 < 1e-13);
    CHECK(e2 < 1e-13);
    CHECK(s.transformation_residual() < 1e-12);
  }
  const auto s = kodaira_section(cover_ev(), t, std::vector<cd>(3, 0.0), 16);
  for (const auto& x : s.sigma1) CHECK(std::abs(x) == 0.0);
}

TEST_CASE("kodaira sections transform by F away from t0") {
  const std::vector<cd> t{0.1, -0.05, 0.08}, V{0.3, 1.0, -0.7};
  CHECK(kodaira_section(cover_ev(), t, V).transformation_residual() < 1e-10);
  const std::vector<cd> tq{0.05, 1.1, -0.1};
  CHECK(kodaira_section(quadric_ev(), tq, V).transformation_residual() < 1e-10);
}

TEST_CASE("tau cocycle vanishes on the cover at t = 0") {
  const auto c = tau_cocycle(cover_ev(), std::vector<cd>{0.0, 0.0, 0.0}, 32);
  for (std::size_t k = 0; k < c.z.size(); ++k) {
    CHECK(std::abs(c.E[k]) < 1e-14);
    for (std::size_t a = 0; a < 3; ++a) {
      CHECK(std::abs(c.G[a][k]) < 1e-14);
      CHECK(std::abs(c.tau[a][k]) < 1e-14);
    }
  }
}

TEST_CASE("tau cocycle of the quadric at t0") {
  const auto& ev = quadric_ev();
  const auto c = tau_cocycle(ev, ev.family().t0_complex(), 32);
  double err = 0.0;
  for (std::size_t k = 0; k < c.z.size(); ++k) {
    const cd z = c.z[k];
    err = std::max(err, std::abs(c.E[k] - 2.0 / (z * z * z)));
    err = std::max(err, std::abs(c.tau[0][k] - 1.0 / (z * z * z)));
    err = std::max(err, std::abs(c.tau[1][k] - 1.0 / (z * z)));
    err = std::max(err, std::abs(c.tau[2][k] + 1.0 / z));
    for (std::size_t a = 0; a < 3; ++a) err = std::max(err, std::abs(c.G[a][k]));
  }
  CHECK(err < 1e-13);
}

TEST_CASE("h changes sign when the chart pair is reversed") {
  const FamilyEvaluator rc(cover_ev().family().reversed());
  CHECK(cocycle_antisymmetry_residual(cover_ev(), rc, std::vector<cd>{0.1, 0.2, -0.1}) < 1e-10);
  const FamilyEvaluator rq(quadric_ev().family().reversed());
  CHECK(cocycle_antisymmetry_residual(quadric_ev(), rq, std::vector<cd>{0.1, 0.9, 0.05}) < 1e-10);
}

TEST_CASE("chart compatibility holds near t0") {
  CHECK(compatibility_residual(cover_ev(), 50, 7) < 1e-12);
  CHECK(compatibility_residual(quadric_ev(), 50, 7) < 1e-12);
}

TEST_CASE("second derivative relation at t = 0 with theta = 0") {
  const auto data = cover_ev().circle(std::vector<cd>{0.0, 0.0, 0.0}, 1.0, 32);
  std::vector<std::vector<cd>> zero(3, std::vector<cd>(32, 0.0)), bumped = zero;
  CHECK(pstruct::cech::second_derivative_residual(data, zero, zero) < 1e-12);
  for (auto& x : bumped[1]) x += 1.0;
  // Phi picks up 2 d_1 phi = 2 i z on the diagonal, so the residual is about 2
  CHECK(pstruct::cech::second_derivative_residual(data, bumped, zero) > 1.0);
}

TEST_CASE("branched cover obstruction") {
  for (long n = 2; n < 6; ++n) CHECK(branched_cover_obstruction(2 * n, n) == 0);
  CHECK(branched_cover_obstruction(5, 2) == 1);
  CHECK(branched_cover_obstruction(6, 3) == 0);
  CHECK_THROWS(branched_cover_obstruction(4, 1));
}

TEST_CASE("cover polynomial identities hold exactly") {
  const auto cp = cover_polynomials();
  const auto z = pstruct::exact::MultiPoly::variable(cp.P.vars(), 0);
  CHECK((cp.P - (z * z * cp.Q - cp.R * cp.R)).is_zero());
  CHECK((cp.Delta * cp.Delta - pstruct::exact::resultant(cp.P, cp.Q, 0)).is_zero());
}

TEST_CASE("builders satisfy the family invariants") {
  CHECK_NOTHROW(validate(cover_ev().family()));
  CHECK_NOTHROW(validate(quadric_ev().family()));
  const auto& q = quadric_ev().family();
  CHECK(q.phi1.is_rational());
  CHECK(!cover_ev().family().phi1.is_rational());
}

TEST_CASE("validation names the failed invariant") {
  Family bad = build_quadric_11();
  bad.r_in = 1.5;
  try {
    validate(bad);
    FAIL("accepted a bad annulus");
  } catch (const pstruct::InvariantViolation& e) {
    CHECK(e.name() == "annulus");
  }
}
