#include <random>

#include "doctest.h"
#include "pstruct/exact/errors.hpp"
#include "pstruct/exact/parser.hpp"

using namespace pstruct::exact;

namespace {

VarList zt_vars() { return make_vars({"z", "t0", "t1", "t2"}); }

RatFunc rat(const std::string& s, const VarList& v) { return parse_rational(s, v); }

MultiPoly poly(const std::string& s, const VarList& v) {
  RatFunc r = rat(s, v);
  REQUIRE(r.is_polynomial());
  return r.num();
}

// Small random polynomial in the given variables with integer coefficients.
MultiPoly random_poly(std::mt19937& rng, const VarList& vars, int max_deg, int nterms) {
  std::uniform_int_distribution<int> coef(-4, 4), deg(0, max_deg);
  MultiPoly p(vars);
  for (int k = 0; k < nterms; ++k) {
    Exponents e(vars->size());
    for (auto& x : e) x = static_cast<std::uint32_t>(deg(rng));
    p += MultiPoly::monomial(vars, e, Scalar(coef(rng), coef(rng)));
  }
  return p;
}

}  // namespace

TEST_CASE("scalar arithmetic and printing") {
  Scalar a(mpq_class(1, 2), 3);
  CHECK(a.str() == "(1/2+3*i)");
  CHECK((a * a.inverse()).is_one());
  CHECK(Scalar::imag_unit().str() == "i");
  CHECK((-Scalar::imag_unit()).str() == "(-i)");
  CHECK_THROWS_AS(Scalar(0).inverse(), std::domain_error);
  CHECK(Scalar(mpq_class(6, 4)) == Scalar(mpq_class(3, 2)));
}

TEST_CASE("parser basics") {
  auto v = make_vars({"z"});
  RatFunc r = rat("(z^2+1)/(z-2)", v);
  CHECK(r.num() == poly("z^2+1", v));
  CHECK(r.den() == poly("z-2", v));
  CHECK(std::abs(r.evaluate(std::vector<cd>{cd(0, 1)})) < 1e-15);

  try {
    rat("z^", v);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 2);
  }
  CHECK_THROWS_AS(rat("y+1", v), ParseError);
  CHECK_THROWS_AS(rat("(z+1", v), ParseError);
  CHECK_THROWS_AS(rat("z/0", v), ParseError);
}

TEST_CASE("parser with square roots") {
  auto v = zt_vars();
  MultiPoly Q = poly("t2^2*z^2+2*t1*t2*z+1+2*t0*t2+t1^2", v);
  auto sys = make_root_system(v, {{"sQ", Q}});
  RootExtElem e = parse_expr("i*(t2*z^2+t1*z+t0)/sQ", sys);
  REQUIRE(e.coeffs().size() == 1);
  CHECK(e.coeffs().begin()->first == 1u);
  RatFunc expect = rat("i*(t2*z^2+t1*z+t0)", v) / RatFunc(Q);
  CHECK(e.coeffs().begin()->second == expect);

  CHECK(parse_expr("sqrt(t2^2*z^2+2*t1*t2*z+1+2*t0*t2+t1^2)", sys) == RootExtElem::root(sys, 0));
  CHECK(parse_expr("(t2^2*z^2+2*t1*t2*z+1+2*t0*t2+t1^2)^(-1/2)", sys) == e / parse_expr("i*(t2*z^2+t1*z+t0)", sys));
  CHECK_THROWS_AS(parse_expr("sqrt(z+1)", sys), ParseError);

  // print then parse is idempotent
  RootExtElem back = parse_expr(e.str(), sys);
  CHECK(back == e);
  CHECK(parse_expr(back.str(), sys) == back);
}

TEST_CASE("derivatives") {
  auto v = zt_vars();
  CHECK(rat("z^2*t0", v).derivative(0) == rat("2*z*t0", v));

  MultiPoly Q = poly("t2^2*z^2+2*t1*t2*z+1+2*t0*t2+t1^2", v);
  auto sys = make_root_system(v, {{"sQ", Q}});
  RootExtElem sQ = RootExtElem::root(sys, 0);
  RootExtElem expect = RootExtElem(sys, RatFunc(Q.derivative(0), Q * Scalar(2))) * sQ;
  CHECK(sQ.derivative(0) == expect);

  RootExtElem phi = parse_expr("i*(t2*z^2+t1*z+t0)/sQ", sys);
  RootExtElem d0 = phi.derivative(1);
  std::vector<cd> x{cd(0.3, 0.2), 0.0, 0.0, 0.0};
  std::vector<cd> roots{1.0};
  CHECK(std::abs(d0.evaluate(x, roots) - cd(0, 1)) < 1e-14);
}

TEST_CASE("resultants") {
  auto v = make_vars({"zeta", "a", "b"});
  CHECK(resultant(poly("zeta^2-2*zeta-1", v), poly("zeta^2+2*zeta+4", v), 0) ==
        MultiPoly::constant(v, Scalar(49)));
  CHECK(resultant(poly("zeta-a", v), poly("zeta-b", v), 0) == poly("a-b", v));
  MultiPoly u = poly("zeta+a", v), w = poly("zeta^2+b", v);
  CHECK(resultant(poly("zeta-1", v) * u, poly("zeta-1", v) * w, 0).is_zero());
  CHECK_THROWS_AS(resultant(poly("a", v), poly("b", v), 0), std::invalid_argument);
}

TEST_CASE("branched cover identities") {
  auto v = zt_vars();
  MultiPoly P = poly("z^2-2*t0*t1*z-t0^2", v);
  MultiPoly Q = poly("t2^2*z^2+2*t1*t2*z+1+2*t0*t2+t1^2", v);
  MultiPoly R = poly("t2*z^2+t1*z+t0", v);
  MultiPoly D = poly("(1+t0*t2)^2+t1^2*(1+2*t0*t2)", v);
  MultiPoly z = MultiPoly::variable(v, 0);
  CHECK((P - (z * z * Q - R * R)).is_zero());
  CHECK((D * D - resultant(P, Q, 0)).is_zero());
}

TEST_CASE("ratfunc canonical form") {
  auto v = make_vars({"x", "y"});
  RatFunc r = rat("(x^2-y^2)/(2*x+2*y)", v);
  CHECK(r == rat("x/2-y/2", v));
  CHECK(r.is_polynomial());
  RatFunc s = rat("(x+1)/(3*x*y+y)", v);
  CHECK(s.den().leading_coefficient().is_one());
  CHECK_THROWS_AS(rat("1/(x-1)", v).evaluate(std::vector<cd>{1.0, 0.0}), pstruct::PoleError);
}

TEST_CASE("property: distributivity and reduced form") {
  std::mt19937 rng(7);
  auto v = make_vars({"x", "y"});
  for (int k = 0; k < 30; ++k) {
    RatFunc a(random_poly(rng, v, 2, 3), random_poly(rng, v, 1, 2) + MultiPoly::constant(v, 5));
    RatFunc b(random_poly(rng, v, 2, 3));
    RatFunc c(random_poly(rng, v, 1, 2), random_poly(rng, v, 1, 2) + MultiPoly::constant(v, 7));
    RatFunc lhs = (a + b) * c;
    RatFunc rhs = a * c + b * c;
    CHECK(lhs == rhs);
    if (!lhs.is_zero()) {
      CHECK(gcd(lhs.num(), lhs.den()).is_constant());
      CHECK(lhs.den().leading_coefficient().is_one());
    }
  }
}

TEST_CASE("property: derivatives commute") {
  std::mt19937 rng(11);
  auto v = make_vars({"x", "y"});
  auto sys = make_root_system(v, {{"s", poly("x^2+y+3", v)}});
  RootExtElem s = RootExtElem::root(sys, 0);
  for (int k = 0; k < 100; ++k) {
    RootExtElem a(sys, RatFunc(random_poly(rng, v, 2, 2), random_poly(rng, v, 1, 2) + MultiPoly::constant(v, 9)));
    RootExtElem b(sys, RatFunc(random_poly(rng, v, 2, 2)));
    RootExtElem e = a + b * s;
    CHECK(e.derivative(0).derivative(1) == e.derivative(1).derivative(0));
  }
}

TEST_CASE("property: planted common roots and coprime pairs") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> c(-5, 5);
  auto v = make_vars({"x"});
  MultiPoly x = MultiPoly::variable(v, 0);
  int nonzero = 0;
  for (int k = 0; k < 50; ++k) {
    MultiPoly root = x - MultiPoly::constant(v, Scalar(c(rng), c(rng)));
    MultiPoly u = random_poly(rng, v, 3, 3) + x * x * x * x;
    MultiPoly w = random_poly(rng, v, 2, 3) + x * x * x;
    CHECK(resultant(root * u, root * w, 0).is_zero());
    // coprime: gcd test is the oracle
    if (gcd(u, w).is_constant()) {
      ++nonzero;
      CHECK(!resultant(u, w, 0).is_zero());
    } else {
      CHECK(resultant(u, w, 0).is_zero());
    }
  }
  CHECK(nonzero > 40);
}

TEST_CASE("property: root normal form is multilinear") {
  std::mt19937 rng(5);
  auto v = make_vars({"x", "y"});
  auto sys = make_root_system(v, {{"s", poly("x+2", v)}, {"r", poly("y^2+1", v)}});
  RootExtElem s = RootExtElem::root(sys, 0), r = RootExtElem::root(sys, 1);
  for (int k = 0; k < 20; ++k) {
    RootExtElem e = RootExtElem(sys, RatFunc(random_poly(rng, v, 2, 2))) * s +
                    RootExtElem(sys, RatFunc(random_poly(rng, v, 1, 2))) * r * s +
                    RootExtElem(sys, RatFunc(random_poly(rng, v, 1, 2)));
    RootExtElem sq = e * e;
    for (const auto& [key, coef] : sq.coeffs()) CHECK(key < 4u);
  }
  CHECK(s * s == RootExtElem(sys, RatFunc(poly("x+2", v))));
  CHECK(s.inverse() == s * RootExtElem(sys, RatFunc(poly("x+2", v)).inverse()));
}
