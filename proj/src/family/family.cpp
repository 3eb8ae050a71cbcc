#include "pstruct/family/family.hpp"

#include <Eigen/Dense>

#include "pstruct/exact/errors.hpp"
#include "pstruct/exact/parser.hpp"
#include "pstruct/family/evaluator.hpp"

namespace pstruct::family {

using exact::MultiPoly;
using exact::RatFunc;

exact::VarList family_vars(const std::vector<std::string>& params,
                           const std::vector<std::string>& fiber) {
  if (fiber.size() != 4) throw std::invalid_argument("four fiber coordinate names are required");
  std::vector<std::string> names = fiber;
  names.insert(names.end(), params.begin(), params.end());
  return exact::make_vars(std::move(names));
}

std::vector<cd> Family::t0_complex() const {
  std::vector<cd> out;
  for (const auto& s : t0) out.push_back(s.to_complex());
  return out;
}

std::vector<Scalar> Family::base_point() const {
  std::vector<Scalar> x{Scalar(0), Scalar(1), Scalar(0), Scalar(1)};
  x.insert(x.end(), t0.begin(), t0.end());
  return x;
}

Family Family::reversed() const {
  if (!inverse) throw std::logic_error("family '" + name + "' has no inverse transition");
  std::vector<std::size_t> perm{WH, ZH, W, Z};
  for (std::size_t a = 0; a < m(); ++a) perm.push_back(T + a);

  std::vector<exact::RootDef> roots;
  for (const auto& r : sys->roots) roots.push_back({r.symbol, r.radicand.permute(perm)});
  auto nsys = exact::make_root_system(sys->vars, std::move(roots));

  Family out;
  out.name = name + " (reversed)";
  out.params = params;
  out.sys = nsys;
  out.phi1 = phi2.permute(perm, nsys);
  out.phi2 = phi1.permute(perm, nsys);
  out.forward = {inverse->f.permute(perm, nsys), inverse->g.permute(perm, nsys)};
  out.inverse = Transition{forward.f.permute(perm, nsys), forward.g.permute(perm, nsys)};
  out.t0 = t0;
  out.r_in = 1.0 / r_out;
  out.r_out = 1.0 / r_in;
  out.validity_radius = validity_radius;
  out.branch.base_values = branch.base_values;
  for (const auto& p : branch.base_points) {
    std::vector<Scalar> q(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) q[k] = p[perm[k]];
    out.branch.base_points.push_back(std::move(q));
  }
  return out;
}

namespace {

std::uint64_t mask_of(std::initializer_list<std::size_t> vars, std::size_t m) {
  std::uint64_t s = 0;
  for (auto v : vars) s |= std::uint64_t{1} << v;
  for (std::size_t a = 0; a < m; ++a) s |= std::uint64_t{1} << (T + a);
  return s;
}

void require_support(const RootExtElem& e, std::uint64_t allowed, const std::string& what) {
  if (e.support() & ~allowed)
    throw InvariantViolation("chart-variables", what + " depends on variables outside its chart");
}

bool root_free(const Family& f) {
  return f.phi1.is_rational() && f.phi2.is_rational() && f.forward.f.is_rational() &&
         f.forward.g.is_rational();
}

RatFunc substitute_params(RatFunc r, const Family& fam) {
  for (std::size_t a = 0; a < fam.m(); ++a)
    r = r.substitute(T + a, RatFunc::constant(fam.sys->vars, fam.t0[a]));
  return r;
}

}  // namespace

void validate(const Family& fam) {
  const std::size_t m = fam.m();
  if (m == 0) throw InvariantViolation("parameters", "at least one parameter is required");
  if (fam.t0.size() != m) throw InvariantViolation("parameters", "base point has wrong dimension");
  if (!(fam.r_in > 0 && fam.r_in < 1 && fam.r_out > 1))
    throw InvariantViolation("annulus", "need 0 < r_in < 1 < r_out");
  require_support(fam.phi1, mask_of({Z}, m), "phi1");
  require_support(fam.phi2, mask_of({ZH}, m), "phi2");
  require_support(fam.forward.f, mask_of({W, Z}, m), "f");
  require_support(fam.forward.g, mask_of({W, Z}, m), "g");
  if (fam.inverse) {
    require_support(fam.inverse->f, mask_of({WH, ZH}, m), "inverse f");
    require_support(fam.inverse->g, mask_of({WH, ZH}, m), "inverse g");
  }
  fam.branch.validate(*fam.sys);

  const auto& vars = fam.sys->vars;
  const RatFunc zero_w = RatFunc::constant(vars, Scalar(0));

  if (root_free(fam)) {
    const RatFunc f = fam.forward.f.as_rational();
    if (!f.substitute(W, zero_w).is_zero())
      throw InvariantViolation("chart-normalization", "f(0, z) is not identically zero");
    if (!substitute_params(fam.phi1.as_rational(), fam).is_zero())
      throw InvariantViolation("base-normalization", "phi1(z, t0) is not identically zero");
    if (!substitute_params(fam.phi2.as_rational(), fam).is_zero())
      throw InvariantViolation("base-normalization", "phi2(zh, t0) is not identically zero");
    const RatFunc p1 = fam.phi1.as_rational();
    const RatFunc zh = fam.forward.g.as_rational().substitute(W, p1);
    const RatFunc lhs = fam.phi2.as_rational().substitute(ZH, zh);
    const RatFunc rhs = f.substitute(W, p1);
    if (!(lhs == rhs))
      throw InvariantViolation("compatibility", "phi2(g(phi1, z), t) != f(phi1, z)");
  }

  FamilyEvaluator ev(fam);
  const auto t0 = fam.t0_complex();
  const std::size_t nz = 20;
  Eigen::MatrixXcd rows(nz, m);
  auto s = ev.base_state();
  for (std::size_t k = 0; k < nz; ++k) {
    const cd z = std::polar(1.0, 2 * M_PI * double(k) / double(nz));
    s = ev.move(s, z, t0);
    const PointData p = ev.evaluate(s);
    if (std::abs(p.f) > 1e-10)
      throw InvariantViolation("chart-normalization", "f(0, z) != 0 at sampled z");
    if (std::abs(p.phi1) > 1e-10 || std::abs(p.phi2) > 1e-10)
      throw InvariantViolation("base-normalization", "phi_i(., t0) != 0 at sampled z");
    for (std::size_t a = 0; a < m; ++a) rows(k, a) = p.d1[a];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rows);
  const auto sv = svd.singularValues();
  if (sv(m - 1) < 1e-8 * std::max(1.0, sv(0)))
    throw InvariantViolation("kodaira-nondegenerate",
                             "d_alpha phi1 at t0 are linearly dependent (degenerate family)");

  const double compat = compatibility_residual(ev, 20, 1);
  if (!(compat < 1e-10))
    throw InvariantViolation("compatibility", "phi2(g(z), t) != f(phi1(z, t), z), residual " +
                                                  std::to_string(compat));
}

namespace {

Family assemble(std::string name, std::vector<std::string> params,
                std::vector<std::pair<std::string, std::string>> roots, const std::string& phi1,
                const std::string& phi2, const std::string& f, const std::string& g,
                const std::string& finv, const std::string& ginv, std::vector<Scalar> t0) {
  auto vars = family_vars(params);
  std::vector<exact::RootDef> defs;
  for (const auto& [sym, rad] : roots) defs.push_back({sym, exact::parse_rational(rad, vars).num()});
  auto sys = exact::make_root_system(vars, std::move(defs));

  Family fam;
  fam.name = std::move(name);
  fam.params = std::move(params);
  fam.sys = sys;
  fam.phi1 = exact::parse_expr(phi1, sys);
  fam.phi2 = exact::parse_expr(phi2, sys);
  fam.forward = {exact::parse_expr(f, sys), exact::parse_expr(g, sys)};
  fam.inverse = Transition{exact::parse_expr(finv, sys), exact::parse_expr(ginv, sys)};
  fam.t0 = std::move(t0);
  fam.branch = exact::BranchContext::uniform(*sys, fam.base_point(),
                                             std::vector<Scalar>(sys->nroots(), Scalar(1)));
  return fam;
}

}  // namespace

Family build_quadric_11() {
  return assemble("quadric-11", {"a0", "a1", "b1"}, {},
                  "(a1*z+a0)/(b1*z+1)-z", "(b1+zh)/(a1+a0*zh)-zh",
                  "-w/(z*(w+z))", "1/z", "-wh/(zh*(wh+zh))", "1/zh",
                  {Scalar(0), Scalar(1), Scalar(0)});
}

Family build_branched_cover_12() {
  return assemble("branched-cover-12", {"t0", "t1", "t2"},
                  {{"sQ", "t2^2*z^2+2*t1*t2*z+1+2*t0*t2+t1^2"},
                   {"sP", "1-2*t0*t1*zh-t0^2*zh^2"},
                   {"sT", "w^2+z^2"},
                   {"sU", "zh^2-wh^2"}},
                  "i*(t2*z^2+t1*z+t0)*sQ/(t2^2*z^2+2*t1*t2*z+1+2*t0*t2+t1^2)",
                  "i*(t0*zh^2+t1*zh+t2)*sP/(1-2*t0*t1*zh-t0^2*zh^2)",
                  "w*sT/(z*(w^2+z^2))", "1/z",
                  "wh*sU/(zh*(zh^2-wh^2))", "1/zh",
                  {Scalar(0), Scalar(0), Scalar(0)});
}

CoverPolynomials cover_polynomials() {
  auto vars = exact::make_vars({"z", "t0", "t1", "t2"});
  auto p = [&](const std::string& s) { return exact::parse_rational(s, vars).num(); };
  return {p("z^2-2*t0*t1*z-t0^2"), p("t2^2*z^2+2*t1*t2*z+1+2*t0*t2+t1^2"),
          p("t2*z^2+t1*z+t0"), p("(1+t0*t2)^2+t1^2*(1+2*t0*t2)")};
}

long branched_cover_obstruction(long selfint, long n) {
  if (n < 2) throw std::invalid_argument("branched cover degree must be at least 2");
  return ((selfint % n) + n) % n;
}

}  // namespace pstruct::family
