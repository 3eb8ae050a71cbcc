#include "pstruct/cech/exact_split.hpp"

#include <Eigen/Dense>

#include "pstruct/exact/errors.hpp"

namespace pstruct::cech {

using exact::MultiPoly;
using exact::RatFunc;
using namespace family;

namespace {

// Pairwise coprime factors whose products give every input up to units.
std::vector<MultiPoly> coprime_base(std::vector<MultiPoly> polys) {
  std::vector<MultiPoly> base;
  for (auto p : polys) {
    if (p.is_constant()) continue;
    std::vector<MultiPoly> pending{exact::make_monic(p)};
    while (!pending.empty()) {
      MultiPoly q = pending.back();
      pending.pop_back();
      if (q.is_constant()) continue;
      bool merged = false;
      for (std::size_t i = 0; i < base.size(); ++i) {
        const MultiPoly g = exact::gcd(base[i], q);
        if (g.is_constant()) continue;
        const MultiPoly bi = *exact::exact_divide(base[i], g);
        const MultiPoly qi = *exact::exact_divide(q, g);
        base.erase(base.begin() + static_cast<long>(i));
        pending.push_back(g);
        pending.push_back(bi);
        pending.push_back(qi);
        merged = true;
        break;
      }
      if (!merged) base.push_back(exact::make_monic(q));
    }
  }
  return base;
}

// +1 when every z-root at t0 lies in |z| <= r_in, -1 when every root lies in
// |z| >= r_out (roots lost to infinity count as outside).
int classify(const MultiPoly& p, const Family& fam) {
  const auto coeffs = p.coefficients_in(Z);
  std::vector<cd> x(fam.base_point().size(), 0.0);
  const auto t0 = fam.t0_complex();
  for (std::size_t a = 0; a < t0.size(); ++a) x[T + a] = t0[a];
  std::vector<cd> c;
  for (const auto& q : coeffs) c.push_back(q.evaluate(x));
  double big = 0.0;
  for (const auto& v : c) big = std::max(big, std::abs(v));
  while (!c.empty() && std::abs(c.back()) <= 1e-14 * big) c.pop_back();
  const long deg = static_cast<long>(c.size()) - 1;
  const bool lost = deg < static_cast<long>(coeffs.size()) - 1;
  int inside = 0, outside = lost ? 1 : 0;
  if (deg > 0) {
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(deg, deg);
    for (long i = 1; i < deg; ++i) C(i, i - 1) = 1.0;
    for (long i = 0; i < deg; ++i) C(i, deg - 1) = -c[i] / c[deg];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    for (long i = 0; i < deg; ++i) {
      const double r = std::abs(es.eigenvalues()(i));
      if (r <= fam.r_in) {
        ++inside;
      } else if (r >= fam.r_out) {
        ++outside;
      } else {
        throw ToleranceError("pole of tau/F inside the overlap annulus at t0", r, fam.r_in);
      }
    }
  }
  if (inside > 0 && outside > 0)
    throw ToleranceError("denominator factor with poles on both sides of the circle", double(inside),
                         0.0);
  return inside > 0 ? 1 : -1;
}

// Solves M x = rhs over rational functions by Gaussian elimination.
std::vector<RatFunc> solve(std::vector<std::vector<RatFunc>> M, std::vector<RatFunc> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && M[piv][col].is_zero()) ++piv;
    if (piv == n) throw std::domain_error("singular partial-fraction system");
    std::swap(M[piv], M[col]);
    std::swap(rhs[piv], rhs[col]);
    const RatFunc inv = M[col][col].inverse();
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || M[row][col].is_zero()) continue;
      const RatFunc fct = M[row][col] * inv;
      for (std::size_t k = col; k < n; ++k) M[row][k] -= fct * M[col][k];
      rhs[row] -= fct * rhs[col];
    }
  }
  std::vector<RatFunc> x;
  for (std::size_t k = 0; k < n; ++k) x.push_back(rhs[k] / M[k][k]);
  return x;
}

RatFunc poly_from(const std::vector<RatFunc>& c, const exact::VarList& vars) {
  RatFunc out(vars);
  RatFunc zk = RatFunc::constant(vars, 1);
  const RatFunc z(MultiPoly::variable(vars, Z));
  for (const auto& ck : c) {
    out += ck * zk;
    zk *= z;
  }
  return out;
}

}  // namespace

std::optional<ExactSplit> exact_split(const Family& fam, bool constant_to_plus) {
  if (!fam.phi1.is_rational() || !fam.phi2.is_rational() || !fam.forward.f.is_rational() ||
      !fam.forward.g.is_rational())
    return std::nullopt;
  const RatFunc p1 = fam.phi1.as_rational(), p2 = fam.phi2.as_rational();
  const RatFunc f = fam.forward.f.as_rational(), g = fam.forward.g.as_rational();
  const auto& vars = p1.vars();

  auto on_curve = [&](const RatFunc& x) { return x.substitute(W, p1); };
  auto at_g = [&](const RatFunc& x) { return x.substitute(ZH, g).substitute(W, p1); };
  const RatFunc p2z = p2.derivative(ZH);
  const RatFunc gw = on_curve(g.derivative(W));
  const RatFunc F = on_curve(f.derivative(W)) - at_g(p2z) * gw;
  const RatFunc E = on_curve(f.derivative(W).derivative(W)) - at_g(p2z) * on_curve(g.derivative(W).derivative(W)) -
                    at_g(p2z.derivative(ZH)) * gw * gw;
  const RatFunc half = RatFunc::constant(vars, exact::Scalar(mpq_class(1, 2)));

  ExactSplit out;
  std::vector<MultiPoly> dens;
  for (std::size_t a = 0; a < fam.m(); ++a) {
    const RatFunc G = at_g(p2z.derivative(T + a)) * gw;
    const RatFunc tau = half * E * p1.derivative(T + a) - G;
    out.h.push_back(tau / F);
    dens.push_back(out.h.back().den());
  }
  out.F.assign(fam.m(), F);

  const auto base = coprime_base(dens);
  std::vector<int> side;
  for (const auto& b : base) side.push_back(classify(b, fam));

  for (const auto& h : out.h) {
    // D = A B with A collecting the factors whose poles are inside
    MultiPoly A = MultiPoly::constant(vars, 1), B = MultiPoly::constant(vars, 1);
    MultiPoly rest = h.den();
    for (std::size_t i = 0; i < base.size(); ++i) {
      while (auto q = exact::exact_divide(rest, base[i])) {
        rest = *q;
        (side[i] > 0 ? A : B) *= base[i];
        if (rest.is_constant()) break;
      }
    }
    B *= rest;  // unit left over

    const auto Ac = A.coefficients_in(Z), Bc = B.coefficients_in(Z), Nc = h.num().coefficients_in(Z);
    const std::size_t da = Ac.size() - 1, db = Bc.size() - 1, dn = Nc.size() - 1;
    if (da == 0) {
      out.plus.push_back(h);
      out.minus.push_back(RatFunc(vars));
    } else {
      // N = r B + s A, deg r < deg A
      const std::size_t ns = std::max(db, dn >= da ? dn - da + 1 : std::size_t(0));
      const std::size_t n = da + ns;
      std::vector<std::vector<RatFunc>> M(n, std::vector<RatFunc>(n, RatFunc(vars)));
      std::vector<RatFunc> rhs(n, RatFunc(vars));
      for (std::size_t k = 0; k < da; ++k)
        for (std::size_t j = 0; j <= db; ++j) M[k + j][k] += RatFunc(Bc[j]);
      for (std::size_t k = 0; k < ns; ++k)
        for (std::size_t j = 0; j <= da; ++j) M[k + j][da + k] += RatFunc(Ac[j]);
      for (std::size_t p = 0; p <= dn; ++p) rhs[p] = RatFunc(Nc[p]);
      const auto x = solve(std::move(M), std::move(rhs));
      const RatFunc r = poly_from({x.begin(), x.begin() + long(da)}, vars);
      const RatFunc s = poly_from({x.begin() + long(da), x.end()}, vars);
      out.minus.push_back(r / RatFunc(A));
      out.plus.push_back(s / RatFunc(B));
    }
    if (!constant_to_plus) {
      const RatFunc c0 = out.plus.back().substitute(Z, RatFunc(vars));
      out.plus.back() -= c0;
      out.minus.back() += c0;
    }
    if (!(out.plus.back() + out.minus.back() - h).is_zero())
      throw std::logic_error("partial fractions do not reproduce tau/F");
  }
  return out;
}

}  // namespace pstruct::cech
