#include "pstruct/projconn/geodesic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <numeric>

#include "pstruct/cech/laurent.hpp"
#include "pstruct/exact/errors.hpp"

namespace pstruct::projconn {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

namespace {

void unpack(const State& y, std::size_t m, std::vector<cd>& t, std::vector<cd>& v) {
  t.resize(m);
  v.resize(m);
  for (std::size_t a = 0; a < m; ++a) {
    t[a] = {y[a], y[m + a]};
    v[a] = {y[2 * m + a], y[3 * m + a]};
  }
}

double distance(std::span<const cd> a, std::span<const cd> b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d += std::norm(a[k] - b[k]);
  return std::sqrt(d);
}

}  // namespace

GeodesicPath geodesic_integrate(const ChristoffelField& G, std::span<const cd> t_init,
                                std::span<const cd> v_init, const GeodesicOptions& opt) {
  const std::size_t m = t_init.size();
  if (v_init.size() != m) throw std::invalid_argument("geodesic: dimension mismatch");
  double vnorm = 0.0;
  for (const auto& x : v_init) vnorm += std::norm(x);
  if (vnorm == 0.0) throw std::invalid_argument("geodesic: zero initial velocity");

  const std::vector<cd> center =
      opt.center.empty() ? std::vector<cd>(t_init.begin(), t_init.end()) : opt.center;

  GeodesicPath path;
  auto rhs = [&](const State& y, State& dy, double) {
    std::vector<cd> t, v;
    unpack(y, m, t, v);
    for (std::size_t a = 0; a < m; ++a)
      if (!std::isfinite(t[a].real()) || !std::isfinite(t[a].imag()) || !std::isfinite(std::abs(v[a])))
        throw ToleranceError("geodesic state is not finite", INFINITY, 0.0);
    if (opt.monitor) opt.monitor(t);
    ++path.rhs_evaluations;
    const std::vector<cd> acc = G(t).contract(v);
    dy.assign(4 * m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
      dy[a] = v[a].real();
      dy[m + a] = v[a].imag();
      dy[2 * m + a] = -acc[a].real();
      dy[3 * m + a] = -acc[a].imag();
    }
  };

  State y(4 * m);
  for (std::size_t a = 0; a < m; ++a) {
    y[a] = t_init[a].real();
    y[m + a] = t_init[a].imag();
    y[2 * m + a] = v_init[a].real();
    y[3 * m + a] = v_init[a].imag();
  }

  auto observer = [&](const State& x, double s) {
    GeodesicSample smp{s, {}, {}};
    unpack(x, m, smp.t, smp.v);
    if (distance(smp.t, center) > opt.max_radius)
      throw ToleranceError("geodesic left the validity neighbourhood", distance(smp.t, center),
                           opt.max_radius);
    path.samples.push_back(std::move(smp));
  };

  const double ds = opt.s_max / double(std::max<std::size_t>(1, opt.nsamples));
  // bounded steps keep the dense-output overshoot past s_max small
  auto stepper = odeint::make_dense_output(opt.abs_tol, opt.rel_tol, std::max(ds, 0.25 * opt.s_max),
                                           odeint::runge_kutta_dopri5<State>());
  try {
    path.steps = odeint::integrate_const(stepper, rhs, y, 0.0, opt.s_max + 0.5 * ds, ds, observer);
  } catch (const odeint::odeint_error& e) {
    throw ToleranceError(std::string("geodesic step control failed: ") + e.what(), 0.0, 0.0);
  }
  return path;
}

double geodesic_equation_residual(const ChristoffelField& G, const GeodesicPath& path) {
  double res = 0.0;
  const auto& S = path.samples;
  for (std::size_t k = 1; k + 1 < S.size(); ++k) {
    const double h = S[k + 1].s - S[k].s;
    const std::vector<cd> acc = G(S[k].t).contract(S[k].v);
    for (std::size_t a = 0; a < acc.size(); ++a) {
      const cd vdot = (S[k + 1].v[a] - S[k - 1].v[a]) / (2 * h);
      res = std::max(res, std::abs(vdot + acc[a]));
    }
  }
  return res;
}

namespace {

double point_to_polyline(std::span<const cd> p, const GeodesicPath& b) {
  const std::size_t m = p.size();
  double best = INFINITY;
  for (std::size_t k = 0; k + 1 < b.samples.size(); ++k) {
    const auto& A = b.samples[k].t;
    const auto& B = b.samples[k + 1].t;
    double num = 0.0, den = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      num += std::real(std::conj(B[a] - A[a]) * (p[a] - A[a]));
      den += std::norm(B[a] - A[a]);
    }
    const double lam = den > 0 ? std::clamp(num / den, 0.0, 1.0) : 0.0;
    double d = 0.0;
    for (std::size_t a = 0; a < m; ++a) d += std::norm(p[a] - (A[a] + lam * (B[a] - A[a])));
    best = std::min(best, std::sqrt(d));
  }
  if (b.samples.size() == 1) best = distance(p, b.samples[0].t);
  return best;
}

}  // namespace

double hausdorff_distance(const GeodesicPath& a, const GeodesicPath& b) {
  double d = 0.0;
  for (const auto& s : a.samples) d = std::max(d, point_to_polyline(s.t, b));
  for (const auto& s : b.samples) d = std::max(d, point_to_polyline(s.t, a));
  return d;
}

std::vector<cd> constraint_gradient(const family::FamilyEvaluator& ev, const PointConstraint& y,
                                    std::span<const cd> t) {
  if (y.chart == 1) return ev.dphi1(ev.state_at(y.z0, t));
  return ev.dphi2(ev.chart2_state_at(y.z0, t));
}

cd constraint_value(const family::FamilyEvaluator& ev, const PointConstraint& y,
                    std::span<const cd> t) {
  if (y.chart == 1) return ev.phi1(ev.state_at(y.z0, t)) - y.w0;
  return ev.phi2(ev.chart2_state_at(y.z0, t)) - y.w0;
}

TotallyGeodesicResult totally_geodesic_check(const family::FamilyEvaluator& ev,
                                             const ChristoffelField& G, const PointConstraint& y,
                                             std::span<const cd> t_start, std::span<const cd> V,
                                             const GeodesicOptions& opt) {
  constexpr double kTangency = 1e-10;
  const double off = std::abs(constraint_value(ev, y, t_start));
  if (off > kTangency)
    throw InvariantViolation("tangency", "start point is off P_y by " + std::to_string(off));
  const auto grad = constraint_gradient(ev, y, t_start);
  cd dot = 0.0;
  double vn = 0.0;
  for (std::size_t a = 0; a < V.size(); ++a) {
    dot += grad[a] * V[a];
    vn += std::norm(V[a]);
  }
  if (std::abs(dot) > kTangency * std::max(1.0, std::sqrt(vn)))
    throw InvariantViolation("tangency",
                             "V is not tangent to P_y (|V.dphi| = " + std::to_string(std::abs(dot)) + ")");

  TotallyGeodesicResult out;
  out.path = geodesic_integrate(G, t_start, V, opt);
  for (const auto& s : out.path.samples)
    out.deviation = std::max(out.deviation, std::abs(constraint_value(ev, y, s.t)));
  return out;
}

std::vector<cd> zeros_in_disk(std::span<const cd> values, double r) {
  const std::size_t K = values.size();
  double vmax = 0.0, vmin = INFINITY;
  for (const auto& v : values) {
    vmax = std::max(vmax, std::abs(v));
    vmin = std::min(vmin, std::abs(v));
  }
  if (vmax == 0.0) throw ToleranceError("function vanishes identically on the contour", 0.0, 0.0);
  if (vmin < 1e-8 * vmax) throw ToleranceError("zero on the contour", vmin / vmax, 1e-8);

  const auto W = cech::LaurentWindow::from_samples(values, r);
  cech::LaurentWindow D(r, K);
  for (long k = W.kmin() + 1; k <= W.kmax(); ++k) D.coeff(k - 1) = double(k) * W.coeff(k);
  const auto dv = D.samples();

  // moments (1/2 pi i) \oint x^p f'/f dx with dx = i x dtheta
  std::vector<cd> xs(K), q(K);
  for (std::size_t k = 0; k < K; ++k) {
    xs[k] = std::polar(r, 2 * M_PI * double(k) / double(K));
    q[k] = xs[k] * dv[k] / values[k];
  }
  auto moment = [&](int p) {
    cd s = 0.0;
    for (std::size_t k = 0; k < K; ++k) s += std::pow(xs[k], p) * q[k];
    return s / double(K);
  };
  const cd count = moment(0);
  const long N = std::lround(count.real());
  const double frac = std::abs(count - double(N));
  if (frac > 1e-6) throw ToleranceError("zero count is not an integer", frac, 1e-6);
  if (N < 0) throw ToleranceError("more poles than zeros inside the contour", double(-N), 0.0);
  if (N == 0) return {};

  // Newton's identities: power sums to elementary symmetric polynomials
  std::vector<cd> e(N + 1, 0.0), ps(N + 1);
  e[0] = 1.0;
  for (long k = 1; k <= N; ++k) ps[k] = moment(int(k));
  for (long k = 1; k <= N; ++k) {
    cd acc = 0.0;
    for (long i = 1; i <= k; ++i) acc += (i % 2 == 1 ? 1.0 : -1.0) * e[k - i] * ps[i];
    e[k] = acc / double(k);
  }
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(N, N);
  for (long i = 1; i < N; ++i) C(i, i - 1) = 1.0;
  for (long i = 0; i < N; ++i) C(i, N - 1) = (((N - i) % 2 == 1) ? 1.0 : -1.0) * e[N - i];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  std::vector<cd> roots(es.eigenvalues().data(), es.eigenvalues().data() + N);
  std::sort(roots.begin(), roots.end(),
            [](cd a, cd b) { return std::abs(a) < std::abs(b) || (std::abs(a) == std::abs(b) && std::arg(a) < std::arg(b)); });
  return roots;
}

ZeroSet curve_zeros(const family::FamilyEvaluator& ev, std::span<const cd> t, double r,
                    std::size_t K) {
  const auto c1 = ev.circle(t, r, K);
  std::vector<cd> v1;
  for (const auto& p : c1.pts) v1.push_back(p.phi1);
  const auto c2 = ev.chart2_circle(t, r, K);
  return {zeros_in_disk(v1, r), zeros_in_disk(c2.phi2, r)};
}

ZeroSet section_zeros(const family::FamilyEvaluator& ev, std::span<const cd> t,
                      std::span<const cd> V, double r, std::size_t K) {
  const auto c1 = ev.circle(t, r, K);
  const auto c2 = ev.chart2_circle(t, r, K);
  std::vector<cd> v1(K, 0.0), v2(K, 0.0);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t a = 0; a < V.size(); ++a) {
      v1[k] += V[a] * c1.pts[k].d1[a];
      v2[k] += V[a] * c2.d2[a][k];
    }
  return {zeros_in_disk(v1, r), zeros_in_disk(v2, r)};
}

namespace {

// homogeneous coordinates (x0 : x1) with z = x0 / x1 and zh = x1 / x0
std::vector<std::pair<cd, cd>> projective_points(const ZeroSet& s) {
  std::vector<std::pair<cd, cd>> out;
  for (const auto& z : s.chart1) out.emplace_back(z, 1.0);
  for (const auto& zh : s.chart2) out.emplace_back(1.0, zh);
  return out;
}

double chordal(const std::pair<cd, cd>& p, const std::pair<cd, cd>& q) {
  const double np = std::sqrt(std::norm(p.first) + std::norm(p.second));
  const double nq = std::sqrt(std::norm(q.first) + std::norm(q.second));
  return std::abs(p.first * q.second - p.second * q.first) / (np * nq);
}

}  // namespace

double zero_set_distance(const ZeroSet& a, const ZeroSet& b) {
  const auto pa = projective_points(a);
  const auto pb = projective_points(b);
  if (pa.size() != pb.size())
    throw ToleranceError("zero set changed cardinality", double(pa.size()), double(pb.size()));
  std::vector<std::size_t> perm(pb.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = pa.empty() ? 0.0 : INFINITY;
  do {
    double d = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) d = std::max(d, chordal(pa[i], pb[perm[i]]));
    best = std::min(best, d);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

SameIntersectionResult same_intersection_check(const family::FamilyEvaluator& ev,
                                               const ChristoffelField& G,
                                               std::span<const cd> t_start, std::span<const cd> V,
                                               const GeodesicOptions& opt) {
  SameIntersectionResult out;
  out.initial = section_zeros(ev, t_start, V);
  out.path = geodesic_integrate(G, t_start, V, opt);
  for (const auto& s : out.path.samples) {
    if (s.s == 0.0) continue;
    out.drift = std::max(out.drift, zero_set_distance(out.initial, curve_zeros(ev, s.t)));
  }
  return out;
}

}  // namespace pstruct::projconn
