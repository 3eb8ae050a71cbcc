#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "pstruct/cech/split.hpp"
#include "pstruct/exact/errors.hpp"
#include "pstruct/projconn/connection.hpp"
#include "pstruct/projconn/geodesic.hpp"
#include "pstruct/weyl/weyl.hpp"

using namespace pstruct;
using cd = std::complex<double>;
using projconn::Christoffel;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget;  // seconds
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::vector<cd> random_t(std::mt19937& rng, std::span<const cd> center, double radius) {
  std::uniform_real_distribution<double> U(-radius, radius);
  std::vector<cd> t;
  for (const auto& c : center) t.push_back(c + U(rng));
  return t;
}

std::vector<cd> scaled(std::vector<cd> v, double len) {
  double n = 0.0;
  for (const auto& x : v) n += std::norm(x);
  n = std::sqrt(n);
  for (auto& x : v) x *= len / n;
  return v;
}

}  // namespace

int main() {
  const auto t_build = std::chrono::steady_clock::now();
  const family::Family cover = family::build_branched_cover_12();
  const family::Family quad = family::build_quadric_11();
  const family::FamilyEvaluator cev(cover), qev(quad);
  std::printf("setup: evaluators built in %.1f s\n",
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t_build).count());

  const std::vector<cd> t0{0.0, 0.0, 0.0};
  const auto grid = projconn::uniform_grid(3, 3, -0.15, 0.15);
  const auto metric = weyl::cover_metric().field();
  std::vector<projconn::GridPoint> grid_gamma;  // shared by criteria 2 and 7

  std::vector<Criterion> cs;

  cs.push_back({1, "exact identities P = z^2 Q - R^2 and Delta^2 = Res(P, Q)", 5, [] {
                  const auto cp = family::cover_polynomials();
                  const auto z = exact::MultiPoly::variable(cp.P.vars(), 0);
                  const bool a = (cp.P - (z * z * cp.Q - cp.R * cp.R)).is_zero();
                  const bool b = (cp.Delta * cp.Delta - exact::resultant(cp.P, cp.Q, 0)).is_zero();
                  return Outcome{a && b, std::string("identity 1 ") + (a ? "holds" : "fails") +
                                             ", identity 2 " + (b ? "holds" : "fails")};
                }});

  cs.push_back({2, "extracted Christoffel symbols projectively equal the reference table", 60, [&] {
                  grid_gamma = projconn::connection_grid_parallel(cev, grid);
                  const auto reference = projconn::cover_table_connection(false);
                  const auto corrected = projconn::cover_table_connection(true);
                  double worst = 0.0, worst_c = 0.0;
                  int bad = 0;
                  for (const auto& p : grid_gamma) {
                    if (!p.result) return Outcome{false, "pipeline failed: " + p.error};
                    const double r = projconn::projective_difference(p.result->gamma, reference.evaluate(p.t)).residual;
                    worst = std::max(worst, r);
                    bad += r >= 1e-8;
                    worst_c = std::max(worst_c, projconn::projective_difference(p.result->gamma, corrected.evaluate(p.t)).residual);
                  }
                  return Outcome{worst < 1e-8, fmt("max residual %.2e over 27 points (%g above 1e-8)", worst, bad) +
                                                   fmt("; with Gamma^0_02 negated %.2e", worst_c)};
                }});

  cs.push_back({3, "Gamma(t0) is projectively trivial", 5, [&] {
                  const auto r = projconn::connection_at(cev, t0);
                  const double res = projconn::projective_difference(r.gamma, Christoffel(3)).residual;
                  return Outcome{res < 1e-9, fmt("residual %.2e", res)};
                }});

  cs.push_back({4, "the (1,1) family is projectively flat", 30, [&] {
                  std::mt19937 rng(4);
                  double worst = 0.0;
                  for (int i = 0; i < 10; ++i) {
                    const auto t = random_t(rng, quad.t0_complex(), 0.15);
                    const auto r = projconn::connection_at(qev, t);
                    worst = std::max(worst, projconn::projective_difference(r.gamma, Christoffel(3)).residual);
                  }
                  return Outcome{worst < 1e-8, fmt("max residual %.2e over 10 points", worst)};
                }});

  cs.push_back({5, "surfaces P_y are totally geodesic", 60, [&] {
                  std::mt19937 rng(5);
                  std::uniform_real_distribution<double> R(0.2, 0.8), A(0.0, 2 * M_PI), C(-1.0, 1.0);
                  double worst = 0.0;
                  for (const auto* ev : {&cev, &qev}) {
                    const auto G = projconn::pipeline_field(*ev);
                    const auto ts = ev->family().t0_complex();
                    for (int i = 0; i < 5; ++i) {
                      const projconn::PointConstraint y{1, std::polar(R(rng), A(rng)), 0.0};
                      const auto grad = projconn::constraint_gradient(*ev, y, ts);
                      // two vectors orthogonal (bilinearly) to the gradient span the tangent plane
                      const std::vector<cd> e1{grad[1], -grad[0], 0.0}, e2{grad[2], 0.0, -grad[0]};
                      const double u = C(rng), v = C(rng);
                      std::vector<cd> V(3);
                      for (int k = 0; k < 3; ++k) V[k] = u * e1[k] + v * e2[k];
                      const auto r = projconn::totally_geodesic_check(*ev, G, y, ts, scaled(V, 0.15));
                      worst = std::max(worst, r.deviation);
                    }
                  }
                  return Outcome{worst < 1e-6, fmt("max deviation %.2e over 10 surfaces", worst)};
                }});

  cs.push_back({6, "geodesics through t0 keep the intersection with X_0", 30, [&] {
                  std::mt19937 rng(6);
                  std::uniform_real_distribution<double> U(-1.0, 1.0);
                  const auto G = projconn::pipeline_field(cev);
                  double worst = 0.0;
                  for (int i = 0; i < 3; ++i) {
                    const std::vector<cd> V = scaled({U(rng), U(rng), U(rng)}, 0.15);
                    worst = std::max(worst, projconn::same_intersection_check(cev, G, t0, V).drift);
                  }
                  return Outcome{worst < 1e-5, fmt("max drift %.2e over 3 geodesics", worst)};
                }});

  cs.push_back({7, "Weyl layer: a, b match the reference tables and D ~ Gamma", 60, [&] {
                  if (grid_gamma.empty()) grid_gamma = projconn::connection_grid_parallel(cev, grid);
                  const auto f1 = weyl::cover_forms(false), f2 = weyl::cover_forms(true);
                  double res = 0.0, da = 0.0, db02 = 0.0, dD = 0.0;
                  int n1 = 0, n2 = 0, both = 0, neither = 0;
                  for (const auto& p : grid_gamma) {
                    if (!p.result) return Outcome{false, "pipeline failed: " + p.error};
                    const auto jet = metric.jet(p.t);
                    const auto s = weyl::solve_ab(p.result->gamma, jet);
                    res = std::max(res, s.residual);
                    const auto a = f1.a(p.t), b1 = f1.b(p.t), b2 = f2.b(p.t);
                    for (int k = 0; k < 3; ++k) da = std::max(da, std::abs(s.a[k] - a[k]));
                    db02 = std::max({db02, std::abs(s.b[0] - b1[0]), std::abs(s.b[2] - b1[2])});
                    const bool m1 = std::abs(s.b[1] - b1[1]) < 1e-7, m2 = std::abs(s.b[1] - b2[1]) < 1e-7;
                    if (std::abs(b1[1] - b2[1]) < 1e-7) {
                      both += m1 && m2;
                      neither += !(m1 && m2);
                    } else {
                      n1 += m1 && !m2;
                      n2 += m2 && !m1;
                      neither += m1 == m2;
                    }
                    weyl::OneForm w(3);
                    for (int k = 0; k < 3; ++k) w[k] = s.a[k] - 2.0 * s.b[k];
                    dD = std::max(dD, projconn::projective_difference(weyl::weyl_connection(jet, w), p.result->gamma).residual);
                  }
                  const bool variant = neither == 0 && ((n1 > 0) != (n2 > 0));
                  const char* which = n2 > 0 && n1 == 0 ? "(1+t0*t2)" : n1 > 0 && n2 == 0 ? "(1+t0*t1)" : "none";
                  const bool ok = res < 1e-8 && da < 1e-7 && db02 < 1e-7 && variant && dD < 1e-8;
                  return Outcome{ok, fmt("ab residual %.2e, |a - table| %.2e", res, da) +
                                         fmt(", |b0,b2 - table| %.2e, D vs Gamma %.2e", db02, dD) +
                                         ", b1 matches " + which};
                }});

  cs.push_back({8, "Einstein-Weyl residual", 60, [&] {
                  std::mt19937 rng(8);
                  const auto G = projconn::pipeline_field(cev);
                  const projconn::ChristoffelField D = [&](std::span<const cd> x) {
                    const auto j = metric.jet(x);
                    const auto s = weyl::solve_ab(G(x), j);
                    weyl::OneForm w(3);
                    for (int k = 0; k < 3; ++k) w[k] = s.a[k] - 2.0 * s.b[k];
                    return weyl::weyl_connection(j, w);
                  };
                  double worst = 0.0;
                  for (int i = 0; i < 5; ++i)
                    worst = std::max(worst, weyl::einstein_weyl_residual(D, metric, random_t(rng, t0, 0.15)));
                  return Outcome{worst < 1e-6, fmt("max residual %.2e at 5 points", worst)};
                }});

  cs.push_back({9, "splitting: reconstruction, gauge completeness, K-doubling", 30, [&] {
                  std::mt19937 rng(9);
                  std::normal_distribution<double> N;
                  double rec = 0.0;
                  for (int trial = 0; trial < 100; ++trial) {
                    std::vector<cd> c(33);
                    for (auto& x : c) x = cd(N(rng), N(rng));
                    std::vector<cd> v(128);
                    for (std::size_t k = 0; k < v.size(); ++k) {
                      const cd z = std::polar(1.0, 2 * M_PI * double(k) / 128.0);
                      for (long j = -16; j <= 16; ++j) v[k] += c[std::size_t(j + 16)] * std::pow(z, int(j));
                    }
                    const auto s = cech::laurent_split(v, 1.0);
                    auto w = s.plus.samples();
                    const auto m = s.minus.samples();
                    for (std::size_t k = 0; k < v.size(); ++k) rec = std::max(rec, std::abs(w[k] + m[k] - v[k]));
                  }
                  const std::vector<cd> t{0.1, -0.08, 0.12};
                  cech::SplitOptions a, b, d;
                  b.constant_to_plus = false;
                  d.K = 512;
                  const auto ra = cech::split_cocycle(cev, t, a), rb = cech::split_cocycle(cev, t, b);
                  const auto rd = cech::split_cocycle(cev, t, d);
                  double gauge = 0.0, dbl = 0.0;
                  const auto a1 = ra.theta.chart1_samples(), b1 = rb.theta.chart1_samples();
                  const auto a2 = ra.theta.chart2_samples(), b2 = rb.theta.chart2_samples();
                  for (std::size_t al = 0; al < 3; ++al) {
                    const cd xi = a1[al][0] - b1[al][0];
                    for (std::size_t k = 0; k < a1[al].size(); ++k)
                      gauge = std::max({gauge, std::abs(a1[al][k] - b1[al][k] - xi), std::abs(a2[al][k] - b2[al][k] - xi)});
                    for (std::size_t k = 0; k < 256; k += 5) {
                      const cd z = std::polar(1.0, 2 * M_PI * double(k) / 256.0);
                      dbl = std::max({dbl, std::abs(ra.theta.chart1[al](z) - rd.theta.chart1[al](z)),
                                      std::abs(ra.theta.chart2_pullback[al](z) - rd.theta.chart2_pullback[al](z))});
                    }
                  }
                  const bool ok = rec < 1e-11 && gauge < 1e-10 && dbl < 1e-10;
                  return Outcome{ok, fmt("reconstruction %.2e, gauge %.2e", rec, gauge) + fmt(", K-doubling %.2e", dbl)};
                }});

  cs.push_back({10, "discriminant conformal structure is proportional to the metric", 30, [&] {
                  std::mt19937 rng(10);
                  double worst = 0.0;
                  for (int i = 0; i < 25; ++i) {
                    const auto t = random_t(rng, t0, 0.15);
                    worst = std::max(worst, weyl::proportionality_residual(weyl::conformal_from_family(cev, t), metric(t)));
                  }
                  return Outcome{worst < 1e-7, fmt("max 2x2 minor %.2e at 25 points", worst)};
                }});

  int failed = 0;
  for (const auto& c : cs) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && dt < c.budget;
    failed += !pass;
    std::printf("criterion %2d: %s  %s (%s; %.1f s of %.0f s)\n", c.id, pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), dt, c.budget);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria pass\n", int(cs.size()) - failed, cs.size());
  return failed == 0 ? 0 : 1;
}
