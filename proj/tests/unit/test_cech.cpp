#include <random>

#include "doctest.h"
#include "pstruct/cech/exact_split.hpp"
#include "pstruct/cech/split.hpp"
#include "pstruct/exact/compiled.hpp"
#include "pstruct/exact/errors.hpp"
#include "shared.hpp"

using namespace pstruct::cech;
using pstruct::family::cd;

namespace {

std::vector<cd> sample(const std::function<cd(cd)>& f, std::size_t K, double r = 1.0) {
  std::vector<cd> v(K);
  for (std::size_t k = 0; k < K; ++k) v[k] = f(r * unit_root(k, K));
  return v;
}

}  // namespace

TEST_CASE("split of 3/z + 2 + z") {
  const auto s = laurent_split(sample([](cd z) { return 3.0 / z + 2.0 + z; }, 64), 1.0);
  CHECK(std::abs(s.plus.coeff(0) - 2.0) < 1e-14);
  CHECK(std::abs(s.plus.coeff(1) - 1.0) < 1e-14);
  CHECK(std::abs(s.minus.coeff(-1) - 3.0) < 1e-14);
  CHECK(std::abs(s.plus.coeff(-1)) < 1e-14);
  CHECK(std::abs(s.minus.coeff(0)) < 1e-14);
  const auto t = laurent_split(sample([](cd z) { return 3.0 / z + 2.0 + z; }, 64), 1.0, false);
  CHECK(std::abs(t.minus.coeff(0) - 2.0) < 1e-14);
  CHECK(std::abs(t.plus.coeff(0)) < 1e-14);
}

TEST_CASE("1/(z-3) has only non-negative powers on the unit circle") {
  const auto s = laurent_split(sample([](cd z) { return 1.0 / (z - 3.0); }, 128), 1.0);
  double err = 0.0;
  for (long k = 0; k < 30; ++k) err = std::max(err, std::abs(s.plus.coeff(k) + std::pow(3.0, -double(k + 1))));
  CHECK(err < 1e-15);
  CHECK(s.minus.max_coeff() < 1e-15);
}

TEST_CASE("a pole on the circle is reported") {
  CHECK_THROWS_AS(laurent_split(sample([](cd z) { return 1.0 / (z - 1.02); }, 64), 1.0),
                  pstruct::ToleranceError);
}

TEST_CASE("random Laurent polynomials split and reconstruct") {
  std::mt19937 rng(11);
  std::normal_distribution<double> N;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<cd> c(41);
    for (auto& x : c) x = cd(N(rng), N(rng));
    auto f = [&](cd z) {
      cd s = 0.0;
      for (long k = -20; k <= 20; ++k) s += c[std::size_t(k + 20)] * std::pow(z, int(k));
      return s;
    };
    const double r = trial % 2 ? 1.0 : 1.05;
    const auto s = laurent_split(sample(f, 128, r), r);
    for (long k = -20; k <= 20; ++k) {
      const cd got = k >= 0 ? s.plus.coeff(k) : s.minus.coeff(k);
      worst = std::max(worst, std::abs(got - c[std::size_t(k + 20)]));
    }
    for (const cd z : {cd(0.9 * r, 0.1), cd(-0.3, r)}) worst = std::max(worst, std::abs(s.plus(z) + s.minus(z) - f(z)) / std::max(1.0, std::abs(f(z))));
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("k(1/z) - k(z) splits into its two halves") {
  const std::vector<cd> k{0.5, cd(1, -2), 0.25, cd(0, 3)};
  auto kp = [&](cd z) {
    cd s = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) s += k[j] * std::pow(z, int(j));
    return s;
  };
  const auto s = laurent_split(sample([&](cd z) { return kp(1.0 / z) - kp(z); }, 64), 1.0);
  // plus = -k(z) + k(0) and minus = k(1/z) - k(0): both recover k up to its constant
  for (std::size_t j = 1; j < k.size(); ++j) {
    CHECK(std::abs(s.plus.coeff(long(j)) + k[j]) < 1e-14);
    CHECK(std::abs(s.minus.coeff(-long(j)) - k[j]) < 1e-14);
  }
}

TEST_CASE("cover splitting at t = 0 is zero") {
  const auto r = split_cocycle(cover_ev(), std::vector<cd>{0.0, 0.0, 0.0});
  for (std::size_t a = 0; a < 3; ++a) {
    CHECK(r.theta.chart1[a].max_coeff() < 1e-14);
    CHECK(r.theta.chart2_pullback[a].max_coeff() < 1e-14);
  }
  CHECK(r.diag.residual < 1e-12);
}

TEST_CASE("quadric splitting at t0") {
  const auto& ev = quadric_ev();
  const auto r = split_cocycle(ev, ev.family().t0_complex());
  CHECK(r.diag.residual < 1e-12);
  const auto th1 = r.theta.chart1_samples(), th2 = r.theta.chart2_samples();
  double err = 0.0;
  for (std::size_t k = 0; k < r.data.size(); ++k) {
    const cd z = r.data.pts[k].z;
    // plus = (0, -1, z), minus = (-1/z, 0, 0) and theta_2 o g = -minus
    err = std::max({err, std::abs(th1[0][k]), std::abs(th1[1][k] + 1.0), std::abs(th1[2][k] - z)});
    err = std::max({err, std::abs(th2[0][k] - 1.0 / z), std::abs(th2[1][k]), std::abs(th2[2][k])});
  }
  CHECK(err < 1e-13);
}

TEST_CASE("two splittings differ by a fiber-constant one-form") {
  const std::vector<cd> t{0.1, -0.08, 0.12};
  SplitOptions a, b;
  b.constant_to_plus = false;
  const auto ra = split_cocycle(cover_ev(), t, a), rb = split_cocycle(cover_ev(), t, b);
  const auto a1 = ra.theta.chart1_samples(), b1 = rb.theta.chart1_samples();
  const auto a2 = ra.theta.chart2_samples(), b2 = rb.theta.chart2_samples();
  double spread = 0.0;
  for (std::size_t al = 0; al < 3; ++al) {
    const cd xi = a1[al][0] - b1[al][0];
    for (std::size_t k = 0; k < a1[al].size(); ++k) {
      spread = std::max(spread, std::abs(a1[al][k] - b1[al][k] - xi));
      spread = std::max(spread, std::abs(a2[al][k] - b2[al][k] - xi));
    }
  }
  CHECK(spread < 1e-10);

  GaugeOneForm xi{{0.3, cd(0, -1), 2.0}};
  const auto g = apply_gauge(ra.theta, xi);
  const auto g1 = g.chart1_samples();
  CHECK(std::abs(g1[2][5] - a1[2][5] - 2.0) < 1e-14);
  const auto same = apply_gauge(ra.theta, GaugeOneForm{{0.0, 0.0, 0.0}});
  CHECK(same.chart1_samples() == a1);
}

TEST_CASE("doubling K leaves the splitting unchanged") {
  const std::vector<cd> t{-0.12, 0.1, 0.07};
  SplitOptions a, b;
  b.K = 512;
  const auto ra = split_cocycle(cover_ev(), t, a), rb = split_cocycle(cover_ev(), t, b);
  double d = 0.0;
  for (std::size_t al = 0; al < 3; ++al)
    for (const cd z : {cd(0.9, 0.2), cd(-0.5, -0.7), cd(0.0, 1.0)}) {
      // chart 1 converges inside the circle, the pullback of chart 2 outside
      const cd w = 1.0 / std::conj(z);
      d = std::max(d, std::abs(ra.theta.chart1[al](z) - rb.theta.chart1[al](z)));
      d = std::max(d, std::abs(ra.theta.chart2_pullback[al](w) - rb.theta.chart2_pullback[al](w)));
    }
  CHECK(d < 1e-10);
}

TEST_CASE("exact partial fractions of the quadric") {
  const auto& fam = quadric_ev().family();
  const auto ex = exact_split(fam);
  REQUIRE(ex.has_value());
  const std::vector<cd> t{0.07, 1.05, -0.09};
  const auto r = split_cocycle(quadric_ev(), t);
  const auto th1 = r.theta.chart1_samples(), th2 = r.theta.chart2_samples();
  double d = 0.0;
  for (std::size_t a = 0; a < 3; ++a) {
    const pstruct::exact::CompiledRatFunc p(ex->plus[a]), m(ex->minus[a]);
    for (std::size_t k = 0; k < r.data.size(); k += 7) {
      std::vector<cd> x(7, 0.0);
      x[pstruct::family::Z] = r.data.pts[k].z;
      for (std::size_t b = 0; b < 3; ++b) x[pstruct::family::T + b] = t[b];
      d = std::max({d, std::abs(th1[a][k] - p(x)), std::abs(th2[a][k] + m(x))});
    }
  }
  CHECK(d < 1e-10);
  CHECK_FALSE(exact_split(cover_ev().family()).has_value());
}
