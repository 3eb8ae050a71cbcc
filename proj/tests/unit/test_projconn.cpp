#include <random>

#include "doctest.h"
#include "pstruct/exact/errors.hpp"
#include "pstruct/projconn/connection.hpp"
#include "pstruct/projconn/geodesic.hpp"
#include "pstruct/projconn/transform.hpp"
#include "shared.hpp"

using namespace pstruct::projconn;
using pstruct::family::cd;

namespace {

Christoffel sample_connection() {
  Christoffel G(3);
  for (std::size_t g = 0; g < 3; ++g)
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = a; b < 3; ++b) G(g, a, b) = cd(0.1 * double(g + 1) - 0.05 * double(a * b), 0.02 * double(a + g));
  return G;
}

ChristoffelField constant_field(Christoffel G) {
  return [G](std::span<const cd>) { return G; };
}

}  // namespace

TEST_CASE("projective difference of a connection with itself") {
  const auto G = sample_connection();
  const auto d = projective_difference(G, G);
  CHECK(d.residual == 0.0);
  for (const auto& x : d.xi.xi) CHECK(std::abs(x) == 0.0);
}

TEST_CASE("projective difference recovers a gauge one-form") {
  const auto G = sample_connection();
  const auto H = gauge_connection(G, {{1.0, 0.0, 0.0}});
  // by hand: only entries with a lower index 0 move
  CHECK(std::abs(H(0, 0, 0) - G(0, 0, 0) - 2.0) < 1e-15);
  CHECK(std::abs(H(1, 0, 1) - G(1, 0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(H(0, 1, 2) - G(0, 1, 2)) < 1e-15);
  const auto d = projective_difference(H, G);
  CHECK(d.residual < 1e-15);
  CHECK(std::abs(d.xi.xi[0] - 1.0) < 1e-15);
  CHECK(std::abs(d.xi.xi[1]) < 1e-15);
  const auto same = gauge_connection(G, {{0.0, 0.0, 0.0}});
  CHECK(same.data() == G.data());
}

TEST_CASE("a non-trace difference is detected") {
  const auto G = sample_connection();
  auto H = G;
  H(0, 1, 1) += 1.0;
  CHECK(projective_difference(H, G).residual > 0.2);
}

TEST_CASE("linear change of parameters keeps the flat connection flat") {
  const CoordinateMap map({"t0", "t1", "t2"}, {"2*t0", "2*t1", "2*t2"}, {"t0/2", "t1/2", "t2/2"});
  const auto G = transform_coordinates(constant_field(Christoffel(3)), map);
  CHECK(G(std::vector<cd>{0.3, -0.2, 0.5}).max_abs() == 0.0);
}

TEST_CASE("quadratic change of parameters on the flat connection") {
  const CoordinateMap map({"t0", "t1", "t2"}, {"t0+t1^2", "t1", "t2"}, {"t0-t1^2", "t1", "t2"});
  const auto G = transform_coordinates(constant_field(Christoffel(3)), map);
  Christoffel H = G(std::vector<cd>{0.4, 0.7, -0.1});
  // the image of t(s) = p + s v has t0'' = 2 v1^2 while v1' = v1, so Gamma'^0_11 = -2
  CHECK(std::abs(H(0, 1, 1) + 2.0) < 1e-14);
  H(0, 1, 1) = 0.0;
  CHECK(H.max_abs() < 1e-14);
}

TEST_CASE("transforming there and back is the identity") {
  const CoordinateMap map({"t0", "t1", "t2"}, {"t0+t1^2", "t1-t2^3", "t2"}, {"t0-(t1+t2^3)^2", "t1+t2^3", "t2"});
  const auto field = cover_table_connection(true).field();
  const auto back = transform_coordinates(transform_coordinates(field, map), map.inverted());
  const std::vector<cd> t{0.1, -0.05, 0.12};
  CHECK((back(t) - field(t)).max_abs() < 1e-10);
}

TEST_CASE("table entries at (1,1,1)") {
  const auto G = cover_table_connection(false).evaluate(std::vector<cd>{1.0, 1.0, 1.0});
  CHECK(std::abs(G(0, 0, 0) - 2.0 / 7) < 1e-14);
  CHECK(std::abs(G(1, 0, 0) + 1.0 / 7) < 1e-14);
  CHECK(std::abs(G(0, 0, 1) - 2.0 / 7) < 1e-14);
  CHECK(std::abs(G(1, 0, 1) - 5.0 / 14) < 1e-14);
  CHECK(cover_table_connection(true).evaluate(std::vector<cd>{0.0, 0.0, 0.0}).max_abs() == 0.0);
}

TEST_CASE("extraction at t = 0 gives the zero connection") {
  const auto r = connection_at(cover_ev(), std::vector<cd>{0.0, 0.0, 0.0});
  CHECK(r.gamma.max_abs() < 1e-13);
}

TEST_CASE("extraction residual is small on both builders") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-0.15, 0.15);
  double worst = 0.0;
  for (int i = 0; i < 25; ++i) {
    const std::vector<cd> t{U(rng), U(rng), U(rng)};
    worst = std::max(worst, connection_at(cover_ev(), t).extraction_residual);
    const std::vector<cd> tq{U(rng), 1.0 + U(rng), U(rng)};
    worst = std::max(worst, connection_at(quadric_ev(), tq).extraction_residual);
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("disjoint sample sets give the same connection") {
  const std::vector<cd> t{0.11, -0.07, 0.04};
  const auto s = pstruct::cech::split_cocycle(cover_ev(), t);
  ExtractionOptions a, b;
  b.offset = 1;
  const auto ea = extract_connection(s.data, s.theta, a), eb = extract_connection(s.data, s.theta, b);
  CHECK((ea.gamma - eb.gamma).max_abs() < 1e-8);
  CHECK(ea.asymmetry < 1e-8);
}

TEST_CASE("the quadric is projectively flat") {
  for (const std::vector<cd>& t : {std::vector<cd>{0.1, 0.9, -0.1}, std::vector<cd>{-0.12, 1.08, 0.13}}) {
    const auto r = connection_at(quadric_ev(), t);
    CHECK(projective_difference(r.gamma, Christoffel(3)).residual < 1e-8);
  }
}

TEST_CASE("serial and parallel grids agree") {
  const auto pts = uniform_grid(3, 2, -0.1, 0.1);
  CHECK(pts.size() == 8);
  CHECK(pts[1][2] == cd(0.1));
  CHECK(pts[4][0] == cd(0.1));
  const auto s = connection_grid_serial(cover_ev(), pts);
  const auto p = connection_grid_parallel(cover_ev(), pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    REQUIRE(s[i].result);
    REQUIRE(p[i].result);
    CHECK(s[i].result->gamma.data() == p[i].result->gamma.data());
  }
}

TEST_CASE("geodesics of the zero connection are straight lines") {
  const std::vector<cd> t0{0.0, 0.0, 0.0}, V{1.0, 2.0, 3.0};
  GeodesicOptions opt;
  opt.nsamples = 10;
  const auto path = geodesic_integrate(constant_field(Christoffel(3)), t0, V, opt);
  REQUIRE(path.samples.size() == 11);
  double err = 0.0;
  for (const auto& p : path.samples)
    for (std::size_t a = 0; a < 3; ++a) err = std::max(err, std::abs(p.t[a] - p.s * V[a]));
  CHECK(err < 1e-12);
}

TEST_CASE("a gauged flat connection traces the same line") {
  const std::vector<cd> t0{0.0, 0.0, 0.0}, V{1.0, 2.0, 3.0};
  const auto G = gauge_connection(Christoffel(3), {{0.3, -0.2, 0.1}});
  GeodesicOptions opt;
  opt.s_max = 0.8;
  const auto bent = geodesic_integrate(constant_field(G), t0, V, opt);
  const auto end = bent.samples.back().t;
  // reparameterised: the endpoint differs from 0.8 V but lies on the line
  CHECK(std::abs(end[0] - 0.8) > 1e-3);
  const auto straight = geodesic_integrate(constant_field(Christoffel(3)), t0, end, {});
  CHECK(hausdorff_distance(bent, straight) < 1e-7);
  CHECK(geodesic_equation_residual(constant_field(G), bent) < 1e-4);
}

TEST_CASE("closed-form cover geodesic stays finite away from Delta = 0") {
  const auto field = cover_table_connection(true).field();
  GeodesicOptions opt;
  opt.monitor = [](std::span<const cd> t) {
    const cd d = (1.0 + t[0] * t[2]) * (1.0 + t[0] * t[2]) + t[1] * t[1] * (1.0 + 2.0 * t[0] * t[2]);
    if (std::abs(d) < 0.5) throw pstruct::PoleError("Delta too small");
  };
  const auto path = geodesic_integrate(field, std::vector<cd>{0.0, 0.0, 0.0}, std::vector<cd>{0.3, -0.2, 0.25}, opt);
  for (const auto& p : path.samples)
    for (const auto& x : p.t) CHECK(std::isfinite(std::abs(x)));
}

TEST_CASE("totally geodesic surfaces of the cover") {
  const auto& ev = cover_ev();
  const auto G = pipeline_field(ev);
  const PointConstraint y{1, 0.5, 0.0};
  const std::vector<cd> t0{0.0, 0.0, 0.0}, V{0.15, -0.3, 0.0};
  const auto r = totally_geodesic_check(ev, G, y, t0, V);
  CHECK(r.deviation < 1e-6);
  CHECK_THROWS_AS(totally_geodesic_check(ev, G, y, t0, std::vector<cd>{1.0, 0.0, 0.0}),
                  pstruct::InvariantViolation);
}

TEST_CASE("zero sets along geodesics through t0") {
  const auto& ev = cover_ev();
  const auto G = pipeline_field(ev);
  const std::vector<cd> t0{0.0, 0.0, 0.0};
  const auto r = same_intersection_check(ev, G, t0, std::vector<cd>{0.15, -0.3, 0.0});
  CHECK(r.drift < 1e-5);
  CHECK(r.initial.size() == 2);

  // V = e0: the section i has no chart-1 zeros and a double zero at zh = 0
  const auto z = section_zeros(ev, t0, std::vector<cd>{1.0, 0.0, 0.0});
  CHECK(z.chart1.empty());
  REQUIRE(z.chart2.size() == 2);
  CHECK(std::abs(z.chart2[0]) < 1e-6);
  CHECK(std::abs(z.chart2[1]) < 1e-6);
  const auto e = same_intersection_check(ev, G, t0, std::vector<cd>{0.2, 0.0, 0.0});
  CHECK(e.drift < 1e-5);

  const auto& q = quadric_ev();
  const auto fq = same_intersection_check(q, pipeline_field(q), q.family().t0_complex(),
                                          std::vector<cd>{0.1, -0.05, 0.08});
  CHECK(fq.drift < 1e-9);
}

TEST_CASE("zeros in a disk from contour samples") {
  std::vector<cd> v(128);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const cd z = unit_root(k, v.size());
    v[k] = (z - cd(0.3, 0.1)) * (z + 0.5) * (z - 2.0);
  }
  auto zs = zeros_in_disk(v, 1.0);
  REQUIRE(zs.size() == 2);
  std::sort(zs.begin(), zs.end(), [](cd a, cd b) { return a.real() < b.real(); });
  CHECK(std::abs(zs[0] + 0.5) < 1e-10);
  CHECK(std::abs(zs[1] - cd(0.3, 0.1)) < 1e-10);
}

TEST_CASE("zero sets of different size cannot be compared") {
  ZeroSet a{{0.5}, {}}, b{{0.5}, {0.1}};
  CHECK_THROWS_AS(zero_set_distance(a, b), pstruct::ToleranceError);
  ZeroSet c{{}, {2.0}};  // zh = 2 is z = 1/2
  CHECK(zero_set_distance(a, c) < 1e-15);
}
