#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "pstruct/family/evaluator.hpp"
#include "pstruct/projconn/christoffel.hpp"

namespace pstruct::projconn {

using TangentVector = std::vector<cd>;

struct GeodesicSample {
  double s;
  std::vector<cd> t, v;
};

struct GeodesicPath {
  std::vector<GeodesicSample> samples;
  std::size_t steps = 0;  // accepted adaptive steps
  std::size_t rhs_evaluations = 0;
};

struct GeodesicOptions {
  double s_max = 1.0;
  std::size_t nsamples = 50;  // output samples after s = 0
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 1e-2;
  /// The sampled path may not leave |t - center| <= max_radius.
  std::vector<cd> center;
  double max_radius = std::numeric_limits<double>::infinity();
  /// Optional guard evaluated at every right-hand side point; throwing aborts.
  std::function<void(std::span<const cd>)> monitor;
};

/// Solves t'' + Gamma(t)(t', t') = 0 with an adaptive Dormand-Prince 5(4)
/// stepper on the real and imaginary parts.
GeodesicPath geodesic_integrate(const ChristoffelField& G, std::span<const cd> t_init,
                                std::span<const cd> v_init, const GeodesicOptions& opt = {});

/// max over samples of |ddot t + Gamma(dot t, dot t)|, second derivative by
/// central differences of the sampled velocity.
double geodesic_equation_residual(const ChristoffelField& G, const GeodesicPath& path);

/// Largest distance from the points of a to the polyline b and vice versa.
double hausdorff_distance(const GeodesicPath& a, const GeodesicPath& b);

/// phi_chart(z0, t) = w0 defines P_y.
struct PointConstraint {
  int chart = 1;
  cd z0;
  cd w0 = 0.0;
};

/// Row d_alpha phi(z0, t) of the constraint.
std::vector<cd> constraint_gradient(const family::FamilyEvaluator& ev, const PointConstraint& y,
                                    std::span<const cd> t);
cd constraint_value(const family::FamilyEvaluator& ev, const PointConstraint& y,
                    std::span<const cd> t);

struct TotallyGeodesicResult {
  double deviation = 0.0;
  GeodesicPath path;
};

/// Integrates the geodesic with tangent V from t_start and returns
/// max_s |phi(z0, t(s)) - w0|. Throws InvariantViolation("tangency") when
/// V is not tangent to P_y at s = 0 or t_start is off P_y.
TotallyGeodesicResult totally_geodesic_check(const family::FamilyEvaluator& ev,
                                             const ChristoffelField& G, const PointConstraint& y,
                                             std::span<const cd> t_start, std::span<const cd> V,
                                             const GeodesicOptions& opt = {});

/// Zeros of phi(., t) inside |z| < r on chart 1 and |zh| < r on chart 2, by
/// contour moments, with multiplicity.
struct ZeroSet {
  std::vector<cd> chart1;  // z values
  std::vector<cd> chart2;  // zh values
  std::size_t size() const { return chart1.size() + chart2.size(); }
};
ZeroSet curve_zeros(const family::FamilyEvaluator& ev, std::span<const cd> t, double r = 1.0,
                    std::size_t K = 256);
/// Zeros of the section V^a d_a phi at t.
ZeroSet section_zeros(const family::FamilyEvaluator& ev, std::span<const cd> t,
                      std::span<const cd> V, double r = 1.0, std::size_t K = 256);

/// Zeros of a function from samples on |x| = r (argument principle moments).
std::vector<cd> zeros_in_disk(std::span<const cd> values, double r);

/// Chordal distance on CP^1 maximised over matched pairs, minimised over
/// pairings; throws ToleranceError when the cardinalities differ.
double zero_set_distance(const ZeroSet& a, const ZeroSet& b);

struct SameIntersectionResult {
  double drift = 0.0;
  ZeroSet initial;
  GeodesicPath path;
};
SameIntersectionResult same_intersection_check(const family::FamilyEvaluator& ev,
                                               const ChristoffelField& G,
                                               std::span<const cd> t_start, std::span<const cd> V,
                                               const GeodesicOptions& opt = {});

}  // namespace pstruct::projconn
