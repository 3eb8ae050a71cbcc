#pragma once

#include <vector>

#include "pstruct/cech/laurent.hpp"
#include "pstruct/family/evaluator.hpp"

namespace pstruct::cech {

/// Fiber-constant 1-form xi_alpha.
struct GaugeOneForm {
  std::vector<cd> xi;
};

/// theta_{i alpha} on the two charts. Chart 1 is a power series in z; chart 2
/// is stored through its pullback theta_2 o g, a series in 1/z.
struct Cochain0Form {
  std::vector<LaurentWindow> chart1;
  std::vector<LaurentWindow> chart2_pullback;

  std::size_t m() const { return chart1.size(); }
  /// Values at the window's sample points, [alpha][k].
  std::vector<std::vector<cd>> chart1_samples() const;
  std::vector<std::vector<cd>> chart2_samples() const;
  /// theta_2 at zh for the standard transition g = 1/z.
  cd chart2_at(std::size_t alpha, cd zh) const;
};

struct SplitOptions {
  double r = 1.0;
  std::size_t K = 256;
  bool constant_to_plus = true;
  double tail_tol = 1e-12;
  double reconstruction_tol = 1e-10;
  double residual_tol = 1e-9;
};

struct SplitDiagnostics {
  double tail = 0.0;
  double reconstruction = 0.0;
  double residual = 0.0;
};

struct SplitResult {
  Cochain0Form theta;
  SplitDiagnostics diag;
  family::CircleData data;
};

/// h = tau / F = theta_1 - theta_2 o g, split on |z| = r.
SplitResult split_cocycle(const family::FamilyEvaluator& ev, std::span<const cd> t,
                          const SplitOptions& opt = {});
/// Same, reusing circle samples already computed at t.
SplitResult split_cocycle(family::CircleData data, std::size_t m, const SplitOptions& opt = {});

Cochain0Form apply_gauge(Cochain0Form theta, const GaugeOneForm& xi);

/// max over samples and alpha <= beta of |Phi_2 - F Phi_1| where
/// Phi_i = d2 phi_i + theta_i,alpha d_beta phi_i + theta_i,beta d_alpha phi_i.
/// theta values are given at the circle sample points.
double second_derivative_residual(const family::CircleData& data,
                                  const std::vector<std::vector<cd>>& theta1,
                                  const std::vector<std::vector<cd>>& theta2);
double verify_second_derivative_relation(const family::FamilyEvaluator& ev, std::span<const cd> t,
                                         const Cochain0Form& theta);

}  // namespace pstruct::cech
