#pragma once

#include <span>
#include <vector>

#include "pstruct/exact/compiled.hpp"

namespace pstruct::exact {

/// Base assignment and chosen root value for every declared root.
struct BranchContext {
  std::vector<std::vector<Scalar>> base_points;  // one full variable assignment per root
  std::vector<Scalar> base_values;

  /// Same base point for all roots.
  static BranchContext uniform(const RootSystem& sys, std::vector<Scalar> point,
                               std::vector<Scalar> values);
  /// Checks value^2 == D_j(base) exactly; throws InvariantViolation.
  void validate(const RootSystem& sys) const;
};

/// Analytic continuation of square roots along straight segments.
class BranchTracker {
public:
  explicit BranchTracker(RootSystemPtr sys, double branch_tol = 1e-10);

  const RootSystemPtr& system() const { return sys_; }

  /// Continues root j from value s_from at x_from to x_to. Steps are halved
  /// until each update is small (|ds| < max_step_ratio |s|) and agrees with
  /// the two half steps. Throws BranchPointError near a zero of D_j.
  cd continue_root(std::size_t j, std::span<const cd> x_from, cd s_from,
                   std::span<const cd> x_to) const;

  /// Continues every root in mask along the segment.
  void continue_roots(RootExtElem::Key mask, std::span<const cd> x_from,
                      std::span<const cd> x_to, std::vector<cd>& values) const;

  /// Root values at x by continuation from the context base points, through
  /// the optional waypoints.
  std::vector<cd> roots_at(const BranchContext& ctx, std::span<const cd> x,
                           const std::vector<std::vector<cd>>& waypoints = {},
                           RootExtElem::Key mask = ~RootExtElem::Key{0}) const;

  static constexpr double max_step_ratio = 0.25;

private:
  cd step(std::size_t j, cd s, std::span<const cd> x) const;

  RootSystemPtr sys_;
  std::vector<CompiledPoly> radicands_;
  double branch_tol_;
};

/// Evaluates e at point; square roots are continued from ctx along the
/// straight line (or through waypoints). Throws PoleError / BranchPointError.
cd eval_complex(const RootExtElem& e, std::span<const cd> point, const BranchContext& ctx,
                const std::vector<std::vector<cd>>& waypoints = {});

/// Exact value of a polynomial at a rational point.
Scalar evaluate_exact(const MultiPoly& p, std::span<const Scalar> x);

}  // namespace pstruct::exact
