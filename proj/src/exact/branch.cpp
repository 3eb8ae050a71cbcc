#include "pstruct/exact/branch.hpp"

#include <cmath>

#include "pstruct/exact/errors.hpp"

namespace pstruct::exact {

Scalar evaluate_exact(const MultiPoly& p, std::span<const Scalar> x) {
  Scalar sum;
  for (const auto& [e, c] : p.terms()) {
    Scalar m = c;
    for (std::size_t v = 0; v < e.size(); ++v)
      for (std::uint32_t k = 0; k < e[v]; ++k) m *= x[v];
    sum += m;
  }
  return sum;
}

BranchContext BranchContext::uniform(const RootSystem& sys, std::vector<Scalar> point,
                                     std::vector<Scalar> values) {
  BranchContext ctx;
  ctx.base_points.assign(sys.nroots(), std::move(point));
  ctx.base_values = std::move(values);
  return ctx;
}

void BranchContext::validate(const RootSystem& sys) const {
  if (base_points.size() != sys.nroots() || base_values.size() != sys.nroots())
    throw InvariantViolation("branch-context", "one base point and value per root required");
  for (std::size_t j = 0; j < sys.nroots(); ++j) {
    if (base_points[j].size() != sys.nvars())
      throw InvariantViolation("branch-context", "base point for " + sys.roots[j].symbol +
                                                     " does not assign every variable");
    const Scalar d = evaluate_exact(sys.roots[j].radicand, base_points[j]);
    if (!(base_values[j] * base_values[j] == d))
      throw InvariantViolation("branch-context", "base value of " + sys.roots[j].symbol +
                                                     " squares to " + (base_values[j] * base_values[j]).str() +
                                                     ", radicand is " + d.str());
    if (d.is_zero())
      throw InvariantViolation("branch-context", sys.roots[j].symbol + " based at a branch point");
  }
}

BranchTracker::BranchTracker(RootSystemPtr sys, double branch_tol)
    : sys_(std::move(sys)), branch_tol_(branch_tol) {
  for (const auto& r : sys_->roots) radicands_.emplace_back(r.radicand);
}

cd BranchTracker::step(std::size_t j, cd s, std::span<const cd> x) const {
  const cd d = radicands_[j](x);
  if (std::abs(d) <= branch_tol_ * std::max(1.0, radicands_[j].magnitude(x)))
    throw BranchPointError("path passes a branch point of " + sys_->roots[j].symbol);
  const cd r = std::sqrt(d);
  return std::abs(r - s) <= std::abs(r + s) ? r : -r;
}

cd BranchTracker::continue_root(std::size_t j, std::span<const cd> x_from, cd s_from,
                                std::span<const cd> x_to) const {
  const std::size_t n = x_from.size();
  std::vector<cd> a(n), mid(n), b(n);
  auto lerp = [&](double lam, std::vector<cd>& out) {
    for (std::size_t v = 0; v < n; ++v) out[v] = x_from[v] + lam * (x_to[v] - x_from[v]);
  };

  double lam = 0.0, h = 1.0;
  cd s = s_from;
  while (lam < 1.0) {
    h = std::min(h, 1.0 - lam);
    lerp(lam + h, b);
    lerp(lam + 0.5 * h, mid);
    const cd direct = step(j, s, b);
    const cd half = step(j, s, mid);
    const cd twice = step(j, half, b);
    const bool small = std::abs(direct - s) < max_step_ratio * std::abs(s) &&
                       std::abs(half - s) < max_step_ratio * std::abs(s);
    if (small && std::abs(direct - twice) <= 1e-12 * std::abs(direct)) {
      s = direct;
      lam += h;
      h *= 2.0;
    } else {
      h *= 0.5;
      if (h < 1e-14) throw BranchPointError("continuation of " + sys_->roots[j].symbol + " stalled");
    }
  }
  return s;
}

void BranchTracker::continue_roots(RootExtElem::Key mask, std::span<const cd> x_from,
                                   std::span<const cd> x_to, std::vector<cd>& values) const {
  for (std::size_t j = 0; j < sys_->nroots(); ++j)
    if ((mask >> j) & 1u) values[j] = continue_root(j, x_from, values[j], x_to);
}

std::vector<cd> BranchTracker::roots_at(const BranchContext& ctx, std::span<const cd> x,
                                        const std::vector<std::vector<cd>>& waypoints,
                                        RootExtElem::Key mask) const {
  std::vector<cd> out(sys_->nroots(), 0.0);
  for (std::size_t j = 0; j < sys_->nroots(); ++j) {
    if (!((mask >> j) & 1u)) continue;
    std::vector<cd> from(ctx.base_points[j].size());
    for (std::size_t v = 0; v < from.size(); ++v) from[v] = ctx.base_points[j][v].to_complex();
    cd s = ctx.base_values[j].to_complex();
    for (const auto& wp : waypoints) {
      s = continue_root(j, from, s, wp);
      from = wp;
    }
    out[j] = continue_root(j, from, s, x);
  }
  return out;
}

cd eval_complex(const RootExtElem& e, std::span<const cd> point, const BranchContext& ctx,
                const std::vector<std::vector<cd>>& waypoints) {
  BranchTracker tracker(e.system());
  const auto roots = tracker.roots_at(ctx, point, waypoints, e.roots_used());
  return CompiledElem(e)(point, roots);
}

}  // namespace pstruct::exact
