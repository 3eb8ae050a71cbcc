#pragma once

#include <span>
#include <vector>

#include "pstruct/family/family.hpp"

namespace pstruct::family {

/// Everything the construction needs at one matched pair of fiber points.
struct PointData {
  cd z, w, zh, wh;
  cd phi1, phi1_z;
  cd phi2, phi2_zh, phi2_zhzh;
  std::vector<cd> d1, d2;    // d_alpha phi_i
  std::vector<cd> dd1, dd2;  // d_alpha d_beta phi_i, packed alpha <= beta
  std::vector<cd> d2_zh;     // d_zh d_alpha phi2
  cd f, f_w, f_ww, g, g_w, g_ww;
  cd F, E;
  std::vector<cd> G, tau, h;  // h = tau / F
};

/// Packed index of (a, b) in the upper triangle of an m x m matrix.
inline std::size_t sym_index(std::size_t a, std::size_t b, std::size_t m) {
  if (a > b) std::swap(a, b);
  return a * m - a * (a + 1) / 2 + b;
}

/// Samples on a circle |z| = r, z_k = r exp(2 pi i k / K).
struct CircleData {
  double r;
  std::vector<PointData> pts;
  std::size_t size() const { return pts.size(); }
};

/// Chart-2 only samples on |zh| = r (phi2 and its zh-derivative).
struct Chart2Circle {
  double r;
  std::vector<cd> zh, phi2, phi2_zh;
  std::vector<std::vector<cd>> d2;
};

/// Compiled numeric evaluator for a family. Square roots are continued from
/// the base point along paths that move t first (at z = 1), then z along
/// the unit circle, then radially; each step updates the roots in the order
/// their radicands become known (z,t first, then w = phi1, then zh, wh).
class FamilyEvaluator {
public:
  explicit FamilyEvaluator(const Family& fam);

  const Family& family() const { return fam_; }
  std::size_t m() const { return m_; }

  struct State {
    std::vector<cd> x;
    std::vector<cd> roots;
  };

  State base_state() const;
  /// Moves the chart-1 point to (z, t) along a straight segment.
  State move(const State& s, cd z, std::span<const cd> t) const;
  /// Chart-2 only state: moves (zh, t), tracking roots of phi2.
  State move_chart2(const State& s, cd zh, std::span<const cd> t) const;

  PointData evaluate(const State& s) const;
  PointData at(cd z, std::span<const cd> t) const;
  State state_at(cd z, std::span<const cd> t) const;
  CircleData circle(std::span<const cd> t, double r, std::size_t K) const;
  Chart2Circle chart2_circle(std::span<const cd> t, double r, std::size_t K) const;

  /// phi1 and d_alpha phi1 only (cheap path for constraint checks).
  cd phi1(const State& s) const;
  std::vector<cd> dphi1(const State& s) const;
  /// Chart-2 counterparts for states produced by move_chart2.
  cd phi2(const State& s) const;
  std::vector<cd> dphi2(const State& s) const;
  /// (z, t) or (zh, t) reached from the base point along the standard path.
  State chart2_state_at(cd zh, std::span<const cd> t) const;

private:
  void stage(RootExtElem::Key mask, const std::vector<cd>& from, const std::vector<cd>& to,
             std::vector<cd>& roots) const;

  Family fam_;
  std::size_t m_;
  exact::BranchTracker tracker_;
  RootExtElem::Key stage_zt_ = 0, stage_wzt_ = 0, stage_rest_ = 0, stage_c2_ = 0;

  exact::CompiledElem phi1_, phi1_z_, phi2_, phi2_zh_, phi2_zhzh_;
  std::vector<exact::CompiledElem> d1_, d2_, dd1_, dd2_, d2_zh_;
  exact::CompiledElem f_, f_w_, f_ww_, g_, g_w_, g_ww_;
};

/// Winding number of sampled values around 0 (samples ordered along a
/// positively oriented closed curve).
int winding_number(std::span<const cd> values);

/// F on the unit circle.
std::vector<cd> normal_transition(const FamilyEvaluator& ev, std::span<const cd> t, std::size_t K = 256);
/// deg N = -winding(F) on |z| = 1 (F maps chart-1 sections to chart-2).
int normal_degree(const FamilyEvaluator& ev, std::span<const cd> t, std::size_t K = 256);

/// Section values at matched points: sigma1(z_k), sigma2(zh_k).
struct SectionSamples {
  std::vector<cd> z, zh, sigma1, sigma2, F;
  /// max |sigma2 - F sigma1| relative to max |sigma2|.
  double transformation_residual() const;
};
SectionSamples kodaira_section(const FamilyEvaluator& ev, std::span<const cd> t,
                               std::span<const cd> V, std::size_t K = 64);

/// tau_alpha = E d_alpha phi1 / 2 - G_alpha on the unit circle.
struct Cocycle1Form {
  std::vector<cd> z;
  std::vector<cd> F, E;
  std::vector<std::vector<cd>> G, tau;  // [alpha][k]
};
Cocycle1Form tau_cocycle(const FamilyEvaluator& ev, std::span<const cd> t, std::size_t K = 256);

/// Reversing the chart pair must negate h = tau / F at matched points.
/// Returns the max residual over nsamples points of the unit circle.
double cocycle_antisymmetry_residual(const FamilyEvaluator& ev, const FamilyEvaluator& reversed,
                                     std::span<const cd> t, std::size_t nsamples = 20);

/// max |phi2(g(z), t) - f(phi1(z, t), z)| over random points near (unit circle, t0).
double compatibility_residual(const FamilyEvaluator& ev, std::size_t nsamples, unsigned seed,
                              double t_radius = 0.1);

}  // namespace pstruct::family
