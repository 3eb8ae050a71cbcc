#include "pstruct/cech/split.hpp"

#include "pstruct/exact/errors.hpp"

namespace pstruct::cech {

using family::CircleData;
using family::sym_index;

std::vector<std::vector<cd>> Cochain0Form::chart1_samples() const {
  std::vector<std::vector<cd>> out;
  for (const auto& w : chart1) out.push_back(w.samples());
  return out;
}

std::vector<std::vector<cd>> Cochain0Form::chart2_samples() const {
  std::vector<std::vector<cd>> out;
  for (const auto& w : chart2_pullback) out.push_back(w.samples());
  return out;
}

cd Cochain0Form::chart2_at(std::size_t alpha, cd zh) const {
  return chart2_pullback[alpha](1.0 / zh);
}

SplitResult split_cocycle(CircleData data, std::size_t m, const SplitOptions& opt) {
  SplitResult out;
  const std::size_t K = data.size();
  for (std::size_t a = 0; a < m; ++a) {
    std::vector<cd> h(K);
    for (std::size_t k = 0; k < K; ++k) h[k] = data.pts[k].h[a];
    LaurentSplit s = laurent_split(h, data.r, opt.constant_to_plus, opt.tail_tol);
    out.diag.tail = std::max(out.diag.tail, s.tail);
    out.diag.reconstruction = std::max(out.diag.reconstruction, s.reconstruction);
    s.minus *= -1.0;
    out.theta.chart1.push_back(std::move(s.plus));
    out.theta.chart2_pullback.push_back(std::move(s.minus));
  }
  if (out.diag.reconstruction > opt.reconstruction_tol)
    throw ToleranceError("Laurent reconstruction", out.diag.reconstruction, opt.reconstruction_tol);
  out.diag.residual =
      second_derivative_residual(data, out.theta.chart1_samples(), out.theta.chart2_samples());
  if (!(out.diag.residual < opt.residual_tol))
    throw ToleranceError("second-derivative relation after splitting", out.diag.residual,
                         opt.residual_tol);
  out.data = std::move(data);
  return out;
}

SplitResult split_cocycle(const family::FamilyEvaluator& ev, std::span<const cd> t,
                          const SplitOptions& opt) {
  return split_cocycle(ev.circle(t, opt.r, opt.K), ev.m(), opt);
}

Cochain0Form apply_gauge(Cochain0Form theta, const GaugeOneForm& xi) {
  for (std::size_t a = 0; a < theta.m(); ++a) {
    theta.chart1[a].coeff(0) += xi.xi[a];
    theta.chart2_pullback[a].coeff(0) += xi.xi[a];
  }
  return theta;
}

double second_derivative_residual(const CircleData& data,
                                  const std::vector<std::vector<cd>>& theta1,
                                  const std::vector<std::vector<cd>>& theta2) {
  const std::size_t m = theta1.size();
  double res = 0.0, scale = 1.0;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto& p = data.pts[k];
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a; b < m; ++b) {
        const std::size_t ab = sym_index(a, b, m);
        const cd phi1 = p.dd1[ab] + theta1[a][k] * p.d1[b] + theta1[b][k] * p.d1[a];
        const cd phi2 = p.dd2[ab] + theta2[a][k] * p.d2[b] + theta2[b][k] * p.d2[a];
        res = std::max(res, std::abs(phi2 - p.F * phi1));
        scale = std::max(scale, std::abs(phi2));
      }
    }
  }
  return res / scale;
}

double verify_second_derivative_relation(const family::FamilyEvaluator& ev, std::span<const cd> t,
                                         const Cochain0Form& theta) {
  const auto& w = theta.chart1.front();
  const CircleData data = ev.circle(t, w.radius(), w.size());
  return second_derivative_residual(data, theta.chart1_samples(), theta.chart2_samples());
}

}  // namespace pstruct::cech
