#include "pstruct/projconn/connection.hpp"

#include <Eigen/Dense>

#include "pstruct/exact/errors.hpp"

namespace pstruct::projconn {

using family::CircleData;
using family::sym_index;

namespace {

using Mat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic>;

std::vector<std::size_t> sample_indices(std::size_t K, const ExtractionOptions& opt) {
  const std::size_t n = std::min(opt.nsamples, K);
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < n; ++j) idx.push_back((opt.offset + j * K / n) % K);
  return idx;
}

}  // namespace

Extraction extract_connection(const CircleData& data, const std::vector<std::vector<cd>>& theta1,
                              const std::vector<std::vector<cd>>& theta2,
                              const ExtractionOptions& opt) {
  const std::size_t m = theta1.size();
  const auto idx = sample_indices(data.size(), opt);
  const std::size_t n = idx.size();
  if (2 * n < m) throw std::invalid_argument("too few samples for extraction");

  Mat A(2 * n, m), B(2 * n, m * m);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& p = data.pts[idx[j]];
    const std::size_t k = idx[j];
    for (std::size_t g = 0; g < m; ++g) {
      A(j, g) = p.d1[g];
      A(n + j, g) = p.d2[g];
    }
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        const std::size_t ab = sym_index(a, b, m);
        B(j, a * m + b) = p.dd1[ab] + theta1[a][k] * p.d1[b] + theta1[b][k] * p.d1[a];
        B(n + j, a * m + b) = p.dd2[ab] + theta2[a][k] * p.d2[b] + theta2[b][k] * p.d2[a];
      }
  }

  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Extraction out;
  out.condition = sv(0) > 0 ? sv(m - 1) / sv(0) : 0.0;
  if (!(out.condition > opt.rank_tol))
    throw ToleranceError("extraction sample matrix is rank deficient", out.condition, opt.rank_tol);
  const Mat X = svd.solve(B);

  out.gamma = Christoffel(m);
  for (std::size_t g = 0; g < m; ++g)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a; b < m; ++b) {
        out.asymmetry = std::max(out.asymmetry, std::abs(X(g, a * m + b) - X(g, b * m + a)));
        out.gamma(g, a, b) = X(g, a * m + b);
      }

  const Mat R = A * X - B;
  const double scale = std::max(1.0, B.cwiseAbs().maxCoeff());
  out.residual = R.cwiseAbs().maxCoeff() / scale;
  if (!(out.residual < opt.residual_tol))
    throw ToleranceError("Phi is not a global section (extraction)", out.residual, opt.residual_tol);
  return out;
}

Extraction extract_connection(const CircleData& data, const cech::Cochain0Form& theta,
                              const ExtractionOptions& opt) {
  return extract_connection(data, theta.chart1_samples(), theta.chart2_samples(), opt);
}

PipelineResult connection_at(const family::FamilyEvaluator& ev, std::span<const cd> t,
                             const PipelineOptions& opt) {
  cech::SplitResult s = cech::split_cocycle(ev, t, opt.split);
  Extraction e = extract_connection(s.data, s.theta, opt.extraction);
  return {std::move(e.gamma), s.diag, e.residual};
}

ChristoffelField pipeline_field(const family::FamilyEvaluator& ev, PipelineOptions opt) {
  return [&ev, opt](std::span<const cd> t) { return connection_at(ev, t, opt).gamma; };
}

namespace {

GridPoint grid_point(const family::FamilyEvaluator& ev, const std::vector<cd>& t,
                     const PipelineOptions& opt) {
  GridPoint gp{t, std::nullopt, {}};
  try {
    gp.result = connection_at(ev, t, opt);
  } catch (const std::exception& e) {
    gp.error = e.what();
  }
  return gp;
}

}  // namespace

std::vector<GridPoint> connection_grid_serial(const family::FamilyEvaluator& ev,
                                              const std::vector<std::vector<cd>>& points,
                                              const PipelineOptions& opt) {
  std::vector<GridPoint> out;
  out.reserve(points.size());
  for (const auto& t : points) out.push_back(grid_point(ev, t, opt));
  return out;
}

std::vector<GridPoint> connection_grid_parallel(const family::FamilyEvaluator& ev,
                                                const std::vector<std::vector<cd>>& points,
                                                const PipelineOptions& opt) {
  std::vector<GridPoint> out(points.size());
  const long n = static_cast<long>(points.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) out[i] = grid_point(ev, points[i], opt);
  return out;
}

std::vector<std::vector<cd>> uniform_grid(std::size_t m, std::size_t n, double lo, double hi) {
  std::vector<std::vector<cd>> out;
  std::size_t total = 1;
  for (std::size_t a = 0; a < m; ++a) total *= n;
  for (std::size_t i = 0; i < total; ++i) {
    std::vector<cd> t(m);
    std::size_t rest = i;
    for (std::size_t a = m; a-- > 0;) {
      const std::size_t j = rest % n;
      rest /= n;
      t[a] = n == 1 ? lo : lo + (hi - lo) * double(j) / double(n - 1);
    }
    out.push_back(std::move(t));
  }
  return out;
}

ProjectiveDifference projective_difference(const Christoffel& a, const Christoffel& b) {
  const std::size_t m = a.m();
  if (b.m() != m) throw std::invalid_argument("projective_difference: dimension mismatch");
  const Christoffel d = a - b;
  ProjectiveDifference out;
  out.xi.xi.assign(m, 0.0);
  for (std::size_t al = 0; al < m; ++al) {
    cd tr = 0.0;
    for (std::size_t be = 0; be < m; ++be) tr += d(be, al, be);
    out.xi.xi[al] = tr / double(m + 1);
  }
  const Christoffel rest = a - gauge_connection(b, out.xi);
  out.residual = rest.max_abs();
  return out;
}

Christoffel gauge_connection(Christoffel G, const cech::GaugeOneForm& xi) {
  const std::size_t m = G.m();
  for (std::size_t g = 0; g < m; ++g)
    for (std::size_t a = 0; a < m; ++a) {
      // xi_a d^g_b + xi_b d^g_a; the diagonal entry gets both terms
      G(g, a, g) += xi.xi[a];
      if (a == g) G(g, a, g) += xi.xi[a];
    }
  return G;
}

}  // namespace pstruct::projconn
