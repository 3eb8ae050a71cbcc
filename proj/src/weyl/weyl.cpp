#include "pstruct/weyl/weyl.hpp"

#include "pstruct/cech/laurent.hpp"
#include "pstruct/exact/compiled.hpp"
#include "pstruct/exact/errors.hpp"
#include "pstruct/exact/parser.hpp"

namespace pstruct::weyl {

namespace {

std::size_t upper_index(std::size_t a, std::size_t b, std::size_t m) {
  return family::sym_index(a, b, m);
}

// Richardson-extrapolated central difference of a vector-valued function.
template <class F>
std::vector<cd> richardson(const F& f, std::span<const cd> t, std::size_t c, double h) {
  auto central = [&](double step) {
    std::vector<cd> tp(t.begin(), t.end()), tm(t.begin(), t.end());
    tp[c] += step;
    tm[c] -= step;
    const std::vector<cd> fp = f(tp), fm = f(tm);
    std::vector<cd> d(fp.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = (fp[k] - fm[k]) / (2 * step);
    return d;
  };
  const auto d1 = central(h);
  const auto d2 = central(h / 2);
  std::vector<cd> out(d1.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (4.0 * d2[k] - d1[k]) / 3.0;
  return out;
}

Matrix inverse_checked(const Matrix& g) {
  Eigen::FullPivLU<Matrix> lu(g);
  if (!lu.isInvertible() || lu.rcond() < 1e-13) throw PoleError("degenerate metric");
  return lu.inverse();
}

}  // namespace

ExactMetric::ExactMetric(const std::vector<std::string>& params,
                         const std::vector<std::string>& upper)
    : m_(params.size()), vars_(exact::make_vars(params)) {
  if (upper.size() != m_ * (m_ + 1) / 2)
    throw std::invalid_argument("metric needs m(m+1)/2 upper-triangle entries");
  for (const auto& s : upper) e_.push_back(exact::parse_rational(s, vars_));
}

const exact::RatFunc& ExactMetric::entry(std::size_t a, std::size_t b) const {
  return e_[upper_index(a, b, m_)];
}

MetricField ExactMetric::field() const {
  std::vector<exact::CompiledRatFunc> val;
  std::vector<std::vector<exact::CompiledRatFunc>> der(m_);
  for (const auto& e : e_) {
    val.emplace_back(e);
    for (std::size_t c = 0; c < m_; ++c) der[c].emplace_back(e.derivative(c));
  }
  const std::size_t m = m_;
  MetricField f;
  f.m = m;
  f.jet = [val = std::move(val), der = std::move(der), m](std::span<const cd> t) {
    MetricJet j{Matrix(m, m), std::vector<Matrix>(m, Matrix(m, m))};
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a; b < m; ++b) {
        const std::size_t k = upper_index(a, b, m);
        j.g(a, b) = j.g(b, a) = val[k](t);
        for (std::size_t c = 0; c < m; ++c) j.dg[c](a, b) = j.dg[c](b, a) = der[c][k](t);
      }
    inverse_checked(j.g);
    return j;
  };
  return f;
}

MetricField numeric_metric_field(std::size_t m, std::function<Matrix(std::span<const cd>)> g,
                                 double h) {
  MetricField f;
  f.m = m;
  f.jet = [m, g = std::move(g), h](std::span<const cd> t) {
    MetricJet j{g(t), {}};
    inverse_checked(j.g);
    auto flat = [&](std::span<const cd> x) {
      const Matrix v = g(x);
      return std::vector<cd>(v.data(), v.data() + v.size());
    };
    for (std::size_t c = 0; c < m; ++c) {
      const auto d = richardson(flat, t, c, h);
      j.dg.push_back(Eigen::Map<const Matrix>(d.data(), m, m));
    }
    return j;
  };
  return f;
}

ExactMetric cover_metric() {
  return ExactMetric({"t0", "t1", "t2"},
                     {"t1^2*t2^2", "t1*t2*(1+t0*t2)", "-2*(1+t1^2)*(1+t0*t2)",
                      "(1+t0*t2)^2", "-2*t0^2*t1*t2", "4*t0^2*(1+t1^2)"});
}

OneForm ExactOneForm::operator()(std::span<const cd> t) const {
  OneForm out;
  for (const auto& x : compiled) out.push_back(x(t));
  return out;
}

ExactOneForm exact_one_form(const std::vector<std::string>& params,
                            const std::vector<std::string>& components) {
  const auto vars = exact::make_vars(params);
  ExactOneForm f;
  for (const auto& s : components) {
    f.c.push_back(exact::parse_rational(s, vars));
    f.compiled.emplace_back(f.c.back());
  }
  return f;
}

CoverForms cover_forms(bool b1_with_t2) {
  const std::string D = "((1+t0*t2)^2+t1^2*(1+2*t0*t2))";
  const std::vector<std::string> p{"t0", "t1", "t2"};
  return {exact_one_form(p, {"3*t1^2*t2/(2*" + D + ")", "-3*t1*(1+t0*t2)/(4*" + D + ")",
                             "-3*t0*(1+t0*t2+t1^2)/(2*" + D + ")"}),
          exact_one_form(p, {"-3*t1^2*t2/(4*" + D + ")",
                             std::string("-3*t1*(1+t0*") + (b1_with_t2 ? "t2" : "t1") + ")/(4*" + D + ")",
                             "-3*t0*(1+t0*t2+t1^2)/(2*" + D + ")"})};
}

Matrix normalize_conformal(const Matrix& g) {
  const double big = g.cwiseAbs().maxCoeff();
  if (big == 0.0) throw ToleranceError("conformal matrix vanishes", 0.0, 0.0);
  for (Eigen::Index a = 0; a < g.rows(); ++a)
    for (Eigen::Index b = 0; b < g.cols(); ++b)
      if (std::abs(g(a, b)) > 1e-8 * big) return g / g(a, b);
  return g;
}

Matrix conformal_from_family(const family::FamilyEvaluator& ev, std::span<const cd> t,
                             std::size_t K) {
  const std::size_t m = ev.m();
  const family::CircleData data = ev.circle(t, 1.0, K);

  // log(z^2 F) along the circle, unwrapped; winding must be zero for deg N = 2
  std::vector<cd> logv(K);
  double prev = 0.0, offset = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const cd v = data.pts[k].z * data.pts[k].z * data.pts[k].F;
    double ang = std::arg(v);
    if (k > 0) {
      while (ang + offset - prev > M_PI) offset -= 2 * M_PI;
      while (ang + offset - prev < -M_PI) offset += 2 * M_PI;
    }
    prev = ang + offset;
    logv[k] = {std::log(std::abs(v)), prev};
  }
  const double close = std::abs(std::arg(data.pts[0].z * data.pts[0].z * data.pts[0].F) - prev);
  if (close > M_PI) throw ToleranceError("normal bundle is not O(2)", close, M_PI);
  const cech::LaurentSplit s = cech::laurent_split(logv, 1.0, true, 1e-12);
  const auto plus = s.plus.samples();

  std::vector<std::vector<cd>> coef(m, std::vector<cd>(3));
  double worst = 0.0, scale = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    std::vector<cd> p(K);
    for (std::size_t k = 0; k < K; ++k) p[k] = data.pts[k].d1[a] * std::exp(plus[k]);
    const auto W = cech::LaurentWindow::from_samples(p, 1.0);
    for (long k = W.kmin(); k <= W.kmax(); ++k) {
      if (k >= 0 && k <= 2) {
        coef[a][k] = W.coeff(k);
        scale = std::max(scale, std::abs(W.coeff(k)));
      } else {
        worst = std::max(worst, std::abs(W.coeff(k)));
      }
    }
  }
  if (worst > 1e-8 * std::max(1.0, scale))
    throw ToleranceError("sections are not quadratic", worst, 1e-8);

  Matrix M(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      M(a, b) = coef[a][1] * coef[b][1] - 2.0 * (coef[a][0] * coef[b][2] + coef[a][2] * coef[b][0]);
  return normalize_conformal(M);
}

double proportionality_residual(const Matrix& a, const Matrix& b) {
  std::vector<cd> x, y;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i; j < a.cols(); ++j) {
      x.push_back(a(i, j));
      y.push_back(b(i, j));
    }
  double nx = 0.0, ny = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    nx = std::max(nx, std::abs(x[k]));
    ny = std::max(ny, std::abs(y[k]));
  }
  if (nx == 0.0 || ny == 0.0) return nx == ny ? 0.0 : 1.0;
  double res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      res = std::max(res, std::abs(x[i] * y[j] - x[j] * y[i]) / (nx * ny));
  return res;
}

Christoffel levi_civita(const MetricJet& j) {
  const std::size_t m = j.g.rows();
  const Matrix gi = inverse_checked(j.g);
  Christoffel G(m);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a; b < m; ++b) {
        cd s = 0.0;
        for (std::size_t d = 0; d < m; ++d)
          s += gi(c, d) * (j.dg[a](d, b) + j.dg[b](d, a) - j.dg[d](a, b));
        G(c, a, b) = 0.5 * s;
      }
  return G;
}

Christoffel levi_civita(const MetricField& g, std::span<const cd> t) { return levi_civita(g.jet(t)); }

Tensor3 covariant_derivative(const Christoffel& G, const MetricJet& j) {
  const std::size_t m = j.g.rows();
  Tensor3 out(m * m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c) {
        cd s = j.dg[a](b, c);
        for (std::size_t d = 0; d < m; ++d) s -= G(d, a, b) * j.g(d, c) + G(d, a, c) * j.g(b, d);
        out[(a * m + b) * m + c] = s;
      }
  return out;
}

ABSolution solve_ab(const Christoffel& G, const MetricJet& j) {
  const std::size_t m = j.g.rows();
  const Tensor3 ng = covariant_derivative(G, j);
  const std::size_t rows = m * m * (m + 1) / 2;
  Matrix A = Matrix::Zero(rows, 2 * m);
  Eigen::VectorXcd rhs(rows);
  std::size_t r = 0;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = b; c < m; ++c, ++r) {
        A(r, a) += j.g(b, c);
        A(r, m + b) += j.g(a, c);
        A(r, m + c) += j.g(a, b);
        rhs(r) = ng[(a * m + b) * m + c];
      }
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXcd x = svd.solve(rhs);
  ABSolution out;
  const auto& sv = svd.singularValues();
  out.condition = sv(0) > 0 ? sv(sv.size() - 1) / sv(0) : 0.0;
  out.a.assign(x.data(), x.data() + m);
  out.b.assign(x.data() + m, x.data() + 2 * m);
  const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
  out.residual = (A * x - rhs).cwiseAbs().maxCoeff() / scale;
  return out;
}

ABSolution solve_ab(const ChristoffelField& G, const MetricField& g, std::span<const cd> t) {
  return solve_ab(G(t), g.jet(t));
}

Christoffel weyl_connection(const MetricJet& j, const OneForm& omega) {
  const std::size_t m = j.g.rows();
  Christoffel D = levi_civita(j);
  const Matrix gi = inverse_checked(j.g);
  Eigen::VectorXcd w = Eigen::Map<const Eigen::VectorXcd>(omega.data(), m);
  const Eigen::VectorXcd wu = gi * w;
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a; b < m; ++b) {
        cd s = 0.5 * wu(c) * j.g(a, b);
        if (b == c) s -= 0.5 * omega[a];
        if (a == c) s -= 0.5 * omega[b];
        D(c, a, b) += s;
      }
  return D;
}

WeylStructure assemble_weyl_omega(const MetricField& g, OneFormField omega) {
  WeylStructure W{g, omega, {}};
  W.D = [g, omega](std::span<const cd> t) { return weyl_connection(g.jet(t), omega(t)); };
  return W;
}

WeylStructure assemble_weyl(const MetricField& g, OneFormField a, OneFormField b) {
  OneFormField omega = [a = std::move(a), b = std::move(b)](std::span<const cd> t) {
    OneForm av = a(t), bv = b(t);
    for (std::size_t k = 0; k < av.size(); ++k) av[k] -= 2.0 * bv[k];
    return av;
  };
  return assemble_weyl_omega(g, std::move(omega));
}

double weyl_compatibility_residual(const WeylStructure& W, std::span<const cd> t) {
  const MetricJet j = W.g.jet(t);
  const std::size_t m = j.g.rows();
  const Tensor3 Dg = covariant_derivative(W.D(t), j);
  const OneForm w = W.omega(t);
  double res = 0.0;
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        res = std::max(res, std::abs(Dg[(c * m + a) * m + b] - w[c] * j.g(a, b)));
  return res / std::max(1.0, j.g.cwiseAbs().maxCoeff());
}

Matrix symmetric_ricci(const ChristoffelField& D, std::span<const cd> t, double h) {
  const Christoffel G = D(t);
  const std::size_t m = G.m();
  auto flat = [&](std::span<const cd> x) { return D(x).data(); };
  std::vector<Christoffel> dG;  // dG[c] = d_c Gamma
  for (std::size_t c = 0; c < m; ++c) {
    const auto d = richardson(flat, t, c, h);
    Christoffel X(m);
    for (std::size_t g = 0; g < m; ++g)
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a; b < m; ++b) X(g, a, b) = d[Christoffel::flat(m, g, a, b)];
    dG.push_back(std::move(X));
  }
  // Ric_sn = d_r G^r_ns - d_n G^r_rs + G^r_rl G^l_ns - G^r_nl G^l_rs
  Matrix ric(m, m);
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t n = 0; n < m; ++n) {
      cd v = 0.0;
      for (std::size_t r = 0; r < m; ++r) {
        v += dG[r](r, n, s) - dG[n](r, r, s);
        for (std::size_t l = 0; l < m; ++l) v += G(r, r, l) * G(l, n, s) - G(r, n, l) * G(l, r, s);
      }
      ric(s, n) = v;
    }
  return 0.5 * (ric + ric.transpose());
}

double einstein_weyl_residual(const ChristoffelField& D, const MetricField& g,
                              std::span<const cd> t, double h) {
  const Matrix S = symmetric_ricci(D, t, h);
  const Matrix G = g(t);
  const Matrix gi = inverse_checked(G);
  const cd trace = (gi * S).trace();
  const Matrix tf = S - trace / double(G.rows()) * G;
  return tf.cwiseAbs().maxCoeff() / std::max(1.0, S.cwiseAbs().maxCoeff());
}

double einstein_weyl_residual(const WeylStructure& W, std::span<const cd> t, double h) {
  return einstein_weyl_residual(W.D, W.g, t, h);
}

}  // namespace pstruct::weyl
