#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "pstruct/exact/compiled.hpp"
#include "pstruct/family/evaluator.hpp"
#include "pstruct/projconn/christoffel.hpp"

namespace pstruct::weyl {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using projconn::Christoffel;
using projconn::ChristoffelField;

/// Metric value and its first derivatives at a point.
struct MetricJet {
  Matrix g;
  std::vector<Matrix> dg;  // dg[c] = d_c g
};

/// Symmetric metric over the parameters: value and first derivatives.
struct MetricField {
  std::size_t m = 0;
  std::function<MetricJet(std::span<const cd>)> jet;
  Matrix operator()(std::span<const cd> t) const { return jet(t).g; }
};

/// Metric with exact rational entries; only a <= b is stored.
class ExactMetric {
public:
  ExactMetric(const std::vector<std::string>& params, const std::vector<std::string>& upper);
  std::size_t m() const { return m_; }
  const exact::RatFunc& entry(std::size_t a, std::size_t b) const;
  /// Compiled value and exact first derivatives; throws PoleError when
  /// det g vanishes.
  MetricField field() const;
  const exact::VarList& vars() const { return vars_; }

private:
  std::size_t m_;
  exact::VarList vars_;
  std::vector<exact::RatFunc> e_;
};

/// Metric given numerically; derivatives by Richardson-extrapolated central
/// differences with step h.
MetricField numeric_metric_field(std::size_t m, std::function<Matrix(std::span<const cd>)> g,
                                 double h = 1e-3);

/// The tabulated conformal representative for the (1,2)-cover moduli space,
/// off-diagonal entries halved from the dt_a dt_b coefficients.
ExactMetric cover_metric();

using OneForm = std::vector<cd>;
using OneFormField = std::function<OneForm(std::span<const cd>)>;

/// Exact 1-form with one rational expression per component.
struct ExactOneForm {
  std::vector<exact::RatFunc> c;
  std::vector<exact::CompiledRatFunc> compiled;
  OneForm operator()(std::span<const cd> t) const;
};
ExactOneForm exact_one_form(const std::vector<std::string>& params,
                            const std::vector<std::string>& components);

/// The tabulated a and b; b1_with_t2 selects (1 + t0 t2) in b_1 instead
/// of the tabulated (1 + t0 t1).
struct CoverForms {
  ExactOneForm a, b;
};
CoverForms cover_forms(bool b1_with_t2);

/// Discriminant of the quadratic section V^a d_a phi in V, from the
/// trivialised sections on |z| = 1. Normalised so the first entry (row-major)
/// that is not negligible equals 1. Throws when sections are not quadratic.
Matrix conformal_from_family(const family::FamilyEvaluator& ev, std::span<const cd> t,
                             std::size_t K = 256);
/// Largest 2x2 minor of the stacked upper triangles, each column normalised.
double proportionality_residual(const Matrix& a, const Matrix& b);

/// Normalises so that the first non-negligible entry (row-major) is 1.
Matrix normalize_conformal(const Matrix& g);

Christoffel levi_civita(const MetricField& g, std::span<const cd> t);
Christoffel levi_civita(const MetricJet& j);

/// (nabla g)_{abc} = d_a g_bc - Gamma^d_ab g_dc - Gamma^d_ac g_bd; the
/// derivative index comes first. Stored as [a][b][c].
using Tensor3 = std::vector<cd>;
Tensor3 covariant_derivative(const Christoffel& G, const MetricJet& j);

struct ABSolution {
  OneForm a, b;
  double residual = 0.0;  // relative to max(1, |nabla g|)
  double condition = 0.0;
};
/// Least squares for (nabla g)_{abc} = a_a g_bc + b_b g_ac + b_c g_ab over the
/// 18 equations b <= c.
ABSolution solve_ab(const Christoffel& G, const MetricJet& j);
ABSolution solve_ab(const ChristoffelField& G, const MetricField& g, std::span<const cd> t);

struct WeylStructure {
  MetricField g;
  OneFormField omega;
  ChristoffelField D;
};

/// omega = a - 2b; D = LC + omega^c g_ab / 2 - (omega_a d^c_b + omega_b d^c_a) / 2,
/// which gives D g = +omega (x) g.
WeylStructure assemble_weyl(const MetricField& g, OneFormField a, OneFormField b);
WeylStructure assemble_weyl_omega(const MetricField& g, OneFormField omega);
Christoffel weyl_connection(const MetricJet& j, const OneForm& omega);

/// max |D_c g_ab - omega_c g_ab| relative to max(1, |g|).
double weyl_compatibility_residual(const WeylStructure& W, std::span<const cd> t);

/// Trace-free part of the symmetrised Ricci tensor of D relative to
/// max(1, |Ric_sym|); curvature by Richardson central differences of D.
double einstein_weyl_residual(const WeylStructure& W, std::span<const cd> t, double h = 1e-3);
/// Same with D given directly (no metric derivative needed).
double einstein_weyl_residual(const ChristoffelField& D, const MetricField& g,
                              std::span<const cd> t, double h = 1e-3);

/// Symmetrised Ricci tensor of a connection field.
Matrix symmetric_ricci(const ChristoffelField& D, std::span<const cd> t, double h = 1e-3);

}  // namespace pstruct::weyl
