#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pstruct/cech/split.hpp"
#include "pstruct/projconn/christoffel.hpp"

namespace pstruct::projconn {

struct ExtractionOptions {
  std::size_t nsamples = 32;  // per chart, taken evenly from the circle data
  std::size_t offset = 0;     // first sample index, for disjoint sample sets
  double residual_tol = 1e-8;
  double rank_tol = 1e-10;    // smallest/largest singular value
};

struct Extraction {
  Christoffel gamma;
  double residual = 0.0;     // max |Phi - Gamma d phi| relative to max(1, |Phi|)
  double asymmetry = 0.0;    // |Gamma_ab - Gamma_ba| from separate solves
  double condition = 0.0;
};

/// Solves Phi_ab(z_k) = Gamma^g_ab d_g phi(z_k) in least squares over samples
/// of both charts. theta holds the cochain values at the circle samples.
Extraction extract_connection(const family::CircleData& data,
                              const std::vector<std::vector<cd>>& theta1,
                              const std::vector<std::vector<cd>>& theta2,
                              const ExtractionOptions& opt = {});
Extraction extract_connection(const family::CircleData& data, const cech::Cochain0Form& theta,
                              const ExtractionOptions& opt = {});

struct PipelineOptions {
  cech::SplitOptions split;
  ExtractionOptions extraction;
};

struct PipelineResult {
  Christoffel gamma;
  cech::SplitDiagnostics split;
  double extraction_residual = 0.0;
};

/// Circle samples, tau, splitting and extraction at one parameter point.
PipelineResult connection_at(const family::FamilyEvaluator& ev, std::span<const cd> t,
                             const PipelineOptions& opt = {});
ChristoffelField pipeline_field(const family::FamilyEvaluator& ev, PipelineOptions opt = {});

struct GridPoint {
  std::vector<cd> t;
  std::optional<PipelineResult> result;
  std::string error;
};

/// connection_at over many points; the parallel kernel runs points as
/// independent OpenMP tasks and must agree with the serial one bitwise.
std::vector<GridPoint> connection_grid_serial(const family::FamilyEvaluator& ev,
                                              const std::vector<std::vector<cd>>& points,
                                              const PipelineOptions& opt = {});
std::vector<GridPoint> connection_grid_parallel(const family::FamilyEvaluator& ev,
                                                const std::vector<std::vector<cd>>& points,
                                                const PipelineOptions& opt = {});

/// n^m points on [lo, hi]^m, first coordinate slowest.
std::vector<std::vector<cd>> uniform_grid(std::size_t m, std::size_t n, double lo, double hi);

struct ProjectiveDifference {
  cech::GaugeOneForm xi;
  double residual = 0.0;
};

/// Writes a - b = xi_a delta^g_b + xi_b delta^g_a + remainder and reports the
/// largest remainder entry.
ProjectiveDifference projective_difference(const Christoffel& a, const Christoffel& b);

Christoffel gauge_connection(Christoffel G, const cech::GaugeOneForm& xi);

}  // namespace pstruct::projconn
