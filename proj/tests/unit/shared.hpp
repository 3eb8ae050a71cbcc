#pragma once

#include "pstruct/family/evaluator.hpp"

// Evaluator construction differentiates the square-root families
// symbolically, so the builders are shared across test cases.
inline const pstruct::family::FamilyEvaluator& cover_ev() {
  static const pstruct::family::Family fam = pstruct::family::build_branched_cover_12();
  static const pstruct::family::FamilyEvaluator ev(fam);
  return ev;
}

inline const pstruct::family::FamilyEvaluator& quadric_ev() {
  static const pstruct::family::Family fam = pstruct::family::build_quadric_11();
  static const pstruct::family::FamilyEvaluator ev(fam);
  return ev;
}

inline std::complex<double> unit_root(std::size_t k, std::size_t K) {
  return std::polar(1.0, 2 * M_PI * double(k) / double(K));
}
