#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pstruct/exact/branch.hpp"

namespace pstruct::family {

using exact::cd;
using exact::RootExtElem;
using exact::Scalar;

// Shared variable layout of every family: fiber coordinates of both charts,
// then the parameters.
enum : std::size_t { W = 0, Z = 1, WH = 2, ZH = 3, T = 4 };

exact::VarList family_vars(const std::vector<std::string>& params,
                           const std::vector<std::string>& fiber = {"w", "z", "wh", "zh"});

/// Chart 2 <- chart 1: wh = f(w, z), zh = g(w, z).
struct Transition {
  RootExtElem f;
  RootExtElem g;
};

struct Family {
  std::string name;
  std::vector<std::string> params;
  exact::RootSystemPtr sys;
  RootExtElem phi1;  // in (z, t)
  RootExtElem phi2;  // in (zh, t)
  Transition forward;
  std::optional<Transition> inverse;  // chart 1 <- chart 2, in (wh, zh)
  std::vector<Scalar> t0;
  double r_in = 0.5;
  double r_out = 2.0;
  double validity_radius = 0.3;
  exact::BranchContext branch;

  std::size_t m() const { return params.size(); }
  std::vector<cd> t0_complex() const;
  /// (w, z, wh, zh, t) = (0, 1, 0, 1, t0), where every root is based.
  std::vector<Scalar> base_point() const;
  /// Chart roles swapped; requires the inverse transition.
  Family reversed() const;
};

/// Checks the data-model invariants; throws InvariantViolation naming the
/// first one that fails.
void validate(const Family& fam);

Family build_quadric_11();
Family build_branched_cover_12();

/// Polynomials recorded by the (1,2)-cover builder, over (z, t0, t1, t2).
struct CoverPolynomials {
  exact::MultiPoly P, Q, R, Delta;
};
CoverPolynomials cover_polynomials();

/// Self-intersection modulo n; zero means the n-fold branched cover exists.
long branched_cover_obstruction(long selfint, long n);

}  // namespace pstruct::family
