#pragma once

#include <span>
#include <vector>

#include "pstruct/exact/rootext.hpp"

namespace pstruct::exact {

/// Double-precision snapshot of a polynomial for fast repeated evaluation.
class CompiledPoly {
public:
  CompiledPoly() = default;
  explicit CompiledPoly(const MultiPoly& p);

  cd operator()(std::span<const cd> x) const;
  /// Sum of |term| at x; the natural scale for cancellation checks.
  double magnitude(std::span<const cd> x) const;
  bool is_zero() const { return terms_.empty(); }

private:
  struct Term {
    cd coef;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> factors;  // (var, exponent)
  };
  std::vector<Term> terms_;
};

class CompiledRatFunc {
public:
  CompiledRatFunc() = default;
  explicit CompiledRatFunc(const RatFunc& r);

  /// Throws PoleError when |den| is below rel_pole times its term scale.
  cd operator()(std::span<const cd> x) const;

  static constexpr double rel_pole = 1e-13;

private:
  CompiledPoly num_, den_;
  bool den_constant_ = true;
};

/// Compiled root-extension element; root values are supplied per call.
class CompiledElem {
public:
  CompiledElem() = default;
  explicit CompiledElem(const RootExtElem& e);

  cd operator()(std::span<const cd> x, std::span<const cd> roots) const;
  RootExtElem::Key roots_used() const { return used_; }

private:
  std::vector<std::pair<RootExtElem::Key, CompiledRatFunc>> parts_;
  RootExtElem::Key used_ = 0;
};

}  // namespace pstruct::exact
