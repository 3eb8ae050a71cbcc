#pragma once

#include <string>
#include <vector>

#include "pstruct/exact/compiled.hpp"
#include "pstruct/projconn/christoffel.hpp"

namespace pstruct::projconn {

/// Parameter chart change t' = forward(t) with inverse t = inverse(t'), given
/// as exact rational expressions. Jacobian and Hessian are differentiated
/// exactly.
class CoordinateMap {
public:
  CoordinateMap(const std::vector<std::string>& params, const std::vector<std::string>& forward,
                const std::vector<std::string>& inverse);

  std::size_t m() const { return m_; }
  std::vector<cd> forward(std::span<const cd> t) const;
  std::vector<cd> inverse(std::span<const cd> tp) const;
  /// d t'^a / d t^b at t, row a.
  std::vector<std::vector<cd>> jacobian(std::span<const cd> t) const;
  /// d^2 t'^a / d t^b d t^c at t, packed (b <= c) per a.
  Christoffel hessian(std::span<const cd> t) const;

  CoordinateMap inverted() const;

private:
  CoordinateMap() = default;
  void compile();

  std::size_t m_ = 0;
  std::vector<exact::RatFunc> fwd_, inv_;
  std::vector<exact::CompiledRatFunc> cf_, ci_, cjac_, chess_;
};

/// Gamma'(t') = J Gamma(J^-1., J^-1.) - d^2t'(J^-1., J^-1.), with t = inverse(t').
/// Throws PoleError when the Jacobian is singular.
ChristoffelField transform_coordinates(ChristoffelField G, const CoordinateMap& map);

}  // namespace pstruct::projconn
