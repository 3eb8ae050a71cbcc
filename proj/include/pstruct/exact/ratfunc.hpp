#pragma once

#include "pstruct/exact/multipoly.hpp"

namespace pstruct::exact {

/// Reduced quotient num/den of polynomials.
///
/// Invariants: den != 0, gcd(num, den) = 1, and den has unit leading
/// coefficient under the grlex order. Zero is 0/1.
class RatFunc {
public:
  explicit RatFunc(VarList vars);
  explicit RatFunc(MultiPoly num);
  RatFunc(MultiPoly num, MultiPoly den);
  static RatFunc constant(VarList vars, const Scalar& c);

  const MultiPoly& num() const { return num_; }
  const MultiPoly& den() const { return den_; }
  const VarList& vars() const { return num_.vars(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  std::uint64_t support() const { return num_.support() | den_.support(); }

  RatFunc inverse() const;
  RatFunc operator-() const;
  RatFunc& operator+=(const RatFunc& o);
  RatFunc& operator-=(const RatFunc& o);
  RatFunc& operator*=(const RatFunc& o);
  RatFunc& operator/=(const RatFunc& o) { return *this *= o.inverse(); }
  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  RatFunc pow(int n) const;
  RatFunc derivative(std::size_t var) const;
  RatFunc substitute(std::size_t var, const RatFunc& q) const;
  RatFunc permute(const std::vector<std::size_t>& perm) const;
  RatFunc rebase(const VarList& target) const;

  /// Throws PoleError when the reduced denominator vanishes at x.
  cd evaluate(std::span<const cd> x) const;

  std::string str() const;

private:
  void normalize();

  MultiPoly num_;
  MultiPoly den_;
};

}  // namespace pstruct::exact
