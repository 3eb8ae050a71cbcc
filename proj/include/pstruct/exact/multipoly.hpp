#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pstruct/exact/scalar.hpp"

namespace pstruct::exact {

using Exponents = std::vector<std::uint32_t>;
using VarList = std::shared_ptr<const std::vector<std::string>>;

VarList make_vars(std::vector<std::string> names);
bool same_vars(const VarList& a, const VarList& b);

/// Graded lexicographic order: total degree first, then the first variable
/// dominates. The greatest term under this order is the leading term.
struct GrlexLess {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Sparse multivariate polynomial over the Gaussian rationals.
///
/// Terms with zero coefficient are never stored; the zero polynomial has an
/// empty term map. All binary operations require identical variable lists.
class MultiPoly {
public:
  using TermMap = std::map<Exponents, Scalar, GrlexLess>;

  explicit MultiPoly(VarList vars);
  static MultiPoly constant(VarList vars, const Scalar& c);
  static MultiPoly variable(VarList vars, std::size_t index);
  static MultiPoly monomial(VarList vars, Exponents e, const Scalar& c);

  const VarList& vars() const { return vars_; }
  std::size_t nvars() const { return vars_->size(); }
  const TermMap& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Coefficient of the unit monomial.
  Scalar constant_term() const;
  /// Leading term under GrlexLess; throws on zero.
  const std::pair<const Exponents, Scalar>& leading_term() const;
  const Scalar& leading_coefficient() const { return leading_term().second; }

  std::uint32_t degree(std::size_t var) const;
  std::uint32_t total_degree() const;
  /// Bitmask of variables that occur with positive exponent (first 64).
  std::uint64_t support() const;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const MultiPoly& o);
  MultiPoly& operator*=(const Scalar& c);
  MultiPoly operator-() const;
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const Scalar& c) { return a *= c; }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b);

  MultiPoly pow(unsigned n) const;
  MultiPoly derivative(std::size_t var) const;

  /// Coefficients c_k (free of var) with p = sum_k c_k var^k.
  std::vector<MultiPoly> coefficients_in(std::size_t var) const;
  static MultiPoly from_coefficients(VarList vars, std::size_t var,
                                     const std::vector<MultiPoly>& coeffs);

  /// Replaces var by q everywhere.
  MultiPoly substitute(std::size_t var, const MultiPoly& q) const;
  /// Variable index k of the result holds what index perm[k] held here.
  MultiPoly permute(const std::vector<std::size_t>& perm) const;
  /// Re-expresses the polynomial over a superset variable list (by name).
  MultiPoly rebase(const VarList& target) const;

  cd evaluate(std::span<const cd> x) const;

  std::string str() const;

private:
  void add_term(const Exponents& e, const Scalar& c);

  VarList vars_;
  TermMap terms_;
};

/// Exact quotient a / b when b divides a, otherwise nullopt.
std::optional<MultiPoly> exact_divide(const MultiPoly& a, const MultiPoly& b);
/// Monic (unit leading coefficient) greatest common divisor; gcd(0,0) = 0.
MultiPoly gcd(const MultiPoly& a, const MultiPoly& b);
/// Divides by the leading coefficient.
MultiPoly make_monic(const MultiPoly& p);
/// Resultant in var via fraction-free elimination on the Sylvester matrix.
MultiPoly resultant(const MultiPoly& p, const MultiPoly& q, std::size_t var);
/// Name lookup; throws std::out_of_range for unknown names.
std::size_t var_index(const VarList& vars, const std::string& name);

}  // namespace pstruct::exact
