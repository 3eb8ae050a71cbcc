#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pstruct/exact/ratfunc.hpp"

namespace pstruct::exact {

/// A formal square root s with s^2 = radicand.
struct RootDef {
  std::string symbol;
  MultiPoly radicand;
};

/// Variables plus the ordered list of declared square roots over them.
/// At most 32 roots; root j is bit j of a coefficient key.
struct RootSystem {
  VarList vars;
  std::vector<RootDef> roots;

  std::size_t nvars() const { return vars->size(); }
  std::size_t nroots() const { return roots.size(); }
  std::size_t root_index(const std::string& symbol) const;
};

using RootSystemPtr = std::shared_ptr<const RootSystem>;

RootSystemPtr make_root_system(VarList vars, std::vector<RootDef> roots = {});

/// Element of Q(i)(vars)[s_1..s_k]/(s_j^2 - D_j) in multilinear normal form:
/// sum over subsets S of c_S * prod_{j in S} s_j, with c_S rational functions.
class RootExtElem {
public:
  using Key = std::uint32_t;

  RootExtElem() = default;  // placeholder; assign before use
  explicit RootExtElem(RootSystemPtr sys);
  RootExtElem(RootSystemPtr sys, RatFunc r);
  static RootExtElem constant(RootSystemPtr sys, const Scalar& c);
  static RootExtElem variable(RootSystemPtr sys, std::size_t var);
  static RootExtElem root(RootSystemPtr sys, std::size_t j);

  const RootSystemPtr& system() const { return sys_; }
  const VarList& vars() const { return sys_->vars; }
  const std::map<Key, RatFunc>& coeffs() const { return coeffs_; }

  bool is_zero() const { return coeffs_.empty(); }
  bool is_rational() const;
  /// Throws std::domain_error unless is_rational().
  RatFunc as_rational() const;
  /// Union of keys in use.
  Key roots_used() const;
  /// Variable support including the radicands of roots in use.
  std::uint64_t support() const;

  RootExtElem operator-() const;
  RootExtElem& operator+=(const RootExtElem& o);
  RootExtElem& operator-=(const RootExtElem& o);
  RootExtElem& operator*=(const RootExtElem& o);
  RootExtElem& operator/=(const RootExtElem& o) { return *this *= o.inverse(); }
  friend RootExtElem operator+(RootExtElem a, const RootExtElem& b) { return a += b; }
  friend RootExtElem operator-(RootExtElem a, const RootExtElem& b) { return a -= b; }
  friend RootExtElem operator*(RootExtElem a, const RootExtElem& b) { return a *= b; }
  friend RootExtElem operator/(RootExtElem a, const RootExtElem& b) { return a /= b; }
  friend bool operator==(const RootExtElem& a, const RootExtElem& b);

  /// Inverse by successive conjugation; throws std::domain_error when the
  /// norm vanishes.
  RootExtElem inverse() const;
  RootExtElem pow(int n) const;
  /// d s_j = D_j' s_j / (2 D_j).
  RootExtElem derivative(std::size_t var) const;
  /// Substitutes a root-free rational function for var. Throws
  /// std::domain_error if a root in use depends on var.
  RootExtElem substitute(std::size_t var, const RatFunc& q) const;
  /// Applies a variable permutation to coefficients; the result lives in sys
  /// (whose radicands must be the permuted ones).
  RootExtElem permute(const std::vector<std::size_t>& perm, RootSystemPtr sys) const;

  /// Evaluation with explicit root values (one per declared root).
  cd evaluate(std::span<const cd> x, std::span<const cd> root_values) const;

  /// Canonical form in the expression grammar.
  std::string str() const;

private:
  void add(Key k, const RatFunc& c);

  RootSystemPtr sys_;
  std::map<Key, RatFunc> coeffs_;
};

}  // namespace pstruct::exact
