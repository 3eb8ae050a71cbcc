#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "pstruct/exact/ratfunc.hpp"

namespace pstruct::projconn {

using cd = std::complex<double>;

/// Gamma^g_ab at a point; only a <= b is stored, so symmetry is structural.
class Christoffel {
public:
  Christoffel() = default;
  explicit Christoffel(std::size_t m) : m_(m), v_(m * m * (m + 1) / 2, 0.0) {}

  std::size_t m() const { return m_; }
  cd operator()(std::size_t g, std::size_t a, std::size_t b) const { return v_[flat(m_, g, a, b)]; }
  cd& operator()(std::size_t g, std::size_t a, std::size_t b) { return v_[flat(m_, g, a, b)]; }

  static std::size_t flat(std::size_t m, std::size_t g, std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    return g * (m * (m + 1) / 2) + a * m - a * (a + 1) / 2 + b;
  }
  const std::vector<cd>& data() const { return v_; }

  double max_abs() const;
  Christoffel& operator+=(const Christoffel& o);
  Christoffel& operator-=(const Christoffel& o);
  friend Christoffel operator-(Christoffel a, const Christoffel& b) { return a -= b; }
  friend Christoffel operator+(Christoffel a, const Christoffel& b) { return a += b; }

  /// Gamma(V, V)^g = Gamma^g_ab V^a V^b.
  std::vector<cd> contract(std::span<const cd> V) const;

private:
  std::size_t m_ = 0;
  std::vector<cd> v_;
};

using ChristoffelField = std::function<Christoffel(std::span<const cd> t)>;

/// Christoffel symbols with exact rational entries in the parameters.
class ExactChristoffel {
public:
  ExactChristoffel(exact::VarList vars, std::size_t m);

  std::size_t m() const { return m_; }
  const exact::VarList& vars() const { return vars_; }
  void set(std::size_t g, std::size_t a, std::size_t b, exact::RatFunc r);
  const exact::RatFunc& get(std::size_t g, std::size_t a, std::size_t b) const;

  Christoffel evaluate(std::span<const cd> t) const;
  ChristoffelField field() const;

private:
  std::size_t m_;
  exact::VarList vars_;
  std::vector<exact::RatFunc> v_;
};

/// Gamma^g_ab = expr over the named parameters; unlisted entries are zero.
struct ClosedFormEntry {
  std::size_t g, a, b;
  std::string expr;
};
ExactChristoffel closed_form_connection(const std::vector<std::string>& params,
                                        const std::vector<ClosedFormEntry>& entries);

/// The (1,2)-cover connection table. With sign_corrected the 0-02 entry
/// carries a minus sign, which the construction produces.
ExactChristoffel cover_table_connection(bool sign_corrected);

}  // namespace pstruct::projconn
