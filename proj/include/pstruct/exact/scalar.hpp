#pragma once

#include <complex>
#include <string>

#include <gmpxx.h>

namespace pstruct::exact {

using cd = std::complex<double>;

/// Gaussian rational re + i*im with arbitrary-precision parts.
///
/// mpq_class keeps each part in lowest terms with a positive denominator,
/// so structural equality is value equality.
class Scalar {
public:
  Scalar() = default;
  Scalar(long n) : re_(n) {}  // NOLINT(google-explicit-constructor)
  Scalar(mpq_class re, mpq_class im = 0);

  static Scalar imag_unit() { return Scalar(0, 1); }
  /// Parses a decimal integer literal.
  static Scalar from_integer_string(const std::string& digits);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  Scalar conj() const { return Scalar(re_, -im_); }
  /// Throws std::domain_error on zero.
  Scalar inverse() const;

  Scalar operator-() const { return Scalar(-re_, -im_); }
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  cd to_complex() const;

  /// Printed in the expression grammar, e.g. "3/2", "(1/2+3*i)", "-i".
  std::string str() const;
  /// True when str() needs no parentheses as a product factor.
  bool is_atomic() const;

private:
  mpq_class re_{0};
  mpq_class im_{0};
};

}  // namespace pstruct::exact
