#pragma once

#include <complex>
#include <span>
#include <vector>

namespace pstruct::cech {

using cd = std::complex<double>;

/// Laurent coefficients c_k, k in [-K/2, K/2), of a function sampled at
/// z_n = r exp(2 pi i n / K).
class LaurentWindow {
public:
  LaurentWindow() = default;
  LaurentWindow(double r, std::size_t K) : r_(r), c_(K, 0.0) {}

  static LaurentWindow from_samples(std::span<const cd> values, double r);

  double radius() const { return r_; }
  std::size_t size() const { return c_.size(); }
  long kmin() const { return -static_cast<long>(c_.size() / 2); }
  long kmax() const { return static_cast<long>(c_.size() / 2) - 1; }

  cd coeff(long k) const { return c_[static_cast<std::size_t>(k - kmin())]; }
  cd& coeff(long k) { return c_[static_cast<std::size_t>(k - kmin())]; }

  /// Resummation at an arbitrary point.
  cd operator()(cd z) const;
  /// Values at the K sample points (inverse transform).
  std::vector<cd> samples() const;

  /// Largest coefficient modulus at the two outermost indices on each side.
  double tail() const;
  double max_coeff() const;
  /// Tail small relative to max(1, max |c_k|).
  bool valid(double tol = 1e-12) const { return tail() <= tol * std::max(1.0, max_coeff()); }

  LaurentWindow& operator+=(const LaurentWindow& o);
  LaurentWindow& operator*=(cd s);

private:
  double r_ = 1.0;
  std::vector<cd> c_;
};

struct LaurentSplit {
  LaurentWindow plus;   // k >= 0 (constant included by default)
  LaurentWindow minus;  // k < 0
  double reconstruction = 0.0;
  double tail = 0.0;
};

/// Splits sampled values h(z_n) into non-negative and negative powers.
/// Throws ToleranceError when the tail has not decayed (pole near the
/// circle or K too small).
LaurentSplit laurent_split(std::span<const cd> values, double r, bool constant_to_plus = true,
                           double tail_tol = 1e-12);

}  // namespace pstruct::cech
