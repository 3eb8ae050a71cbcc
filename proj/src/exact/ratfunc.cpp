#include "pstruct/exact/ratfunc.hpp"

#include <cmath>

#include "pstruct/exact/errors.hpp"

namespace pstruct::exact {

RatFunc::RatFunc(VarList vars)
    : num_(vars), den_(MultiPoly::constant(vars, Scalar(1))) {}

RatFunc::RatFunc(MultiPoly num)
    : num_(std::move(num)), den_(MultiPoly::constant(num_.vars(), Scalar(1))) {}

RatFunc::RatFunc(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (!same_vars(num_.vars(), den_.vars()))
    throw std::invalid_argument("numerator and denominator over different variables");
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  normalize();
}

RatFunc RatFunc::constant(VarList vars, const Scalar& c) {
  return RatFunc(MultiPoly::constant(std::move(vars), c));
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = MultiPoly::constant(num_.vars(), Scalar(1));
    return;
  }
  if (!den_.is_constant()) {
    MultiPoly g = gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = *exact_divide(num_, g);
      den_ = *exact_divide(den_, g);
    }
  }
  const Scalar lc = den_.leading_coefficient();
  if (!lc.is_one()) {
    const Scalar inv = lc.inverse();
    num_ *= inv;
    den_ *= inv;
  }
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero rational function");
  return RatFunc(den_, num_);
}

RatFunc RatFunc::operator-() const {
  RatFunc out(*this);
  out.num_ = -out.num_;
  return out;
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    *this = RatFunc(num_ + o.num_, den_);
  } else if (den_.is_constant() && o.den_.is_constant()) {
    num_ += o.num_;  // both denominators are 1 after normalization
  } else {
    *this = RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
  if (is_zero()) return *this;
  if (o.is_zero()) return *this = o;
  if (den_.is_constant() && o.den_.is_constant()) {
    num_ = num_ * o.num_;
    return *this;
  }
  // Cross-cancel before multiplying to keep the gcd small.
  MultiPoly g1 = gcd(num_, o.den_);
  MultiPoly g2 = gcd(o.num_, den_);
  MultiPoly n = *exact_divide(num_, g1) * *exact_divide(o.num_, g2);
  MultiPoly d = *exact_divide(den_, g2) * *exact_divide(o.den_, g1);
  num_ = std::move(n);
  den_ = std::move(d);
  const Scalar lc = den_.leading_coefficient();
  if (!lc.is_one()) {
    const Scalar inv = lc.inverse();
    num_ *= inv;
    den_ *= inv;
  }
  return *this;
}

RatFunc RatFunc::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  return RatFunc(num_.pow(static_cast<unsigned>(n)), den_.pow(static_cast<unsigned>(n)));
}

RatFunc RatFunc::derivative(std::size_t var) const {
  if (den_.is_constant()) return RatFunc(num_.derivative(var), den_);
  const MultiPoly dd = den_.derivative(var);
  if (dd.is_zero()) return RatFunc(num_.derivative(var), den_);
  // With g = gcd(d, d'), (n' (d/g) - n (d'/g)) / (d (d/g)) is already reduced.
  const MultiPoly g = gcd(den_, dd);
  const MultiPoly dg = *exact_divide(den_, g);
  const MultiPoly ddg = *exact_divide(dd, g);
  RatFunc out(vars());
  out.num_ = num_.derivative(var) * dg - num_ * ddg;
  out.den_ = den_ * dg;
  if (out.num_.is_zero()) return RatFunc(vars());
  // Factors of d free of var escape the argument above; reduce fully then.
  MultiPoly content(vars());
  for (const auto& c : den_.coefficients_in(var)) {
    if (c.is_zero()) continue;
    content = gcd(content, c);
    if (content.is_constant()) break;
  }
  if (!content.is_constant()) return RatFunc(out.num_, out.den_);
  const Scalar lc = out.den_.leading_coefficient();
  if (!lc.is_one()) {
    const Scalar inv = lc.inverse();
    out.num_ *= inv;
    out.den_ *= inv;
  }
  return out;
}

RatFunc RatFunc::substitute(std::size_t var, const RatFunc& q) const {
  // Homogenize each side in q = a/b: p(a/b) = P(a, b) / b^deg.
  auto sub_poly = [&](const MultiPoly& p, std::uint32_t deg) {
    auto coeffs = p.coefficients_in(var);
    MultiPoly out(p.vars());
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      if (coeffs[k].is_zero()) continue;
      out += coeffs[k] * q.num().pow(static_cast<unsigned>(k)) *
             q.den().pow(static_cast<unsigned>(deg - k));
    }
    return out;
  };
  const std::uint32_t dn = num_.degree(var);
  const std::uint32_t dd = den_.degree(var);
  MultiPoly n = sub_poly(num_, dn);
  MultiPoly d = sub_poly(den_, dd);
  if (dn > dd) {
    d = d * q.den().pow(dn - dd);
  } else if (dd > dn) {
    n = n * q.den().pow(dd - dn);
  }
  return RatFunc(std::move(n), std::move(d));
}

RatFunc RatFunc::permute(const std::vector<std::size_t>& perm) const {
  return RatFunc(num_.permute(perm), den_.permute(perm));
}

RatFunc RatFunc::rebase(const VarList& target) const {
  return RatFunc(num_.rebase(target), den_.rebase(target));
}

cd RatFunc::evaluate(std::span<const cd> x) const {
  const cd d = den_.evaluate(x);
  if (std::abs(d) == 0.0) throw PoleError("denominator " + den_.str() + " vanishes");
  return num_.evaluate(x) / d;
}

std::string RatFunc::str() const {
  if (den_.is_constant()) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

}  // namespace pstruct::exact
