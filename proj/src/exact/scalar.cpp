#include "pstruct/exact/scalar.hpp"

#include <stdexcept>

namespace pstruct::exact {

Scalar::Scalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

Scalar Scalar::from_integer_string(const std::string& digits) {
  mpq_class v;
  v.get_num() = mpz_class(digits, 10);
  v.get_den() = 1;
  return Scalar(v, 0);
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero scalar");
  mpq_class n = re_ * re_ + im_ * im_;
  return Scalar(re_ / n, -im_ / n);
}

Scalar& Scalar::operator+=(const Scalar& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (is_real() && o.is_real()) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

cd Scalar::to_complex() const { return {re_.get_d(), im_.get_d()}; }

namespace {

std::string rational_str(const mpq_class& q) { return q.get_str(10); }

}  // namespace

bool Scalar::is_atomic() const {
  if (sgn(im_) == 0) return re_.get_den() == 1 && sgn(re_) >= 0;
  return sgn(re_) == 0 && im_ == 1;
}

std::string Scalar::str() const {
  if (sgn(im_) == 0) return rational_str(re_);
  std::string imag;
  if (im_ == 1) {
    imag = "i";
  } else if (im_ == -1) {
    imag = "-i";
  } else {
    imag = rational_str(im_) + "*i";
  }
  if (sgn(re_) == 0) return imag == "i" ? imag : "(" + imag + ")";
  std::string out = "(" + rational_str(re_);
  if (imag[0] != '-') out += "+";
  return out + imag + ")";
}

}  // namespace pstruct::exact
