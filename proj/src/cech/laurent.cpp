#include "pstruct/cech/laurent.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "pstruct/exact/errors.hpp"

namespace pstruct::cech {

namespace {

// Planning is not thread-safe in FFTW; execution of an existing plan on new
// arrays is.
struct PlanCache {
  std::mutex mu;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans;

  fftw_plan get(std::size_t K, int sign) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = plans.find({K, sign});
    if (it != plans.end()) return it->second;
    std::vector<cd> in(K), out(K);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(K), reinterpret_cast<fftw_complex*>(in.data()),
                                   reinterpret_cast<fftw_complex*>(out.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans.emplace(std::make_pair(K, sign), p);
    return p;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

std::vector<cd> dft(std::span<const cd> in, int sign) {
  std::vector<cd> src(in.begin(), in.end()), out(in.size());
  fftw_execute_dft(cache().get(in.size(), sign), reinterpret_cast<fftw_complex*>(src.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

LaurentWindow LaurentWindow::from_samples(std::span<const cd> values, double r) {
  const std::size_t K = values.size();
  if (K < 2 || K % 2 != 0) throw std::invalid_argument("Laurent window needs an even sample count");
  const std::vector<cd> X = dft(values, FFTW_FORWARD);
  LaurentWindow w(r, K);
  for (long k = w.kmin(); k <= w.kmax(); ++k) {
    const std::size_t idx = k >= 0 ? static_cast<std::size_t>(k) : static_cast<std::size_t>(long(K) + k);
    w.coeff(k) = X[idx] / double(K) * std::pow(r, -double(k));
  }
  return w;
}

cd LaurentWindow::operator()(cd z) const {
  cd pos = 0.0, neg = 0.0;
  for (long k = kmax(); k >= 0; --k) pos = pos * z + coeff(k);
  const cd u = 1.0 / z;
  for (long k = kmin(); k <= -1; ++k) neg = (neg + coeff(k)) * u;
  return pos + neg;
}

std::vector<cd> LaurentWindow::samples() const {
  const std::size_t K = c_.size();
  std::vector<cd> X(K);
  for (long k = kmin(); k <= kmax(); ++k) {
    const std::size_t idx = k >= 0 ? static_cast<std::size_t>(k) : static_cast<std::size_t>(long(K) + k);
    X[idx] = coeff(k) * std::pow(r_, double(k));
  }
  return dft(X, FFTW_BACKWARD);
}

double LaurentWindow::tail() const {
  double t = 0.0;
  for (long k : {kmin(), kmin() + 1, kmax() - 1, kmax()}) t = std::max(t, std::abs(coeff(k)));
  return t;
}

double LaurentWindow::max_coeff() const {
  double m = 0.0;
  for (const auto& c : c_) m = std::max(m, std::abs(c));
  return m;
}

LaurentWindow& LaurentWindow::operator+=(const LaurentWindow& o) {
  if (o.c_.size() != c_.size()) throw std::invalid_argument("Laurent windows of different size");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

LaurentWindow& LaurentWindow::operator*=(cd s) {
  for (auto& c : c_) c *= s;
  return *this;
}

LaurentSplit laurent_split(std::span<const cd> values, double r, bool constant_to_plus,
                           double tail_tol) {
  const LaurentWindow all = LaurentWindow::from_samples(values, r);
  LaurentSplit s{LaurentWindow(r, all.size()), LaurentWindow(r, all.size()), 0.0, all.tail()};
  if (!all.valid(tail_tol))
    throw ToleranceError("Laurent tail has not decayed", s.tail, tail_tol * std::max(1.0, all.max_coeff()));
  const long first_plus = constant_to_plus ? 0 : 1;
  for (long k = all.kmin(); k <= all.kmax(); ++k) {
    if (k >= first_plus) {
      s.plus.coeff(k) = all.coeff(k);
    } else {
      s.minus.coeff(k) = all.coeff(k);
    }
  }
  LaurentWindow sum = s.plus;
  sum += s.minus;
  const auto back = sum.samples();
  for (std::size_t n = 0; n < values.size(); ++n)
    s.reconstruction = std::max(s.reconstruction, std::abs(back[n] - values[n]));
  return s;
}

}  // namespace pstruct::cech
