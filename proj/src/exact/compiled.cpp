#include "pstruct/exact/compiled.hpp"

#include <cmath>

#include "pstruct/exact/errors.hpp"

namespace pstruct::exact {

namespace {

cd ipow(cd base, std::uint32_t e) {
  cd r = 1.0;
  while (e > 0) {
    if (e & 1u) r *= base;
    e >>= 1u;
    if (e > 0) base *= base;
  }
  return r;
}

}  // namespace

CompiledPoly::CompiledPoly(const MultiPoly& p) {
  terms_.reserve(p.terms().size());
  for (const auto& [exps, c] : p.terms()) {
    Term t{c.to_complex(), {}};
    for (std::uint32_t v = 0; v < exps.size(); ++v)
      if (exps[v] > 0) t.factors.emplace_back(v, exps[v]);
    terms_.push_back(std::move(t));
  }
}

cd CompiledPoly::operator()(std::span<const cd> x) const {
  cd sum = 0.0;
  for (const auto& t : terms_) {
    cd m = t.coef;
    for (const auto& [v, e] : t.factors) m *= ipow(x[v], e);
    sum += m;
  }
  return sum;
}

double CompiledPoly::magnitude(std::span<const cd> x) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double m = std::abs(t.coef);
    for (const auto& [v, e] : t.factors) m *= std::pow(std::abs(x[v]), e);
    sum += m;
  }
  return sum;
}

CompiledRatFunc::CompiledRatFunc(const RatFunc& r)
    : num_(r.num()), den_(r.den()), den_constant_(r.den().is_constant()) {}

cd CompiledRatFunc::operator()(std::span<const cd> x) const {
  const cd n = num_(x);
  if (den_constant_) return n / den_(x);
  const cd d = den_(x);
  if (std::abs(d) <= rel_pole * den_.magnitude(x)) throw PoleError("evaluation at a pole");
  return n / d;
}

CompiledElem::CompiledElem(const RootExtElem& e) : used_(e.roots_used()) {
  for (const auto& [k, c] : e.coeffs()) parts_.emplace_back(k, CompiledRatFunc(c));
}

cd CompiledElem::operator()(std::span<const cd> x, std::span<const cd> roots) const {
  cd sum = 0.0;
  for (const auto& [k, c] : parts_) {
    cd term = c(x);
    for (std::size_t j = 0; k >> j; ++j)
      if ((k >> j) & 1u) term *= roots[j];
    sum += term;
  }
  return sum;
}

}  // namespace pstruct::exact
