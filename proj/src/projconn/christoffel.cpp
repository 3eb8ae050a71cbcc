#include "pstruct/projconn/christoffel.hpp"

#include "pstruct/exact/compiled.hpp"
#include "pstruct/exact/parser.hpp"

namespace pstruct::projconn {

double Christoffel::max_abs() const {
  double m = 0.0;
  for (const auto& x : v_) m = std::max(m, std::abs(x));
  return m;
}

Christoffel& Christoffel::operator+=(const Christoffel& o) {
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
  return *this;
}

Christoffel& Christoffel::operator-=(const Christoffel& o) {
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
  return *this;
}

std::vector<cd> Christoffel::contract(std::span<const cd> V) const {
  std::vector<cd> out(m_, 0.0);
  for (std::size_t g = 0; g < m_; ++g)
    for (std::size_t a = 0; a < m_; ++a)
      for (std::size_t b = 0; b < m_; ++b) out[g] += (*this)(g, a, b) * V[a] * V[b];
  return out;
}

ExactChristoffel::ExactChristoffel(exact::VarList vars, std::size_t m)
    : m_(m), vars_(vars), v_(m * m * (m + 1) / 2, exact::RatFunc(vars)) {}

void ExactChristoffel::set(std::size_t g, std::size_t a, std::size_t b, exact::RatFunc r) {
  v_[Christoffel::flat(m_, g, a, b)] = std::move(r);
}

const exact::RatFunc& ExactChristoffel::get(std::size_t g, std::size_t a, std::size_t b) const {
  return v_[Christoffel::flat(m_, g, a, b)];
}

Christoffel ExactChristoffel::evaluate(std::span<const cd> t) const {
  return field()(t);
}

ChristoffelField ExactChristoffel::field() const {
  std::vector<exact::CompiledRatFunc> compiled;
  for (const auto& r : v_) compiled.emplace_back(r);
  const std::size_t m = m_;
  return [compiled = std::move(compiled), m](std::span<const cd> t) {
    Christoffel G(m);
    for (std::size_t g = 0; g < m; ++g)
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a; b < m; ++b) {
          G(g, a, b) = compiled[Christoffel::flat(m, g, a, b)](t);
        }
    return G;
  };
}

ExactChristoffel closed_form_connection(const std::vector<std::string>& params,
                                        const std::vector<ClosedFormEntry>& entries) {
  auto vars = exact::make_vars(params);
  ExactChristoffel G(vars, params.size());
  for (const auto& e : entries) G.set(e.g, e.a, e.b, exact::parse_rational(e.expr, vars));
  return G;
}

ExactChristoffel cover_table_connection(bool sign_corrected) {
  const std::string D = "((1+t0*t2)^2+t1^2*(1+2*t0*t2))";
  const std::string s02 = sign_corrected ? "-" : "";
  return closed_form_connection(
      {"t0", "t1", "t2"},
      {{0, 0, 1, "t1*(1+3*t0*t2)/(2*" + D + ")"},
       {1, 0, 1, "t2*(2+t1^2+2*t0*t2)/(2*" + D + ")"},
       {0, 0, 0, "t2*(1+t0*t2)/" + D},
       {1, 0, 0, "-t1*t2^2/" + D},
       {0, 0, 2, s02 + "t0*(1+t0*t2+t1^2)/(2*" + D + ")"},
       {1, 0, 2, "-t1*(1+t1^2)/(2*" + D + ")"},
       {0, 1, 1, "-t0*(1+t0*t2)/" + D},
       {1, 1, 1, "t0*t1*t2/" + D},
       {0, 1, 2, "-t0^2*t1/(2*" + D + ")"},
       {1, 1, 2, "-t0*(1+t0*t2+t1^2)/(2*" + D + ")"}});
}

}  // namespace pstruct::projconn
