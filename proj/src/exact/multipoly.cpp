#include "pstruct/exact/multipoly.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace pstruct::exact {

VarList make_vars(std::vector<std::string> names) {
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

bool same_vars(const VarList& a, const VarList& b) { return a == b || *a == *b; }

std::size_t var_index(const VarList& vars, const std::string& name) {
  auto it = std::find(vars->begin(), vars->end(), name);
  if (it == vars->end()) throw std::out_of_range("unknown variable '" + name + "'");
  return static_cast<std::size_t>(it - vars->begin());
}

bool GrlexLess::operator()(const Exponents& a, const Exponents& b) const {
  std::uint64_t da = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
  std::uint64_t db = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

void require_same(const MultiPoly& a, const MultiPoly& b) {
  if (!same_vars(a.vars(), b.vars()))
    throw std::invalid_argument("polynomials over different variable lists");
}

}  // namespace

MultiPoly::MultiPoly(VarList vars) : vars_(std::move(vars)) {}

MultiPoly MultiPoly::constant(VarList vars, const Scalar& c) {
  MultiPoly p(std::move(vars));
  if (!c.is_zero()) p.terms_.emplace(Exponents(p.nvars(), 0), c);
  return p;
}

MultiPoly MultiPoly::variable(VarList vars, std::size_t index) {
  MultiPoly p(std::move(vars));
  if (index >= p.nvars()) throw std::out_of_range("variable index");
  Exponents e(p.nvars(), 0);
  e[index] = 1;
  p.terms_.emplace(std::move(e), Scalar(1));
  return p;
}

MultiPoly MultiPoly::monomial(VarList vars, Exponents e, const Scalar& c) {
  MultiPoly p(std::move(vars));
  if (e.size() != p.nvars()) throw std::invalid_argument("exponent length");
  if (!c.is_zero()) p.terms_.emplace(std::move(e), c);
  return p;
}

bool MultiPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](auto k) { return k == 0; });
}

Scalar MultiPoly::constant_term() const {
  auto it = terms_.find(Exponents(nvars(), 0));
  return it == terms_.end() ? Scalar(0) : it->second;
}

const std::pair<const Exponents, Scalar>& MultiPoly::leading_term() const {
  if (terms_.empty()) throw std::domain_error("leading term of zero polynomial");
  return *terms_.rbegin();
}

std::uint32_t MultiPoly::degree(std::size_t var) const {
  std::uint32_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

std::uint32_t MultiPoly::total_degree() const {
  std::uint32_t d = 0;
  for (const auto& [e, c] : terms_)
    d = std::max<std::uint32_t>(d, std::accumulate(e.begin(), e.end(), 0u));
  return d;
}

std::uint64_t MultiPoly::support() const {
  std::uint64_t mask = 0;
  for (const auto& [e, c] : terms_)
    for (std::size_t k = 0; k < e.size() && k < 64; ++k)
      if (e[k] > 0) mask |= std::uint64_t{1} << k;
  return mask;
}

void MultiPoly::add_term(const Exponents& e, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  require_same(*this, o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  require_same(*this, o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  require_same(a, b);
  MultiPoly out(a.vars_);
  Exponents e(a.nvars());
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) { return *this = *this * o; }

MultiPoly& MultiPoly::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly out(*this);
  for (auto& [e, v] : out.terms_) v = -v;
  return out;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  return same_vars(a.vars_, b.vars_) && a.terms_ == b.terms_;
}

MultiPoly MultiPoly::pow(unsigned n) const {
  MultiPoly result = constant(vars_, Scalar(1));
  MultiPoly base = *this;
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return result;
}

MultiPoly MultiPoly::derivative(std::size_t var) const {
  MultiPoly out(vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    out.add_term(d, c * Scalar(static_cast<long>(e[var])));
  }
  return out;
}

std::vector<MultiPoly> MultiPoly::coefficients_in(std::size_t var) const {
  std::vector<MultiPoly> out(degree(var) + 1, MultiPoly(vars_));
  for (const auto& [e, c] : terms_) {
    Exponents r = e;
    r[var] = 0;
    out[e[var]].add_term(r, c);
  }
  return out;
}

MultiPoly MultiPoly::from_coefficients(VarList vars, std::size_t var,
                                       const std::vector<MultiPoly>& coeffs) {
  MultiPoly out(std::move(vars));
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    for (const auto& [e, c] : coeffs[k].terms_) {
      Exponents r = e;
      r[var] += static_cast<std::uint32_t>(k);
      out.add_term(r, c);
    }
  }
  return out;
}

MultiPoly MultiPoly::substitute(std::size_t var, const MultiPoly& q) const {
  require_same(*this, q);
  auto coeffs = coefficients_in(var);
  // Horner in q.
  MultiPoly out(vars_);
  for (std::size_t k = coeffs.size(); k-- > 0;) out = out * q + coeffs[k];
  return out;
}

MultiPoly MultiPoly::permute(const std::vector<std::size_t>& perm) const {
  if (perm.size() != nvars()) throw std::invalid_argument("permutation length");
  MultiPoly out(vars_);
  for (const auto& [e, c] : terms_) {
    Exponents r(e.size());
    for (std::size_t k = 0; k < e.size(); ++k) r[k] = e[perm[k]];
    out.add_term(r, c);
  }
  return out;
}

MultiPoly MultiPoly::rebase(const VarList& target) const {
  if (same_vars(vars_, target)) {
    MultiPoly out(*this);
    out.vars_ = target;
    return out;
  }
  std::vector<std::size_t> where(nvars());
  for (std::size_t k = 0; k < nvars(); ++k) where[k] = var_index(target, (*vars_)[k]);
  MultiPoly out(target);
  for (const auto& [e, c] : terms_) {
    Exponents r(target->size(), 0);
    for (std::size_t k = 0; k < e.size(); ++k) r[where[k]] = e[k];
    out.add_term(r, c);
  }
  return out;
}

cd MultiPoly::evaluate(std::span<const cd> x) const {
  if (x.size() != nvars()) throw std::invalid_argument("evaluation point size");
  cd sum = 0.0;
  for (const auto& [e, c] : terms_) {
    cd term = c.to_complex();
    for (std::size_t k = 0; k < e.size(); ++k)
      for (std::uint32_t j = 0; j < e[k]; ++j) term *= x[k];
    sum += term;
  }
  return sum;
}

std::string MultiPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += (*vars_)[k];
      if (e[k] > 1) mono += "^" + std::to_string(e[k]);
    }
    std::string term;
    if (mono.empty()) {
      term = c.str();
    } else if (c.is_one()) {
      term = mono;
    } else if (c == Scalar(-1)) {
      term = "-" + mono;
    } else {
      term = c.str() + "*" + mono;
    }
    if (first) {
      out = term;
      first = false;
    } else if (term[0] == '-') {
      out += " - " + term.substr(1);
    } else {
      out += " + " + term;
    }
  }
  return out;
}

std::optional<MultiPoly> exact_divide(const MultiPoly& a, const MultiPoly& b) {
  require_same(a, b);
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  MultiPoly q(a.vars());
  MultiPoly r = a;
  const auto& [eb, cb] = b.leading_term();
  const Scalar cb_inv = cb.inverse();
  while (!r.is_zero()) {
    const auto& [er, cr] = r.leading_term();
    Exponents d(er.size());
    for (std::size_t k = 0; k < er.size(); ++k) {
      if (er[k] < eb[k]) return std::nullopt;
      d[k] = er[k] - eb[k];
    }
    MultiPoly m = MultiPoly::monomial(a.vars(), std::move(d), cr * cb_inv);
    r -= m * b;
    q += m;
  }
  return q;
}

MultiPoly make_monic(const MultiPoly& p) {
  if (p.is_zero()) return p;
  return p * p.leading_coefficient().inverse();
}

namespace {

MultiPoly divide_or_throw(const MultiPoly& a, const MultiPoly& b) {
  auto q = exact_divide(a, b);
  if (!q) throw std::logic_error("inexact division in gcd");
  return *std::move(q);
}

MultiPoly content_in(const MultiPoly& p, std::size_t var) {
  MultiPoly g(p.vars());
  for (const auto& c : p.coefficients_in(var)) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) break;
  }
  return g;
}

// Rescales p by a rational so its coefficients are coprime Gaussian integers
// (rational content only); keeps remainder sequences from growing.
MultiPoly primitive_scalar(const MultiPoly& p) {
  if (p.is_zero()) return p;
  mpz_class den = 1, num = 0;
  for (const auto& [e, c] : p.terms()) {
    for (const mpq_class* q : {&c.re(), &c.im()}) {
      if (sgn(*q) == 0) continue;
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q->get_den_mpz_t());
    }
  }
  for (const auto& [e, c] : p.terms()) {
    for (const mpq_class* q : {&c.re(), &c.im()}) {
      if (sgn(*q) == 0) continue;
      mpz_class n = q->get_num() * (den / q->get_den());
      mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), n.get_mpz_t());
    }
  }
  return p * Scalar(mpq_class(den, num));
}

void trim(std::vector<MultiPoly>& c) {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

/// Pseudo-remainder of a by b in var (up to a power of lc(b)).
MultiPoly pseudo_remainder(const MultiPoly& a, const MultiPoly& b, std::size_t var) {
  auto r = a.coefficients_in(var);
  auto bc = b.coefficients_in(var);
  trim(r);
  trim(bc);
  const std::size_t db = bc.size() - 1;
  const MultiPoly& lb = bc.back();
  while (!r.empty() && r.size() - 1 >= db) {
    const std::size_t shift = r.size() - 1 - db;
    const MultiPoly lr = r.back();
    for (auto& c : r) c = c * lb;
    for (std::size_t j = 0; j <= db; ++j) r[j + shift] -= lr * bc[j];
    trim(r);
  }
  return MultiPoly::from_coefficients(a.vars(), var, r);
}

}  // namespace

MultiPoly gcd(const MultiPoly& a, const MultiPoly& b) {
  require_same(a, b);
  if (a.is_zero()) return make_monic(b);
  if (b.is_zero()) return make_monic(a);
  const VarList& vars = a.vars();
  if (a.is_constant() || b.is_constant()) return MultiPoly::constant(vars, Scalar(1));

  const std::uint64_t sa = a.support();
  const std::uint64_t sb = b.support();
  std::size_t var = a.nvars();
  for (std::size_t k = 0; k < a.nvars(); ++k) {
    if ((sa >> k) & (sb >> k) & 1u) {
      var = k;
      break;
    }
  }
  // Disjoint supports: any common divisor is a constant.
  if (var == a.nvars()) return MultiPoly::constant(vars, Scalar(1));

  const MultiPoly ca = content_in(a, var);
  const MultiPoly cb = content_in(b, var);
  const MultiPoly c = gcd(ca, cb);
  MultiPoly pa = primitive_scalar(divide_or_throw(a, ca));
  MultiPoly pb = primitive_scalar(divide_or_throw(b, cb));
  if (pa.degree(var) < pb.degree(var)) std::swap(pa, pb);
  while (!pb.is_zero()) {
    MultiPoly r = pseudo_remainder(pa, pb, var);
    pa = std::move(pb);
    if (r.is_zero()) {
      pb = MultiPoly(vars);
      break;
    }
    if (r.degree(var) == 0) {
      pa = MultiPoly::constant(vars, Scalar(1));
      pb = MultiPoly(vars);
      break;
    }
    pb = primitive_scalar(divide_or_throw(r, content_in(r, var)));
  }
  return make_monic(c * pa);
}

MultiPoly resultant(const MultiPoly& p, const MultiPoly& q, std::size_t var) {
  require_same(p, q);
  if (p.is_zero() || q.is_zero()) throw std::invalid_argument("resultant of zero polynomial");
  const std::size_t dp = p.degree(var);
  const std::size_t dq = q.degree(var);
  if (dp == 0 && dq == 0)
    throw std::invalid_argument("resultant variable '" + (*p.vars())[var] +
                                "' absent from both polynomials");
  const VarList& vars = p.vars();
  const auto pc = p.coefficients_in(var);
  const auto qc = q.coefficients_in(var);
  const std::size_t n = dp + dq;
  std::vector<std::vector<MultiPoly>> m(n, std::vector<MultiPoly>(n, MultiPoly(vars)));
  // Rows hold coefficients from the highest power down.
  for (std::size_t r = 0; r < dq; ++r)
    for (std::size_t k = 0; k <= dp; ++k) m[r][r + k] = pc[dp - k];
  for (std::size_t r = 0; r < dp; ++r)
    for (std::size_t k = 0; k <= dq; ++k) m[dq + r][r + k] = qc[dq - k];

  // Bareiss fraction-free elimination.
  bool negate = false;
  MultiPoly prev = MultiPoly::constant(vars, Scalar(1));
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t piv = k + 1;
      while (piv < n && m[piv][k].is_zero()) ++piv;
      if (piv == n) return MultiPoly(vars);
      std::swap(m[k], m[piv]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        MultiPoly num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        m[i][j] = divide_or_throw(num, prev);
      }
      m[i][k] = MultiPoly(vars);
    }
    prev = m[k][k];
  }
  MultiPoly det = m[n - 1][n - 1];
  return negate ? -det : det;
}

}  // namespace pstruct::exact
