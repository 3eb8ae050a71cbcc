#include "pstruct/exact/rootext.hpp"

#include <bit>
#include <stdexcept>

namespace pstruct::exact {

std::size_t RootSystem::root_index(const std::string& symbol) const {
  for (std::size_t j = 0; j < roots.size(); ++j)
    if (roots[j].symbol == symbol) return j;
  throw std::out_of_range("unknown root symbol '" + symbol + "'");
}

RootSystemPtr make_root_system(VarList vars, std::vector<RootDef> roots) {
  if (roots.size() > 32) throw std::invalid_argument("at most 32 square roots");
  for (auto& r : roots) {
    r.radicand = r.radicand.rebase(vars);
    if (r.radicand.is_zero()) throw std::invalid_argument("zero radicand for " + r.symbol);
  }
  return std::make_shared<const RootSystem>(RootSystem{std::move(vars), std::move(roots)});
}

namespace {

void require_same(const RootExtElem& a, const RootExtElem& b) {
  if (a.system() != b.system())
    throw std::invalid_argument("root extension elements over different root systems");
}

}  // namespace

RootExtElem::RootExtElem(RootSystemPtr sys) : sys_(std::move(sys)) {}

RootExtElem::RootExtElem(RootSystemPtr sys, RatFunc r) : sys_(std::move(sys)) {
  if (!r.is_zero()) coeffs_.emplace(0, r.rebase(sys_->vars));
}

RootExtElem RootExtElem::constant(RootSystemPtr sys, const Scalar& c) {
  auto vars = sys->vars;
  return RootExtElem(std::move(sys), RatFunc::constant(vars, c));
}

RootExtElem RootExtElem::variable(RootSystemPtr sys, std::size_t var) {
  auto vars = sys->vars;
  return RootExtElem(std::move(sys), RatFunc(MultiPoly::variable(vars, var)));
}

RootExtElem RootExtElem::root(RootSystemPtr sys, std::size_t j) {
  if (j >= sys->nroots()) throw std::out_of_range("root index");
  RootExtElem out(sys);
  out.coeffs_.emplace(Key{1} << j, RatFunc::constant(sys->vars, Scalar(1)));
  return out;
}

bool RootExtElem::is_rational() const {
  return coeffs_.empty() || (coeffs_.size() == 1 && coeffs_.begin()->first == 0);
}

RatFunc RootExtElem::as_rational() const {
  if (!is_rational()) throw std::domain_error("element involves square roots: " + str());
  if (coeffs_.empty()) return RatFunc(sys_->vars);
  return coeffs_.begin()->second;
}

RootExtElem::Key RootExtElem::roots_used() const {
  Key k = 0;
  for (const auto& [key, c] : coeffs_) k |= key;
  return k;
}

std::uint64_t RootExtElem::support() const {
  std::uint64_t s = 0;
  for (const auto& [key, c] : coeffs_) s |= c.support();
  const Key used = roots_used();
  for (std::size_t j = 0; j < sys_->nroots(); ++j)
    if ((used >> j) & 1u) s |= sys_->roots[j].radicand.support();
  return s;
}

void RootExtElem::add(Key k, const RatFunc& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = coeffs_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

RootExtElem RootExtElem::operator-() const {
  RootExtElem out(*this);
  for (auto& [k, c] : out.coeffs_) c = -c;
  return out;
}

RootExtElem& RootExtElem::operator+=(const RootExtElem& o) {
  require_same(*this, o);
  for (const auto& [k, c] : o.coeffs_) add(k, c);
  return *this;
}

RootExtElem& RootExtElem::operator-=(const RootExtElem& o) {
  require_same(*this, o);
  for (const auto& [k, c] : o.coeffs_) add(k, -c);
  return *this;
}

RootExtElem& RootExtElem::operator*=(const RootExtElem& o) {
  require_same(*this, o);
  RootExtElem out(sys_);
  for (const auto& [ka, ca] : coeffs_) {
    for (const auto& [kb, cb] : o.coeffs_) {
      RatFunc c = ca * cb;
      const Key both = ka & kb;
      for (std::size_t j = 0; j < sys_->nroots(); ++j)
        if ((both >> j) & 1u) c *= RatFunc(sys_->roots[j].radicand);
      out.add(ka ^ kb, c);
    }
  }
  return *this = std::move(out);
}

bool operator==(const RootExtElem& a, const RootExtElem& b) {
  return a.sys_ == b.sys_ && a.coeffs_ == b.coeffs_;
}

RootExtElem RootExtElem::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  RootExtElem num = constant(sys_, Scalar(1));
  RootExtElem den = *this;
  for (std::size_t j = 0; j < sys_->nroots(); ++j) {
    const Key bit = Key{1} << j;
    bool uses = false;
    for (const auto& [k, c] : den.coeffs_) uses |= (k & bit) != 0;
    if (!uses) continue;
    RootExtElem conj = den;
    for (auto& [k, c] : conj.coeffs_)
      if (k & bit) c = -c;
    num *= conj;
    den *= conj;
  }
  if (den.is_zero()) throw std::domain_error("element has zero norm: " + str());
  const RatFunc r = den.as_rational().inverse();
  for (auto& [k, c] : num.coeffs_) c *= r;
  return num;
}

RootExtElem RootExtElem::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  RootExtElem result = constant(sys_, Scalar(1));
  RootExtElem base = *this;
  auto e = static_cast<unsigned>(n);
  while (e > 0) {
    if (e & 1u) result *= base;
    e >>= 1u;
    if (e > 0) base *= base;
  }
  return result;
}

RootExtElem RootExtElem::derivative(std::size_t var) const {
  RootExtElem out(sys_);
  for (const auto& [k, c] : coeffs_) {
    out.add(k, c.derivative(var));
    for (std::size_t j = 0; j < sys_->nroots(); ++j) {
      if (!((k >> j) & 1u)) continue;
      const MultiPoly& d = sys_->roots[j].radicand;
      MultiPoly dd = d.derivative(var);
      if (dd.is_zero()) continue;
      out.add(k, c * RatFunc(dd, d * Scalar(2)));
    }
  }
  return out;
}

RootExtElem RootExtElem::substitute(std::size_t var, const RatFunc& q) const {
  const Key used = roots_used();
  for (std::size_t j = 0; j < sys_->nroots(); ++j) {
    if (((used >> j) & 1u) && sys_->roots[j].radicand.degree(var) > 0)
      throw std::domain_error("cannot substitute into radicand of " + sys_->roots[j].symbol);
  }
  RootExtElem out(sys_);
  const RatFunc qq = q.rebase(sys_->vars);
  for (const auto& [k, c] : coeffs_) out.add(k, c.substitute(var, qq));
  return out;
}

RootExtElem RootExtElem::permute(const std::vector<std::size_t>& perm, RootSystemPtr sys) const {
  RootExtElem out(std::move(sys));
  for (const auto& [k, c] : coeffs_) out.add(k, c.permute(perm).rebase(out.sys_->vars));
  return out;
}

cd RootExtElem::evaluate(std::span<const cd> x, std::span<const cd> root_values) const {
  cd sum = 0.0;
  for (const auto& [k, c] : coeffs_) {
    cd term = c.evaluate(x);
    for (std::size_t j = 0; j < sys_->nroots(); ++j)
      if ((k >> j) & 1u) term *= root_values[j];
    sum += term;
  }
  return sum;
}

std::string RootExtElem::str() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (const auto& [k, c] : coeffs_) {
    std::string term = "(" + c.str() + ")";
    for (std::size_t j = 0; j < sys_->nroots(); ++j)
      if ((k >> j) & 1u) term += "*" + sys_->roots[j].symbol;
    if (!out.empty()) out += " + ";
    out += term;
  }
  return out;
}

}  // namespace pstruct::exact
