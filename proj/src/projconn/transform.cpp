#include "pstruct/projconn/transform.hpp"

#include <Eigen/Dense>

#include "pstruct/exact/errors.hpp"
#include "pstruct/exact/parser.hpp"

namespace pstruct::projconn {

CoordinateMap::CoordinateMap(const std::vector<std::string>& params,
                             const std::vector<std::string>& forward,
                             const std::vector<std::string>& inverse)
    : m_(params.size()) {
  if (forward.size() != m_ || inverse.size() != m_)
    throw std::invalid_argument("coordinate map needs one expression per parameter");
  const auto vars = exact::make_vars(params);
  for (const auto& e : forward) fwd_.push_back(exact::parse_rational(e, vars));
  for (const auto& e : inverse) inv_.push_back(exact::parse_rational(e, vars));
  compile();
}

void CoordinateMap::compile() {
  cf_.clear();
  ci_.clear();
  cjac_.clear();
  chess_.clear();
  for (const auto& f : fwd_) cf_.emplace_back(f);
  for (const auto& f : inv_) ci_.emplace_back(f);
  for (std::size_t a = 0; a < m_; ++a)
    for (std::size_t b = 0; b < m_; ++b) cjac_.emplace_back(fwd_[a].derivative(b));
  chess_.resize(m_ * m_ * (m_ + 1) / 2);
  for (std::size_t a = 0; a < m_; ++a)
    for (std::size_t b = 0; b < m_; ++b)
      for (std::size_t c = b; c < m_; ++c)
        chess_[Christoffel::flat(m_, a, b, c)] =
            exact::CompiledRatFunc(fwd_[a].derivative(b).derivative(c));
}

std::vector<cd> CoordinateMap::forward(std::span<const cd> t) const {
  std::vector<cd> out;
  for (const auto& f : cf_) out.push_back(f(t));
  return out;
}

std::vector<cd> CoordinateMap::inverse(std::span<const cd> tp) const {
  std::vector<cd> out;
  for (const auto& f : ci_) out.push_back(f(tp));
  return out;
}

std::vector<std::vector<cd>> CoordinateMap::jacobian(std::span<const cd> t) const {
  std::vector<std::vector<cd>> J(m_, std::vector<cd>(m_));
  for (std::size_t a = 0; a < m_; ++a)
    for (std::size_t b = 0; b < m_; ++b) J[a][b] = cjac_[a * m_ + b](t);
  return J;
}

Christoffel CoordinateMap::hessian(std::span<const cd> t) const {
  Christoffel H(m_);
  for (std::size_t a = 0; a < m_; ++a)
    for (std::size_t b = 0; b < m_; ++b)
      for (std::size_t c = b; c < m_; ++c) H(a, b, c) = chess_[Christoffel::flat(m_, a, b, c)](t);
  return H;
}

CoordinateMap CoordinateMap::inverted() const {
  CoordinateMap out;
  out.m_ = m_;
  out.fwd_ = inv_;
  out.inv_ = fwd_;
  out.compile();
  return out;
}

ChristoffelField transform_coordinates(ChristoffelField G, const CoordinateMap& map) {
  return [G = std::move(G), map](std::span<const cd> tp) {
    const std::size_t m = map.m();
    const std::vector<cd> t = map.inverse(tp);
    const auto Jv = map.jacobian(t);
    Eigen::MatrixXcd J(m, m);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) J(a, b) = Jv[a][b];
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(J);
    if (!lu.isInvertible() || lu.rcond() < 1e-13) throw PoleError("singular Jacobian in coordinate change");
    const Eigen::MatrixXcd Ji = lu.inverse();  // d t / d t'
    const Christoffel g = G(t);
    const Christoffel H = map.hessian(t);

    Christoffel out(m);
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a; b < m; ++b) {
          cd s = 0.0;
          for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = 0; q < m; ++q) {
              cd inner = -H(c, p, q);
              for (std::size_t e = 0; e < m; ++e) inner += J(c, e) * g(e, p, q);
              s += inner * Ji(p, a) * Ji(q, b);
            }
          out(c, a, b) = s;
        }
    return out;
  };
}

}  // namespace pstruct::projconn
