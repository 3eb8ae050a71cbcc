#include "pstruct/family/evaluator.hpp"

#include <cmath>
#include <random>

namespace pstruct::family {

namespace {

constexpr double kMaxSubstep = 0.05;

std::uint64_t param_mask(std::size_t m) {
  std::uint64_t s = 0;
  for (std::size_t a = 0; a < m; ++a) s |= std::uint64_t{1} << (T + a);
  return s;
}

}  // namespace

FamilyEvaluator::FamilyEvaluator(const Family& fam)
    : fam_(fam), m_(fam.m()), tracker_(fam.sys) {
  const std::uint64_t pm = param_mask(m_);
  const std::uint64_t zt = pm | (1u << Z), wzt = zt | (1u << W), c2 = pm | (1u << ZH);
  for (std::size_t j = 0; j < fam.sys->nroots(); ++j) {
    const std::uint64_t s = fam.sys->roots[j].radicand.support();
    const RootExtElem::Key bit = RootExtElem::Key{1} << j;
    if ((s & ~zt) == 0) {
      stage_zt_ |= bit;
    } else if ((s & ~wzt) == 0) {
      stage_wzt_ |= bit;
    } else {
      stage_rest_ |= bit;
    }
    if ((s & ~c2) == 0) stage_c2_ |= bit;
  }

  using exact::CompiledElem;
  phi1_ = CompiledElem(fam.phi1);
  phi1_z_ = CompiledElem(fam.phi1.derivative(Z));
  phi2_ = CompiledElem(fam.phi2);
  const RootExtElem p2z = fam.phi2.derivative(ZH);
  phi2_zh_ = CompiledElem(p2z);
  phi2_zhzh_ = CompiledElem(p2z.derivative(ZH));

  std::vector<RootExtElem> e1, e2;
  for (std::size_t a = 0; a < m_; ++a) {
    e1.push_back(fam.phi1.derivative(T + a));
    e2.push_back(fam.phi2.derivative(T + a));
    d1_.emplace_back(e1.back());
    d2_.emplace_back(e2.back());
    d2_zh_.emplace_back(p2z.derivative(T + a));
  }
  for (std::size_t a = 0; a < m_; ++a) {
    for (std::size_t b = a; b < m_; ++b) {
      dd1_.emplace_back(e1[a].derivative(T + b));
      dd2_.emplace_back(e2[a].derivative(T + b));
    }
  }

  const RootExtElem fw = fam.forward.f.derivative(W);
  const RootExtElem gw = fam.forward.g.derivative(W);
  f_ = CompiledElem(fam.forward.f);
  f_w_ = CompiledElem(fw);
  f_ww_ = CompiledElem(fw.derivative(W));
  g_ = CompiledElem(fam.forward.g);
  g_w_ = CompiledElem(gw);
  g_ww_ = CompiledElem(gw.derivative(W));
}

void FamilyEvaluator::stage(RootExtElem::Key mask, const std::vector<cd>& from,
                            const std::vector<cd>& to, std::vector<cd>& roots) const {
  if (mask) tracker_.continue_roots(mask, from, to, roots);
}

FamilyEvaluator::State FamilyEvaluator::base_state() const {
  State s;
  for (const auto& v : fam_.base_point()) s.x.push_back(v.to_complex());
  s.roots = tracker_.roots_at(fam_.branch, s.x);
  return s;
}

FamilyEvaluator::State FamilyEvaluator::move(const State& s, cd z, std::span<const cd> t) const {
  double dist = std::abs(z - s.x[Z]);
  for (std::size_t a = 0; a < m_; ++a) dist = std::max(dist, std::abs(t[a] - s.x[T + a]));
  const int n = std::max(1, static_cast<int>(std::ceil(dist / kMaxSubstep)));

  State cur = s;
  const cd z0 = s.x[Z];
  std::vector<cd> next;
  for (int k = 1; k <= n; ++k) {
    const double lam = double(k) / n;
    next = cur.x;
    next[Z] = z0 + lam * (z - z0);
    for (std::size_t a = 0; a < m_; ++a) next[T + a] = s.x[T + a] + lam * (t[a] - s.x[T + a]);
    stage(stage_zt_, cur.x, next, cur.roots);
    next[W] = phi1_(next, cur.roots);
    stage(stage_wzt_, cur.x, next, cur.roots);
    const cd zh = g_(next, cur.roots);
    const cd wh = f_(next, cur.roots);
    next[ZH] = zh;
    next[WH] = wh;
    stage(stage_rest_, cur.x, next, cur.roots);
    cur.x = next;
  }
  return cur;
}

FamilyEvaluator::State FamilyEvaluator::move_chart2(const State& s, cd zh,
                                                    std::span<const cd> t) const {
  double dist = std::abs(zh - s.x[ZH]);
  for (std::size_t a = 0; a < m_; ++a) dist = std::max(dist, std::abs(t[a] - s.x[T + a]));
  const int n = std::max(1, static_cast<int>(std::ceil(dist / kMaxSubstep)));

  State cur = s;
  const cd zh0 = s.x[ZH];
  std::vector<cd> next;
  for (int k = 1; k <= n; ++k) {
    const double lam = double(k) / n;
    next = cur.x;
    next[ZH] = zh0 + lam * (zh - zh0);
    for (std::size_t a = 0; a < m_; ++a) next[T + a] = s.x[T + a] + lam * (t[a] - s.x[T + a]);
    stage(stage_c2_, cur.x, next, cur.roots);
    next[WH] = phi2_(next, cur.roots);
    cur.x = next;
  }
  return cur;
}

FamilyEvaluator::State FamilyEvaluator::state_at(cd z, std::span<const cd> t) const {
  State s = move(base_state(), 1.0, t);
  const double ang = std::arg(z);
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(ang) / kMaxSubstep)));
  for (int k = 1; k <= n; ++k) s = move(s, std::polar(1.0, ang * k / n), t);
  return move(s, z, t);
}

cd FamilyEvaluator::phi1(const State& s) const { return phi1_(s.x, s.roots); }

std::vector<cd> FamilyEvaluator::dphi1(const State& s) const {
  std::vector<cd> out(m_);
  for (std::size_t a = 0; a < m_; ++a) out[a] = d1_[a](s.x, s.roots);
  return out;
}

cd FamilyEvaluator::phi2(const State& s) const { return phi2_(s.x, s.roots); }

std::vector<cd> FamilyEvaluator::dphi2(const State& s) const {
  std::vector<cd> out(m_);
  for (std::size_t a = 0; a < m_; ++a) out[a] = d2_[a](s.x, s.roots);
  return out;
}

FamilyEvaluator::State FamilyEvaluator::chart2_state_at(cd zh, std::span<const cd> t) const {
  State s = move_chart2(base_state(), 1.0, t);
  const double ang = std::arg(zh);
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(ang) / kMaxSubstep)));
  for (int k = 1; k <= n; ++k) s = move_chart2(s, std::polar(1.0, ang * k / n), t);
  return move_chart2(s, zh, t);
}

PointData FamilyEvaluator::evaluate(const State& s) const {
  const auto& x = s.x;
  const auto& r = s.roots;
  PointData p;
  p.z = x[Z];
  p.w = x[W];
  p.zh = x[ZH];
  p.wh = x[WH];
  p.phi1 = x[W];
  p.phi1_z = phi1_z_(x, r);
  p.phi2 = phi2_(x, r);
  p.phi2_zh = phi2_zh_(x, r);
  p.phi2_zhzh = phi2_zhzh_(x, r);
  p.d1.resize(m_);
  p.d2.resize(m_);
  p.d2_zh.resize(m_);
  for (std::size_t a = 0; a < m_; ++a) {
    p.d1[a] = d1_[a](x, r);
    p.d2[a] = d2_[a](x, r);
    p.d2_zh[a] = d2_zh_[a](x, r);
  }
  p.dd1.resize(dd1_.size());
  p.dd2.resize(dd2_.size());
  for (std::size_t k = 0; k < dd1_.size(); ++k) {
    p.dd1[k] = dd1_[k](x, r);
    p.dd2[k] = dd2_[k](x, r);
  }
  p.f = x[WH];
  p.f_w = f_w_(x, r);
  p.f_ww = f_ww_(x, r);
  p.g = x[ZH];
  p.g_w = g_w_(x, r);
  p.g_ww = g_ww_(x, r);

  p.F = p.f_w - p.phi2_zh * p.g_w;
  p.E = p.f_ww - p.phi2_zh * p.g_ww - p.phi2_zhzh * p.g_w * p.g_w;
  p.G.resize(m_);
  p.tau.resize(m_);
  p.h.resize(m_);
  for (std::size_t a = 0; a < m_; ++a) {
    p.G[a] = p.d2_zh[a] * p.g_w;
    p.tau[a] = 0.5 * p.E * p.d1[a] - p.G[a];
    p.h[a] = p.tau[a] / p.F;
  }
  return p;
}

PointData FamilyEvaluator::at(cd z, std::span<const cd> t) const { return evaluate(state_at(z, t)); }

CircleData FamilyEvaluator::circle(std::span<const cd> t, double r, std::size_t K) const {
  CircleData out{r, {}};
  out.pts.reserve(K);
  State s = move(base_state(), 1.0, t);
  if (r != 1.0) s = move(s, r, t);
  for (std::size_t k = 0; k < K; ++k) {
    s = move(s, std::polar(r, 2 * M_PI * double(k) / double(K)), t);
    out.pts.push_back(evaluate(s));
  }
  return out;
}

Chart2Circle FamilyEvaluator::chart2_circle(std::span<const cd> t, double r, std::size_t K) const {
  Chart2Circle out{r, {}, {}, {}, std::vector<std::vector<cd>>(m_)};
  State s = move_chart2(base_state(), 1.0, t);
  if (r != 1.0) s = move_chart2(s, r, t);
  for (std::size_t k = 0; k < K; ++k) {
    s = move_chart2(s, std::polar(r, 2 * M_PI * double(k) / double(K)), t);
    out.zh.push_back(s.x[ZH]);
    out.phi2.push_back(s.x[WH]);
    out.phi2_zh.push_back(phi2_zh_(s.x, s.roots));
    for (std::size_t a = 0; a < m_; ++a) out.d2[a].push_back(d2_[a](s.x, s.roots));
  }
  return out;
}

int winding_number(std::span<const cd> values) {
  double total = 0.0;
  const std::size_t n = values.size();
  for (std::size_t k = 0; k < n; ++k) total += std::arg(values[(k + 1) % n] / values[k]);
  return static_cast<int>(std::lround(total / (2 * M_PI)));
}

std::vector<cd> normal_transition(const FamilyEvaluator& ev, std::span<const cd> t, std::size_t K) {
  const CircleData c = ev.circle(t, 1.0, K);
  std::vector<cd> F;
  for (const auto& p : c.pts) F.push_back(p.F);
  return F;
}

int normal_degree(const FamilyEvaluator& ev, std::span<const cd> t, std::size_t K) {
  return -winding_number(normal_transition(ev, t, K));
}

double SectionSamples::transformation_residual() const {
  double scale = 0.0, res = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    scale = std::max({scale, std::abs(sigma2[k]), std::abs(F[k] * sigma1[k])});
    res = std::max(res, std::abs(sigma2[k] - F[k] * sigma1[k]));
  }
  return scale > 0 ? res / scale : 0.0;
}

SectionSamples kodaira_section(const FamilyEvaluator& ev, std::span<const cd> t,
                               std::span<const cd> V, std::size_t K) {
  const CircleData c = ev.circle(t, 1.0, K);
  SectionSamples s;
  for (const auto& p : c.pts) {
    cd s1 = 0.0, s2 = 0.0;
    for (std::size_t a = 0; a < ev.m(); ++a) {
      s1 += V[a] * p.d1[a];
      s2 += V[a] * p.d2[a];
    }
    s.z.push_back(p.z);
    s.zh.push_back(p.zh);
    s.sigma1.push_back(s1);
    s.sigma2.push_back(s2);
    s.F.push_back(p.F);
  }
  return s;
}

Cocycle1Form tau_cocycle(const FamilyEvaluator& ev, std::span<const cd> t, std::size_t K) {
  const CircleData c = ev.circle(t, 1.0, K);
  Cocycle1Form out;
  out.G.resize(ev.m());
  out.tau.resize(ev.m());
  for (const auto& p : c.pts) {
    out.z.push_back(p.z);
    out.F.push_back(p.F);
    out.E.push_back(p.E);
    for (std::size_t a = 0; a < ev.m(); ++a) {
      out.G[a].push_back(p.G[a]);
      out.tau[a].push_back(p.tau[a]);
    }
  }
  return out;
}

double cocycle_antisymmetry_residual(const FamilyEvaluator& ev, const FamilyEvaluator& reversed,
                                     std::span<const cd> t, std::size_t nsamples) {
  const CircleData c = ev.circle(t, 1.0, nsamples);
  double res = 0.0;
  for (const auto& p : c.pts) {
    const PointData q = reversed.at(p.zh, t);
    for (std::size_t a = 0; a < ev.m(); ++a)
      res = std::max(res, std::abs(q.h[a] + p.h[a]) / std::max(1.0, std::abs(p.h[a])));
  }
  return res;
}

double compatibility_residual(const FamilyEvaluator& ev, std::size_t nsamples, unsigned seed,
                              double t_radius) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI), rad(0.8, 1.25),
      dt(-t_radius / std::sqrt(2.0), t_radius / std::sqrt(2.0));
  const auto t0 = ev.family().t0_complex();
  double res = 0.0;
  for (std::size_t k = 0; k < nsamples; ++k) {
    const cd z = std::polar(rad(rng), ang(rng));
    std::vector<cd> t(t0);
    for (auto& v : t) v += cd(dt(rng), dt(rng));
    const PointData p = ev.at(z, t);
    res = std::max(res, std::abs(p.phi2 - p.f) / std::max(1.0, std::abs(p.f)));
  }
  return res;
}

}  // namespace pstruct::family
