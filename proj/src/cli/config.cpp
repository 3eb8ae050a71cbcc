#include "pstruct/cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "pstruct/exact/errors.hpp"
#include "pstruct/exact/parser.hpp"

namespace pstruct::cli {

using exact::Scalar;
using family::Family;

ConfigError::ConfigError(const std::string& msg, std::size_t line, std::size_t column)
    : std::runtime_error(line > 0 ? msg + " (line " + std::to_string(line) + ", column " +
                                        std::to_string(column) + ")"
                                  : msg),
      line_(line),
      column_(column) {}

projconn::PipelineOptions Tolerances::pipeline() const {
  projconn::PipelineOptions o;
  o.split.tail_tol = tail;
  o.split.reconstruction_tol = reconstruction;
  o.split.residual_tol = residual;
  o.extraction.residual_tol = extraction;
  return o;
}

Family build_named(const std::string& builder) {
  if (builder == "quadric-11") return family::build_quadric_11();
  if (builder == "branched-cover-12") return family::build_branched_cover_12();
  throw ConfigError("unknown builder '" + builder + "'");
}

namespace {

[[noreturn]] void fail_at(const YAML::Node& n, const std::string& msg) {
  const auto mk = n.Mark();
  if (mk.is_null()) throw ConfigError(msg);
  throw ConfigError(msg, std::size_t(mk.line) + 1, std::size_t(mk.column) + 1);
}

YAML::Node require(const YAML::Node& parent, const std::string& key) {
  const YAML::Node n = parent[key];
  if (!n) fail_at(parent, "missing section '" + key + "'");
  return n;
}

std::string scalar(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) fail_at(n, what + " must be a scalar");
  return n.Scalar();
}

// Expression parse errors are mapped back into the document.
template <class F>
auto parse_at(const YAML::Node& n, const std::string& what, F&& parse) {
  const std::string text = scalar(n, what);
  try {
    return parse(text);
  } catch (const exact::ParseError& e) {
    const auto mk = n.Mark();
    const std::size_t quoted = n.Tag() == "!" ? 1 : 0;
    throw ConfigError(what + ": " + e.what(), std::size_t(mk.line) + 1,
                      std::size_t(mk.column) + 1 + quoted + e.offset());
  }
}

Scalar parse_scalar(const YAML::Node& n, const std::string& what) {
  static const std::regex decimal(R"(^\s*([+-]?)(\d+)(?:\.(\d*))?\s*$)");
  const std::string text = scalar(n, what);
  std::smatch m;
  if (std::regex_match(text, m, decimal)) {
    const std::string frac = m[3].str();
    mpz_class num(m[2].str() + frac), den = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
    mpq_class q(num, den);
    q.canonicalize();
    return Scalar(m[1].str() == "-" ? mpq_class(-q) : q);
  }
  const exact::RatFunc r = parse_at(n, what, [](const std::string& s) {
    return exact::parse_rational(s, exact::make_vars({}));
  });
  if (!r.is_constant()) fail_at(n, what + " must be a constant");
  return r.num().constant_term() / r.den().constant_term();
}

double number(const YAML::Node& n, const std::string& what) {
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    fail_at(n, what + " must be a number");
  }
}

std::vector<std::string> names(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence()) fail_at(n, what + " must be a list");
  std::vector<std::string> out;
  for (const auto& x : n) out.push_back(scalar(x, what));
  return out;
}

void apply_common(const YAML::Node& doc, Family& fam, Tolerances& tol) {
  if (const auto a = doc["annulus"]) {
    if (!a.IsSequence() || a.size() != 2) fail_at(a, "annulus must be [r_in, r_out]");
    fam.r_in = number(a[0], "annulus r_in");
    fam.r_out = number(a[1], "annulus r_out");
  }
  if (const auto v = doc["validity_radius"]) fam.validity_radius = number(v, "validity_radius");
  if (const auto t = doc["tolerances"]) {
    if (!t.IsMap()) fail_at(t, "tolerances must be a mapping");
    for (const auto& kv : t) {
      const std::string key = kv.first.as<std::string>();
      const double v = number(kv.second, "tolerance " + key);
      if (key == "tail") tol.tail = v;
      else if (key == "reconstruction") tol.reconstruction = v;
      else if (key == "residual") tol.residual = v;
      else if (key == "extraction") tol.extraction = v;
      else if (key == "comparison") tol.comparison = v;
      else fail_at(kv.first, "unknown tolerance '" + key + "'");
    }
  }
}

Family custom_family(const YAML::Node& doc) {
  const YAML::Node vars = require(doc, "variables");
  const auto params = names(require(vars, "parameters"), "parameters");
  std::vector<std::string> fiber{"w", "z", "wh", "zh"};
  if (const auto f = vars["fiber"]) {
    fiber = names(f, "fiber");
    if (fiber.size() != 4) fail_at(f, "fiber must name four coordinates (w, z, wh, zh)");
  }
  std::set<std::string> seen;
  for (const auto& n : fiber) seen.insert(n);
  for (const auto& n : params)
    if (!seen.insert(n).second || n == "i" || n == "sqrt")
      fail_at(vars, "duplicate or reserved variable name '" + n + "'");

  const auto vlist = family::family_vars(params, fiber);
  std::vector<exact::RootDef> defs;
  std::vector<YAML::Node> root_nodes;
  if (const auto r = doc["roots"]) {
    if (!r.IsMap()) fail_at(r, "roots must map symbols to radicands");
    for (const auto& kv : r) {
      const std::string sym = kv.first.as<std::string>();
      if (!seen.insert(sym).second) fail_at(kv.first, "root symbol '" + sym + "' clashes with a name");
      const exact::RatFunc rad = parse_at(kv.second, "radicand of " + sym, [&](const std::string& s) {
        return exact::parse_rational(s, vlist);
      });
      if (!rad.is_polynomial()) fail_at(kv.second, "radicand of " + sym + " must be a polynomial");
      defs.push_back({sym, rad.num()});
      root_nodes.push_back(kv.first);
    }
  }
  const auto sys = exact::make_root_system(vlist, std::move(defs));
  auto expr = [&](const YAML::Node& n, const std::string& what) {
    return parse_at(n, what, [&](const std::string& s) { return exact::parse_expr(s, sys); });
  };

  Family fam;
  fam.name = doc["name"] ? scalar(doc["name"], "name") : "custom";
  fam.params = params;
  fam.sys = sys;
  const YAML::Node fsec = require(doc, "family");
  fam.phi1 = expr(require(fsec, "phi1"), "phi1");
  fam.phi2 = expr(require(fsec, "phi2"), "phi2");
  const YAML::Node tr = require(doc, "transition");
  fam.forward = {expr(require(tr, "f"), "transition f"), expr(require(tr, "g"), "transition g")};
  if (const auto inv = doc["inverse_transition"])
    fam.inverse = family::Transition{expr(require(inv, "f"), "inverse f"),
                                     expr(require(inv, "g"), "inverse g")};

  const YAML::Node base = require(doc, "base");
  const YAML::Node t0 = require(base, "t0");
  if (!t0.IsSequence() || t0.size() != params.size())
    fail_at(t0, "base t0 needs one value per parameter");
  for (const auto& x : t0) fam.t0.push_back(parse_scalar(x, "t0 entry"));

  std::vector<Scalar> values(sys->nroots(), Scalar(1));
  if (const auto rv = base["roots"]) {
    if (!rv.IsMap()) fail_at(rv, "base roots must map symbols to values");
    for (const auto& kv : rv) {
      const std::string sym = kv.first.as<std::string>();
      std::size_t j;
      try {
        j = sys->root_index(sym);
      } catch (const std::exception&) {
        fail_at(kv.first, "undeclared root '" + sym + "'");
      }
      values[j] = parse_scalar(kv.second, "base value of " + sym);
    }
  }
  fam.branch = exact::BranchContext::uniform(*sys, fam.base_point(), values);
  return fam;
}

}  // namespace

LoadedFamily load_family_text(const std::string& text) {
  YAML::Node doc;
  try {
    doc = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("YAML syntax error: " + e.msg, std::size_t(e.mark.line) + 1,
                      std::size_t(e.mark.column) + 1);
  }
  if (!doc.IsMap()) throw ConfigError("configuration must be a YAML mapping", 1, 1);

  LoadedFamily out;
  if (const auto b = doc["builder"]) {
    const std::string name = scalar(b, "builder");
    try {
      out.family = build_named(name);
    } catch (const ConfigError&) {
      fail_at(b, "unknown builder '" + name + "'");
    }
  } else {
    out.family = custom_family(doc);
  }
  apply_common(doc, out.family, out.tol);
  family::validate(out.family);
  return out;
}

LoadedFamily load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_family_text(ss.str());
}

}  // namespace pstruct::cli
