#include <CLI11.hpp>

#include <complex>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "pstruct/cech/split.hpp"
#include "pstruct/cli/config.hpp"
#include "pstruct/cli/report.hpp"
#include "pstruct/exact/errors.hpp"
#include "pstruct/exact/parser.hpp"
#include "pstruct/projconn/connection.hpp"
#include "pstruct/projconn/geodesic.hpp"
#include "pstruct/weyl/weyl.hpp"

using namespace pstruct;
using cli::json;
using cd = std::complex<double>;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "0.1" or "(0.1,-0.2)"
std::vector<cd> parse_point(const std::vector<std::string>& items, const std::string& flag) {
  std::vector<cd> out;
  for (const auto& s : items) {
    std::istringstream is(s);
    cd z;
    if (!(is >> z) || !(is >> std::ws).eof()) throw InputError(flag + ": cannot read '" + s + "'");
    out.push_back(z);
  }
  return out;
}

void apply_tol(cli::Tolerances& tol, const std::vector<std::string>& items) {
  for (const auto& s : items) {
    const auto eq = s.find('=');
    try {
      if (eq == std::string::npos) {
        tol.comparison = std::stod(s);
        continue;
      }
      const std::string key = s.substr(0, eq);
      const double v = std::stod(s.substr(eq + 1));
      if (key == "tail") tol.tail = v;
      else if (key == "reconstruction") tol.reconstruction = v;
      else if (key == "residual") tol.residual = v;
      else if (key == "extraction") tol.extraction = v;
      else if (key == "comparison") tol.comparison = v;
      else throw InputError("--tol: unknown tolerance '" + key + "'");
    } catch (const std::logic_error&) {
      throw InputError("--tol: cannot read '" + s + "'");
    }
  }
}

struct Output {
  std::string path;
  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(path);
    if (!f) throw InputError("cannot write '" + path + "'");
    f << text;
  }
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void check_dim(const std::vector<cd>& x, std::size_t m, const std::string& flag) {
  if (x.size() != m)
    throw InputError(flag + " needs " + std::to_string(m) + " values, got " + std::to_string(x.size()));
}

std::string csv_num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projective structures from families of rational curves"};
  app.require_subcommand(1);

  std::string config, builder, format = "json";
  std::vector<std::string> t_str, v_str, tol_str;
  double smax = 1.0;
  std::size_t grid = 3, nsamples = 50;
  Output out;

  auto common = [&](CLI::App* c) {
    c->add_option("--tol", tol_str, "comparison tolerance, or key=value (tail, reconstruction, residual, extraction, comparison)");
    c->add_option("--out", out.path, "write to a file instead of stdout");
    c->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* verify = app.add_subcommand("verify", "family invariants and cocycle checks at t0");
  verify->add_option("config", config)->required();
  common(verify);

  auto* conn = app.add_subcommand("connection", "projective connection at a point");
  conn->add_option("config", config)->required();
  conn->add_option("--t", t_str, "parameter point, entries x or (re,im)")->required();
  common(conn);

  auto* geo = app.add_subcommand("geodesic", "geodesic path of the extracted connection");
  geo->add_option("config", config)->required();
  geo->add_option("--t", t_str, "start point")->required();
  geo->add_option("--v", v_str, "initial velocity")->required();
  geo->add_option("--smax", smax, "path length in the affine parameter");
  geo->add_option("--samples", nsamples, "output samples after s = 0");
  common(geo);
  geo->get_option("--format")->default_str("csv");

  auto* wey = app.add_subcommand("weyl", "metric, a, b, omega, D and Einstein-Weyl residual");
  wey->add_option("config", config)->required();
  wey->add_option("--t", t_str, "parameter point")->required();
  common(wey);

  auto* rep = app.add_subcommand("reproduce", "comparison report over a parameter grid");
  rep->add_option("builder", builder, "quadric-11 or branched-cover-12")->required();
  rep->add_option("--grid", grid, "points per axis");
  common(rep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (geo->parsed() && !geo->get_option("--format")->count()) format = "csv";

  try {
    cli::Tolerances tol;
    if (rep->parsed()) {
      apply_tol(tol, tol_str);
      cli::ReproduceOptions opt;
      opt.grid = grid;
      opt.tol = tol;
      const cli::Report r = cli::reproduce_report(builder, opt);
      if (format == "csv") {
        std::ostringstream os;
        os << "quantity,residual,tolerance,pass,provenance,note\n";
        for (const auto& row : r.rows)
          os << '"' << row.quantity << "\"," << csv_num(row.residual) << ',' << csv_num(row.tolerance)
             << ',' << (row.pass ? 1 : 0) << ',' << row.provenance << ",\"" << row.note << "\"\n";
        out.write(os.str());
      } else if (out.path.empty()) {
        std::cout << dump(r.to_json());
        std::cerr << r.table();
      } else {
        out.write(dump(r.to_json()));
        std::cout << r.table();
      }
      return r.pass() ? 0 : 1;
    }

    cli::LoadedFamily lf = cli::load_family(config);
    tol = lf.tol;
    apply_tol(tol, tol_str);
    const family::Family& fam = lf.family;
    const family::FamilyEvaluator ev(fam);
    const auto popt = tol.pipeline();

    if (verify->parsed()) {
      const auto t0 = fam.t0_complex();
      const int deg = family::normal_degree(ev, t0);
      const auto s = cech::split_cocycle(ev, t0, popt.split);
      const auto e = projconn::extract_connection(s.data, s.theta, popt.extraction);
      const bool ok = deg == 2;
      json j = {{"family", fam.name},
                {"invariants", "ok"},
                {"normal_degree", deg},
                {"split", {{"tail", s.diag.tail}, {"reconstruction", s.diag.reconstruction}, {"residual", s.diag.residual}}},
                {"extraction_residual", e.residual},
                {"extraction_condition", e.condition},
                {"pass", ok}};
      out.write(dump(j));
      return ok ? 0 : 1;
    }

    const auto t = parse_point(t_str, "--t");
    check_dim(t, fam.m(), "--t");

    if (conn->parsed()) {
      const auto r = projconn::connection_at(ev, t, popt);
      if (format == "csv") {
        std::ostringstream os;
        os << "gamma,alpha,beta,value_re,value_im\n";
        for (std::size_t g = 0; g < fam.m(); ++g)
          for (std::size_t a = 0; a < fam.m(); ++a)
            for (std::size_t b = a; b < fam.m(); ++b)
              os << g << ',' << a << ',' << b << ',' << csv_num(r.gamma(g, a, b).real()) << ','
                 << csv_num(r.gamma(g, a, b).imag()) << '\n';
        out.write(os.str());
      } else {
        out.write(dump({{"t", cli::to_json(t)},
                        {"christoffel", cli::to_json(r.gamma)},
                        {"extraction_residual", r.extraction_residual}}));
      }
      return 0;
    }

    if (geo->parsed()) {
      const auto v = parse_point(v_str, "--v");
      check_dim(v, fam.m(), "--v");
      projconn::GeodesicOptions gopt;
      gopt.s_max = smax;
      gopt.nsamples = nsamples;
      gopt.center = fam.t0_complex();
      gopt.max_radius = fam.validity_radius;
      const auto path = projconn::geodesic_integrate(projconn::pipeline_field(ev, popt), t, v, gopt);
      if (format == "json") {
        json samples = json::array();
        for (const auto& p : path.samples)
          samples.push_back({{"s", p.s}, {"t", cli::to_json(p.t)}, {"v", cli::to_json(p.v)}});
        out.write(dump({{"samples", samples}, {"steps", path.steps}}));
      } else {
        std::ostringstream os;
        os << "s";
        for (std::size_t a = 0; a < fam.m(); ++a) os << ",t" << a << "_re,t" << a << "_im";
        for (std::size_t a = 0; a < fam.m(); ++a) os << ",v" << a << "_re,v" << a << "_im";
        os << '\n';
        for (const auto& p : path.samples) {
          os << csv_num(p.s);
          for (const auto& x : p.t) os << ',' << csv_num(x.real()) << ',' << csv_num(x.imag());
          for (const auto& x : p.v) os << ',' << csv_num(x.real()) << ',' << csv_num(x.imag());
          os << '\n';
        }
        out.write(os.str());
      }
      return 0;
    }

    if (wey->parsed()) {
      const std::size_t m = fam.m();
      const weyl::MetricField g =
          fam.name == "branched-cover-12"
              ? weyl::cover_metric().field()
              : weyl::numeric_metric_field(m, [&](std::span<const cd> x) {
                  return weyl::conformal_from_family(ev, x);
                });
      auto omega_at = [&](std::span<const cd> x, const weyl::MetricJet& j) {
        const auto s = weyl::solve_ab(projconn::connection_at(ev, x, popt).gamma, j);
        return s;
      };
      const weyl::MetricJet jet = g.jet(t);
      const auto ab = omega_at(t, jet);
      weyl::OneForm omega(m);
      for (std::size_t k = 0; k < m; ++k) omega[k] = ab.a[k] - 2.0 * ab.b[k];
      const auto D = weyl::weyl_connection(jet, omega);
      const projconn::ChristoffelField Dfield = [&](std::span<const cd> x) {
        const weyl::MetricJet j = g.jet(x);
        const auto s = omega_at(x, j);
        weyl::OneForm w(m);
        for (std::size_t k = 0; k < m; ++k) w[k] = s.a[k] - 2.0 * s.b[k];
        return weyl::weyl_connection(j, w);
      };
      const double ew = weyl::einstein_weyl_residual(Dfield, g, t);
      const bool ok = ab.residual < tol.comparison && ew < 1e-6;
      out.write(dump({{"t", cli::to_json(t)},
                      {"g", cli::to_json(jet.g)},
                      {"a", cli::to_json(ab.a)},
                      {"b", cli::to_json(ab.b)},
                      {"omega", cli::to_json(omega)},
                      {"D", cli::to_json(D)},
                      {"ab_residual", ab.residual},
                      {"einstein_weyl_residual", ew},
                      {"pass", ok}}));
      return ok ? 0 : 1;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InvariantViolation& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const exact::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
