// torickit: analyze | solve | ode | catalog
//
// Exit codes (stable for scripting):
//   0  success
//   1  usage / parse errors (command line or input file syntax)
//   2  validation errors (non-Fano input, out-of-window alpha, ...)
//   3  solver failure (continuation stalled or lost convexity)

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "torickit/catalog.hpp"
#include "torickit/solver.hpp"
#include "torickit/special.hpp"

namespace {

using namespace torickit;

// Exact rational from "p/q", "p", or a decimal string like "0.9" (which is
// 9/10, not the nearest double).
Rat parse_alpha(const std::string& s) {
  const auto dot = s.find('.');
  if (dot == std::string::npos) return parse_rat(s);
  std::string digits = s;
  digits.erase(dot, 1);
  std::size_t start = 0;
  bool neg = false;
  if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
    neg = digits[0] == '-';
    start = 1;
  }
  if (digits.size() == start)
    throw ParseError("empty numeric literal '" + s + "'");
  for (std::size_t i = start; i < digits.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(digits[i])))
      throw ParseError("bad numeric literal '" + s + "'");
  Rat num(digits.substr(start));
  Rat den = 1;
  for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
  return (neg ? -num : num) / den;
}

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open input file '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

struct Source {
  std::string catalogName;
  std::string inputPath;

  FanoPolytope load(std::string& name) const {
    if (!catalogName.empty()) {
      name = catalogName;
      return catalog_entry(catalogName).polytope;
    }
    name = inputPath == "-" ? "(stdin)" : inputPath;
    return parse_polytope(slurp(inputPath));
  }
};

int run_analyze(const Source& src, const std::string& alphaStr, bool machine) {
  std::string name;
  const FanoPolytope P = src.load(name);
  std::optional<Rat> alpha;
  if (!alphaStr.empty()) alpha = parse_alpha(alphaStr);
  const auto rep = analyze(P, name, alpha);
  std::cout << render_report(rep, machine);
  return 0;
}

int run_solve(const Source& src, const std::string& alphaStr, int M, double B,
              double tol, const std::string& dumpPath, bool force,
              bool machine) {
  std::string name;
  const FanoPolytope P = src.load(name);
  if (P.dim() > 2)
    throw ValidationError("solve supports dimensions 1 and 2 only");

  const Rat alphaQ = parse_alpha(alphaStr);
  const auto rep = greatest_ricci_lower_bound(P);
  const auto g = RhoGrid::make(P.dim(), M, B);
  SolverConfig cfg;
  cfg.alpha = to_double(alphaQ);
  cfg.newtonTol = tol;
  cfg.force = force;

  const auto res = continuity_solve(P, rep, cfg, g);

  const bool ok = res.status == SolveStatus::Success;
  const double resid = ok ? ma_residual(res.phi, res.ref.Pc, cfg.alpha)
                          : res.trace.steps.empty()
                                ? std::numeric_limits<double>::quiet_NaN()
                                : res.trace.steps.back().residual;
  const auto mc = pushforward_mass_check(res.phi, P);
  const auto bc = barycenter_identity_check(res.phi, res.ref.Pc);
  const double momdef = moment_image_defect(res.phi, P);
  const auto fn = toric_functionals(res.phi, res.ref.phi0, cfg.alpha);

  // on the interval the conical closed form is available for any alpha:
  // report the constant-aligned sup-distance to it
  double supErr = std::numeric_limits<double>::quiet_NaN();
  if (P.dim() == 1) {
    const double beta = cfg.alpha;
    double mx = -1e300, mn = 1e300;
    for (int i = 0; i < g.M; ++i) {
      const double rho = g.coord(i);
      const double sp = std::max(beta * rho, 0.0) +
                        std::log1p(std::exp(-std::abs(beta * rho)));
      const double closed =
          2 / beta * sp - rho - std::log(2 * beta) / beta;
      const double d = double(res.phi.at(i)) - closed;
      mx = std::max(mx, d);
      mn = std::min(mn, d);
    }
    supErr = (mx - mn) / 2;
  }

  if (machine) {
    std::printf("name\t%s\n", name.c_str());
    std::printf("status\t%s\n", to_string(res.status));
    std::printf("alpha\t%s\n", rat_str(alphaQ).c_str());
    std::printf("t_reached\t%.12g\n", res.tReached);
    std::printf("steps\t%zu\n", res.trace.steps.size());
    std::printf("residual\t%.12g\n", resid);
    std::printf("mass\t%.12g\n", mc.mass);
    std::printf("mass_target\t%.12g\n", mc.target);
    std::printf("mass_defect\t%.12g\n", mc.defect());
    std::printf("barycenter_defect\t%.12g\n", bc.defect);
    std::printf("moment_defect\t%.12g\n", momdef);
    std::printf("I\t%.12g\nJ\t%.12g\nF\t%.12g\n", fn.I, fn.J, fn.F);
    if (P.dim() == 1) std::printf("closed_form_sup_error\t%.12g\n", supErr);
    if (!ok) std::printf("message\t%s\n", res.message.c_str());
  } else {
    std::printf("solve %s: alpha = %s, grid %d, box %g, tol %g\n", name.c_str(),
                rat_str(alphaQ).c_str(), M, B, tol);
    std::printf("  continuity trace (%zu steps):\n", res.trace.steps.size());
    for (const auto& s : res.trace.steps)
      std::printf("    t=%-8.4f iters=%-3d resid=%-10.3e minEig=%.3e\n", s.t,
                  s.newtonIters, s.residual, s.minEig);
    std::printf("  status              %s (t reached %g)\n",
                to_string(res.status), res.tReached);
    if (!ok) std::printf("  message             %s\n", res.message.c_str());
    std::printf("  interior residual   %.3e\n", resid);
    std::printf("  pushforward mass    %.6f  (target %g, defect %.2e)\n",
                mc.mass, mc.target, mc.defect());
    std::printf("  barycenter defect   %.2e\n", bc.defect);
    std::printf("  moment image defect %.2e\n", momdef);
    std::printf("  functionals         I=%.3e J=%.3e F=%.3e\n", fn.I, fn.J,
                fn.F);
    if (P.dim() == 1)
      std::printf("  closed-form error   %.3e (sup, constant-aligned)\n",
                  supErr);
  }

  if (!dumpPath.empty()) {
    std::ofstream f(dumpPath);
    if (!f) throw ValidationError("cannot open dump file '" + dumpPath + "'");
    write_dump(f, res.phi);
    if (!machine) std::printf("  dump written to     %s\n", dumpPath.c_str());
  }
  return ok ? 0 : 3;
}

int run_ode(double a, double b, const std::string& alphaStr, bool machine) {
  const auto scan = scan_constraint_root(a, b);
  if (machine) {
    std::printf("a\t%g\nb\t%g\n", a, b);
    std::printf("root_found\t%d\n", scan.rootFound ? 1 : 0);
    if (scan.rootFound) std::printf("root\t%.12g\n", scan.root);
    std::printf("min_g\t%.12g\nargmin\t%.12g\nsamples\t%d\n", scan.minValue,
                scan.argmin, scan.samples);
  } else {
    std::printf("two-point constraint on [a, b] = [%g, %g]:\n", a, b);
    std::printf("  g(alpha) = (%g alpha - 1) e^{%g alpha} - %g alpha + 1\n", b,
                b - a, a);
    if (scan.rootFound)
      std::printf("  root near alpha = %.10g (scan of %d samples)\n", scan.root,
                  scan.samples);
    else
      std::printf("  no root in (0, 1]: min g = %.6e at alpha = %g over %d samples\n",
                  scan.minValue, scan.argmin, scan.samples);
  }

  if (a == 1 && b == 3) {
    const auto cert = nonexistence_certificate();
    if (machine) {
      std::printf("certificate\t1\n");
      std::printf("g0\t%g\ngprime0\t%g\nmin_second\t%.12g\nmin_g_away\t%.12g\n",
                  cert.g0, cert.gprime0, cert.minSecond, cert.minG);
    } else {
      std::printf("  certificate: g(0) = %g, g'(0) = %g, g'' >= %g on [0, 1], "
                  "g >= %.3e on [1e-3, 1]\n",
                  cert.g0, cert.gprime0, cert.minSecond, cert.minG);
      std::printf("  no conical profile exists on [1, 3] for any alpha in (0, 1]\n");
    }
  }

  if (!alphaStr.empty()) {
    const double alpha = to_double(parse_alpha(alphaStr));
    const auto cs = calabi_coefficients(alpha, a, b);
    if (machine) {
      std::printf("alpha\t%g\ndefect\t%.12g\nprofile\t%d\n", alpha, cs.defect,
                  cs.profile ? 1 : 0);
      if (cs.profile) std::printf("c\t%.12g\n", cs.profile->c);
    } else if (cs.profile) {
      std::printf("  alpha = %g: profile exists, c = %.10g (defect %.3e)\n",
                  alpha, cs.profile->c, cs.defect);
    } else {
      std::printf("  alpha = %g: no profile, consistency defect |Y(b)| = %.6g\n",
                  alpha, cs.defect);
    }
  }
  return 0;
}

int run_catalog(bool machine) {
  verify_catalog();
  if (machine) {
    for (const auto& e : builtin_catalog()) {
      const auto& k = *e.known;
      std::printf("%s\t%d\t%d\t%s\t%s\t%s\t%ld\t%s\n", e.name.c_str(),
                  e.polytope.dim(), e.polytope.facets.num_facets(),
                  rat_str(k.R).c_str(), rat_str(k.c1n).c_str(),
                  rat_str(k.c2c1).c_str(), k.euler,
                  k.sigma ? rat_str(*k.sigma).c_str() : "-");
    }
    return 0;
  }
  std::printf("%-7s %-3s %-6s %-6s %-5s %-5s %-5s %-5s %s\n", "name", "dim",
              "facets", "R", "c1^n", "c2c1", "euler", "sigma", "description");
  for (const auto& e : builtin_catalog()) {
    const auto& k = *e.known;
    std::printf("%-7s %-3d %-6d %-6s %-5s %-5s %-5ld %-5s %s\n", e.name.c_str(),
                e.polytope.dim(), e.polytope.facets.num_facets(),
                rat_str(k.R).c_str(), rat_str(k.c1n).c_str(),
                rat_str(k.c2c1).c_str(), k.euler,
                k.sigma ? rat_str(*k.sigma).c_str() : "-", e.blurb.c_str());
  }
  std::printf("self-test: stored values match exact recomputation\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toric Fano toolkit: exact invariants and the conical "
               "Monge-Ampere continuation"};
  app.require_subcommand(1);

  std::string alphaStr, dumpPath;
  Source src;
  int gridM = 129;
  double boxB = 12.0, tol = 1e-9;
  bool force = false, machine = false;
  double odeA = 0, odeB = 0;

  auto add_source = [&](CLI::App* sub) {
    auto* grp = sub->add_option_group("source", "polytope source");
    grp->add_option("--catalog", src.catalogName,
                    "built-in polytope by name (see 'catalog')");
    grp->add_option("--input", src.inputPath,
                    "polytope file ('-' for stdin)");
    grp->require_option(1);
  };

  auto* cmdAnalyze =
      app.add_subcommand("analyze", "exact invariants of a Fano polytope");
  add_source(cmdAnalyze);
  cmdAnalyze->add_option("--alpha", alphaStr,
                         "also report angles and divisor at this alpha");
  cmdAnalyze->add_flag("--machine", machine, "tab-separated key-value output");

  auto* cmdSolve = app.add_subcommand(
      "solve", "continuity-method solve of the toric Monge-Ampere equation");
  add_source(cmdSolve);
  cmdSolve->add_option("--alpha", alphaStr, "target parameter in (0, 1]")
      ->required();
  cmdSolve->add_option("--grid", gridM, "nodes per axis (odd)");
  cmdSolve->add_option("--box", boxB, "box half-width in rho space");
  cmdSolve->add_option("--tol", tol, "Newton tolerance");
  cmdSolve->add_option("--dump", dumpPath, "write per-node dump to this file");
  cmdSolve->add_flag("--force", force, "continue above R(X) (experimental)");
  cmdSolve->add_flag("--machine", machine, "tab-separated key-value output");

  auto* cmdOde = app.add_subcommand(
      "ode", "two-point Calabi constraint scan and certificate");
  cmdOde->add_option("--a", odeA, "left moment endpoint")->required();
  cmdOde->add_option("--b", odeB, "right moment endpoint")->required();
  cmdOde->add_option("--alpha", alphaStr, "also evaluate the branch here");
  cmdOde->add_flag("--machine", machine, "tab-separated key-value output");

  auto* cmdCatalog =
      app.add_subcommand("catalog", "list built-in polytopes and self-test");
  cmdCatalog->add_flag("--machine", machine, "tab-separated rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmdAnalyze->parsed()) return run_analyze(src, alphaStr, machine);
    if (cmdSolve->parsed())
      return run_solve(src, alphaStr, gridM, boxB, tol, dumpPath, force,
                       machine);
    if (cmdOde->parsed()) {
      if (!(odeA > 0) || !(odeB > odeA)) {
        std::fprintf(stderr, "usage: ode requires 0 < a < b (got a = %g, b = %g)\n",
                     odeA, odeB);
        return 1;
      }
      return run_ode(odeA, odeB, alphaStr, machine);
    }
    return run_catalog(machine);
  } catch (const torickit::ParseError& e) {
    if (e.line > 0)
      std::fprintf(stderr, "parse error (line %d): %s\n", e.line, e.what());
    else
      std::fprintf(stderr, "parse error: %s\n", e.what());
    return 1;
  } catch (const torickit::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
