#pragma once
/**
 * catalog.hpp
 *
 * Built-in polytope catalog, the line-oriented file format, and the
 * aggregated analysis report the CLI prints.
 *
 * File format ('#' starts a comment, blank lines ignored):
 *
 *     dim 2
 *     fano 1 0          # <v, x> + 1 >= 0, lambda = 1 implied
 *     fano 0 1
 *     facet -1 -1 3/2   # general offset, non-Fano presentations only
 *
 * The first content line is "dim n"; every later line is one facet.  Normals
 * are integers, offsets rationals "p/q".  ParseError carries the 1-based
 * line number; validation failures carry a witness (the offending vertex or
 * facet) in the message.
 */

#include "torickit/chern.hpp"
#include "torickit/invariants.hpp"

#include <optional>
#include <sstream>
#include <string>

namespace torickit {

// ------------------------------------------------------------ file format ----

namespace detail {

inline std::int64_t parse_int_tok(const std::string& s, int line) {
  std::size_t pos = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("bad integer '" + s + "'", line);
  }
  if (pos != s.size())
    throw ParseError("trailing junk in integer '" + s + "'", line);
  return v;
}

}  // namespace detail

inline FacetPresentation parse_presentation(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int lineNo = 0, dim = 0;
  bool haveDim = false;
  std::vector<IVec> normals;
  RatVec offsets;
  while (std::getline(in, raw)) {
    ++lineNo;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (!haveDim) {
      if (tok[0] != "dim" || tok.size() != 2)
        throw ParseError("expected 'dim n' as the first content line", lineNo);
      const auto d = detail::parse_int_tok(tok[1], lineNo);
      if (d < 1 || d > 3)
        throw ParseError("dimension must be 1, 2 or 3", lineNo);
      dim = static_cast<int>(d);
      haveDim = true;
      continue;
    }
    if (tok[0] == "fano") {
      if (static_cast<int>(tok.size()) != dim + 1)
        throw ParseError("'fano' needs exactly " + std::to_string(dim) +
                             " integer components",
                         lineNo);
      IVec v;
      for (int c = 1; c <= dim; ++c)
        v.push_back(detail::parse_int_tok(tok[c], lineNo));
      normals.push_back(std::move(v));
      offsets.push_back(1);
    } else if (tok[0] == "facet") {
      if (static_cast<int>(tok.size()) != dim + 2)
        throw ParseError("'facet' needs " + std::to_string(dim) +
                             " integer components and an offset",
                         lineNo);
      IVec v;
      for (int c = 1; c <= dim; ++c)
        v.push_back(detail::parse_int_tok(tok[c], lineNo));
      normals.push_back(std::move(v));
      try {
        offsets.push_back(parse_rat(tok[dim + 1]));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), lineNo);
      }
    } else {
      throw ParseError("unknown keyword '" + tok[0] + "'", lineNo);
    }
  }
  if (!haveDim) throw ParseError("empty input: expected 'dim n'", lineNo);
  if (normals.empty()) throw ParseError("no facet lines", lineNo);
  return make_presentation(dim, std::move(normals), std::move(offsets));
}

inline FanoPolytope parse_polytope(const std::string& text) {
  return make_fano(parse_presentation(text));
}

inline std::string print_polytope(const FanoPolytope& P) {
  std::ostringstream os;
  os << "dim " << P.dim() << "\n";
  for (const auto& v : P.facets.normals) {
    os << "fano";
    for (const auto c : v) os << ' ' << c;
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------- catalog ----

struct KnownValues {
  Rat R;
  Rat c1n;
  Rat c2c1;
  long euler = 0;
  std::optional<Rat> sigma;  // surfaces only
};

struct CatalogEntry {
  std::string name;
  std::string blurb;
  FanoPolytope polytope;
  std::optional<KnownValues> known;
};

inline const std::vector<CatalogEntry>& builtin_catalog() {
  static const std::vector<CatalogEntry> cat = [] {
    auto fano = [](std::vector<IVec> rays) {
      const int n = static_cast<int>(rays[0].size());
      const std::size_t N = rays.size();
      return make_fano(make_presentation(n, std::move(rays), RatVec(N, 1)));
    };
    std::vector<CatalogEntry> v;
    v.push_back({"p1", "projective line", fano({{1}, {-1}}),
                 KnownValues{1, 2, 0, 2, {}}});
    v.push_back({"p2", "projective plane", fano({{1, 0}, {0, 1}, {-1, -1}}),
                 KnownValues{1, 9, 3, 3, Rat(1)}});
    v.push_back({"p1xp1", "quadric surface",
                 fano({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}),
                 KnownValues{1, 8, 4, 4, Rat(0)}});
    v.push_back({"bl1p2", "plane blown up in one point",
                 fano({{1, 0}, {0, 1}, {1, 1}, {-1, -1}}),
                 KnownValues{Rat(6) / 7, 8, 4, 4, Rat(0)}});
    v.push_back({"bl2p2", "plane blown up in two points",
                 fano({{1, 0}, {0, 1}, {-1, -1}, {-1, 0}, {0, -1}}),
                 KnownValues{Rat(21) / 25, 7, 5, 5, Rat(-1)}});
    v.push_back({"bl3p2", "plane blown up in three points",
                 fano({{1, 0}, {0, 1}, {1, 1}, {-1, -1}, {-1, 0}, {0, -1}}),
                 KnownValues{1, 6, 6, 6, Rat(-2)}});
    v.push_back({"p3", "projective space",
                 fano({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}}),
                 KnownValues{1, 64, 24, 4, {}}});
    return v;
  }();
  return cat;
}

inline const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : builtin_catalog())
    if (e.name == name) return e;
  std::string names;
  for (const auto& e : builtin_catalog()) names += (names.empty() ? "" : ", ") + e.name;
  throw ValidationError("no catalog entry '" + name + "' (have: " + names + ")");
}

/// Exact recomputation of every stored value; InternalInconsistency names the
/// first mismatching entry and field.
inline void verify_catalog() {
  for (const auto& e : builtin_catalog()) {
    if (!e.known) continue;
    const auto rep = greatest_ricci_lower_bound(e.polytope);
    const auto cd = toric_chern_numbers(e.polytope);
    auto fail = [&](const std::string& field) {
      throw InternalInconsistency("catalog " + e.name + ": stored " + field +
                                  " does not match recomputation");
    };
    if (rep.R != e.known->R) fail("R");
    if (cd.c1n != e.known->c1n) fail("c1n");
    if (cd.c2c1 != e.known->c2c1) fail("c2c1");
    if (cd.euler != e.known->euler) fail("euler");
    if (e.known->sigma && (!cd.hasSigma || cd.sigma != *e.known->sigma))
      fail("sigma");
  }
}

// ----------------------------------------------------------------- report ----

struct AnalysisReport {
  std::string name;
  FanoPolytope polytope;
  FanoReport fano;
  ChernData chern;
  ConeAngles anglesAtR;
  EffectivenessWindow window;
  std::optional<ToricDivisorClass> limiting;          // R < 1 only
  std::optional<MiyaokaYauCheck> myAtOne, myAtR;      // n >= 2 only
  std::optional<Rat> alphaRequest;
  std::optional<ConeAngles> anglesAtAlpha;
  std::optional<ToricDivisorClass> divisorAtAlpha;
};

inline AnalysisReport analyze(FanoPolytope P, std::string name = "",
                              std::optional<Rat> alpha = {}) {
  AnalysisReport rep;
  rep.name = std::move(name);
  rep.polytope = std::move(P);
  rep.fano = greatest_ricci_lower_bound(rep.polytope);
  rep.chern = toric_chern_numbers(rep.polytope);
  rep.anglesAtR = cone_angles(rep.polytope, rep.fano, rep.fano.R);
  rep.window = effectiveness_window(rep.polytope, rep.fano);
  if (rep.fano.R < 1) rep.limiting = limiting_divisor(rep.polytope, rep.fano);
  if (rep.chern.n >= 2) {
    rep.myAtOne = miyaoka_yau_check(rep.chern, 1);
    rep.myAtR = miyaoka_yau_check(rep.chern, rep.fano.R);
  }
  if (alpha) {
    rep.alphaRequest = alpha;
    rep.anglesAtAlpha = cone_angles(rep.polytope, rep.fano, *alpha);
    rep.divisorAtAlpha =
        divisor_of_point(rep.polytope, tau_of_alpha(rep.fano, *alpha));
  }
  return rep;
}

namespace detail {

inline std::string dec_str(const Rat& r) {
  std::ostringstream os;
  os << to_double(r);
  return os.str();
}

inline std::string both(const Rat& r) { return rat_str(r) + " (" + dec_str(r) + ")"; }

inline std::string vec_str(const RatVec& v, const char* sep = ", ") {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? sep : "") + rat_str(v[i]);
  return s + ")";
}

inline std::string ivec_str(const IVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? std::string(", ") : std::string()) + std::to_string(v[i]);
  return s + ")";
}

inline std::string joined(const RatVec& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + rat_str(v[i]);
  return s;
}

inline std::string my_verdict(const MiyaokaYauCheck& my) {
  if (my.equality) return "equality";
  return my.holds ? "holds" : "fails";
}

}  // namespace detail

/// Exact fractions first, decimals parenthesized; machine mode emits
/// tab-separated key-value lines instead.
inline std::string render_report(const AnalysisReport& rep, bool machine = false) {
  using namespace detail;
  std::ostringstream os;
  const auto& P = rep.polytope;
  const int n = P.dim();
  if (machine) {
    os << "name\t" << rep.name << "\n";
    os << "dim\t" << n << "\n";
    os << "facets\t" << P.facets.num_facets() << "\n";
    os << "vertices\t" << P.verts.num_vertices() << "\n";
    os << "volume\t" << rat_str(P.volume) << "\n";
    os << "barycenter\t" << joined(P.barycenter) << "\n";
    os << "R\t" << rat_str(rep.fano.R) << "\n";
    if (!rep.fano.barycenter_is_zero()) {
      os << "sstar\t" << rat_str(rep.fano.sStar) << "\n";
      os << "Q\t" << joined(rep.fano.Q) << "\n";
    }
    os << "window\t" << rat_str(rep.window.lo) << "," << rat_str(rep.window.hi)
       << "\n";
    os << "angles_at_R\t" << joined(rep.anglesAtR.betas) << "\n";
    if (rep.limiting) {
      os << "limiting\t" << joined(rep.limiting->coeffs) << "\n";
      os << "limiting_effective\t" << (rep.limiting->effective ? 1 : 0) << "\n";
    }
    os << "c1n\t" << rat_str(rep.chern.c1n) << "\n";
    os << "c2c1\t" << rat_str(rep.chern.c2c1) << "\n";
    os << "euler\t" << rep.chern.euler << "\n";
    if (rep.chern.hasSigma) os << "sigma\t" << rat_str(rep.chern.sigma) << "\n";
    if (rep.myAtOne) {
      os << "my1\t" << my_verdict(*rep.myAtOne) << "\n";
      os << "my1_lhs\t" << rat_str(rep.myAtOne->lhs) << "\n";
      os << "my1_rhs\t" << rat_str(rep.myAtOne->rhs) << "\n";
      os << "myR\t" << my_verdict(*rep.myAtR) << "\n";
      os << "myR_lhs\t" << rat_str(rep.myAtR->lhs) << "\n";
      os << "myR_rhs\t" << rat_str(rep.myAtR->rhs) << "\n";
    }
    if (rep.alphaRequest) {
      os << "alpha\t" << rat_str(*rep.alphaRequest) << "\n";
      os << "angles_at_alpha\t" << joined(rep.anglesAtAlpha->betas) << "\n";
      os << "divisor_at_alpha\t" << joined(rep.divisorAtAlpha->coeffs) << "\n";
      os << "divisor_effective\t" << (rep.divisorAtAlpha->effective ? 1 : 0)
         << "\n";
    }
    return os.str();
  }

  os << "polytope " << (rep.name.empty() ? "(input)" : rep.name) << ": dim "
     << n << ", " << P.facets.num_facets() << " facets, "
     << P.verts.num_vertices() << " vertices\n";
  os << "  volume       " << both(P.volume) << "\n";
  os << "  barycenter   " << vec_str(P.barycenter) << "\n";
  os << "  R            " << both(rep.fano.R);
  if (rep.fano.barycenter_is_zero())
    os << "   [barycenter at the origin]";
  os << "\n";
  if (!rep.fano.barycenter_is_zero()) {
    os << "  s*           " << both(rep.fano.sStar) << "\n";
    os << "  Q            " << vec_str(rep.fano.Q) << "\n";
  }
  os << "  window       alpha in [" << rat_str(rep.window.lo) << ", "
     << rat_str(rep.window.hi) << "]\n";
  os << "  angles at alpha = R:\n";
  for (int j = 0; j < P.facets.num_facets(); ++j)
    os << "    beta[" << j << "] = " << both(rep.anglesAtR.betas[j])
       << "   facet " << ivec_str(P.facets.normals[j]) << "\n";
  if (rep.limiting) {
    os << "  limiting divisor (coefficients on facet divisors):\n";
    for (int j = 0; j < P.facets.num_facets(); ++j)
      os << "    " << both(rep.limiting->coeffs[j]) << "   on facet "
         << ivec_str(P.facets.normals[j]) << "\n";
  }
  if (n == 1)
    os << "  chern: deg c1 = " << rat_str(rep.chern.c1n)
       << ", euler = " << rep.chern.euler << "\n";
  else if (n == 2)
    os << "  chern: c1^2 = " << rat_str(rep.chern.c1n)
       << ", c2 = " << rat_str(rep.chern.c2c1)
       << ", euler = " << rep.chern.euler
       << ", sigma = " << rat_str(rep.chern.sigma) << "\n";
  else
    os << "  chern: c1^3 = " << rat_str(rep.chern.c1n)
       << ", c2.c1 = " << rat_str(rep.chern.c2c1)
       << ", euler = " << rep.chern.euler << "\n";
  if (rep.myAtOne) {
    os << "  inequality at beta = 1: " << rat_str(rep.myAtOne->lhs) << " >= "
       << rat_str(rep.myAtOne->rhs) << " (" << dec_str(rep.myAtOne->rhs)
       << ") -- " << my_verdict(*rep.myAtOne) << "\n";
    os << "  inequality at beta = R: " << rat_str(rep.myAtR->lhs) << " >= "
       << rat_str(rep.myAtR->rhs) << " (" << dec_str(rep.myAtR->rhs) << ") -- "
       << my_verdict(*rep.myAtR) << "\n";
  }
  if (rep.alphaRequest) {
    os << "  at alpha = " << both(*rep.alphaRequest) << ":\n";
    os << "    angles  " << vec_str(rep.anglesAtAlpha->betas) << "\n";
    os << "    divisor " << vec_str(rep.divisorAtAlpha->coeffs) << "  ["
       << (rep.divisorAtAlpha->effective ? "effective" : "not effective")
       << "]\n";
  }
  return os.str();
}

}  // namespace torickit
