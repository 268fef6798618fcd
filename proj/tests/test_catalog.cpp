#include "torickit/catalog.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace torickit;

namespace {

RatVec rats(std::vector<Rat> v) { return v; }

template <typename Fn>
std::string message_of(Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("catalog is self-consistent and complete") {
  REQUIRE_NOTHROW(verify_catalog());

  const auto& cat = builtin_catalog();
  REQUIRE(cat.size() == 7);
  const char* names[] = {"p1", "p2", "p1xp1", "bl1p2", "bl2p2", "bl3p2", "p3"};
  for (size_t i = 0; i < 7; ++i) {
    REQUIRE(cat[i].name == names[i]);
    REQUIRE_FALSE(cat[i].blurb.empty());
    REQUIRE(cat[i].known.has_value());
  }

  // unit-range R everywhere, below 1 exactly on the asymmetric blowups
  REQUIRE(catalog_entry("p1").known->R == 1);
  REQUIRE(catalog_entry("p2").known->R == 1);
  REQUIRE(catalog_entry("p1xp1").known->R == 1);
  REQUIRE(catalog_entry("bl1p2").known->R == Rat(6) / 7);
  REQUIRE(catalog_entry("bl2p2").known->R == Rat(21) / 25);
  REQUIRE(catalog_entry("bl3p2").known->R == 1);
  REQUIRE(catalog_entry("p3").known->R == 1);

  // Chern rows: (c1^n, c2 c1^{n-2}, euler, sigma)
  REQUIRE(catalog_entry("p2").known->c1n == 9);
  REQUIRE(catalog_entry("p2").known->c2c1 == 3);
  REQUIRE(*catalog_entry("p2").known->sigma == 1);
  REQUIRE(catalog_entry("p1xp1").known->c1n == 8);
  REQUIRE(catalog_entry("bl1p2").known->c1n == 8);
  REQUIRE(catalog_entry("bl2p2").known->c1n == 7);
  REQUIRE(*catalog_entry("bl2p2").known->sigma == -1);
  REQUIRE(catalog_entry("bl3p2").known->c1n == 6);
  REQUIRE(catalog_entry("bl3p2").known->euler == 6);
  REQUIRE(catalog_entry("p3").known->c1n == 64);
  REQUIRE(catalog_entry("p3").known->c2c1 == 24);
  REQUIRE_FALSE(catalog_entry("p3").known->sigma.has_value());

  const std::string msg = message_of([] { catalog_entry("nope"); });
  REQUIRE(msg.find("no catalog entry 'nope'") != std::string::npos);
  REQUIRE(msg.find("bl1p2") != std::string::npos);  // lists what exists
  REQUIRE_THROWS_AS(catalog_entry("nope"), ValidationError);
}

TEST_CASE("print/parse round-trips every entry") {
  for (const auto& e : builtin_catalog()) {
    const auto back = parse_polytope(print_polytope(e.polytope));
    REQUIRE(back.facets.normals == e.polytope.facets.normals);
    REQUIRE(back.facets.offsets == e.polytope.facets.offsets);
    REQUIRE(back.volume == e.polytope.volume);
  }
}

TEST_CASE("parser accepts comments and reports 1-based line numbers") {
  const auto P = parse_polytope(
      "# leading comment\n"
      "\n"
      "dim 2   # trailing comment\n"
      "fano 1 0\n"
      "fano 0 1\n"
      "fano -1 -1  # far facet\n");
  REQUIRE(P.dim() == 2);
  REQUIRE(P.facets.num_facets() == 3);
  REQUIRE(P.volume == Rat(9) / 2);

  auto line_of = [](const std::string& text) {
    try {
      parse_presentation(text);
    } catch (const ParseError& e) {
      return e.line;
    }
    return -1;
  };

  REQUIRE(line_of("") == 0);                                     // empty input
  REQUIRE(line_of("fano 1 0\n") == 1);                           // missing dim
  REQUIRE(line_of("dim 4\n") == 1);                              // bad dimension
  REQUIRE(line_of("dim 2\n") == 1);                              // no facets
  REQUIRE(line_of("dim 2\nfano 1\n") == 2);                      // short row
  REQUIRE(line_of("dim 2\nfano 1 0 3\n") == 2);                  // long row
  REQUIRE(line_of("dim 2\nfano 1 0\nfano 0 bad\n") == 3);        // bad integer
  REQUIRE(line_of("dim 2\nfacet 1 0\n") == 2);                   // missing offset
  REQUIRE(line_of("dim 2\nray 1 0\n") == 2);                     // unknown keyword
  REQUIRE(line_of("dim 2\nfano 1 0\nfano 0 1\nfacet -1 -1 1/0\n") == 4);
  REQUIRE(line_of("dim x\n") == 1);

  REQUIRE_THROWS_AS(parse_presentation("dim 2\nfano 1 0\nfano 2 junk\n"),
                    ParseError);
}

TEST_CASE("validation failures carry witnesses") {
  // vertex (-1, 1) has active normals (1,0) and (-1,-2): determinant -2
  const std::string witness = message_of(
      [] { parse_polytope("dim 2\nfano 1 0\nfano 0 1\nfano -1 -2\n"); });
  REQUIRE(witness.find("not Delzant at vertex (-1, 1)") != std::string::npos);
  REQUIRE(witness.find("-2") != std::string::npos);

  const std::string offset = message_of([] {
    parse_polytope("dim 2\nfano 1 0\nfacet 0 1 3/2\nfano -1 -1\n");
  });
  REQUIRE(offset.find("lambda != 1 in fano mode") != std::string::npos);
  REQUIRE_THROWS_AS(
      parse_polytope("dim 2\nfano 1 0\nfacet 0 1 3/2\nfano -1 -1\n"),
      ValidationError);
}

TEST_CASE("analysis of the first blowup carries the exact worked values") {
  const auto rep = analyze(catalog_entry("bl1p2").polytope, "bl1p2", Rat(1) / 2);

  REQUIRE(rep.fano.R == Rat(6) / 7);
  REQUIRE(rep.fano.sStar == 6);
  REQUIRE(rep.window.lo == 0);
  REQUIRE(rep.window.hi == Rat(6) / 7);
  REQUIRE(rep.anglesAtR.betas ==
          rats({Rat(13) / 14, Rat(13) / 14, Rat(1), Rat(5) / 7}));

  REQUIRE(rep.limiting.has_value());
  REQUIRE(rep.limiting->coeffs == rats({Rat(1) / 2, Rat(1) / 2, Rat(0), Rat(2)}));
  REQUIRE(rep.limiting->effective);
  // the coefficient-2 component sits on the (-1,-1) facet
  REQUIRE(rep.polytope.facets.normals[3] == IVec{-1, -1});

  REQUIRE(rep.chern.c1n == 8);
  REQUIRE(rep.chern.c2c1 == 4);
  REQUIRE(rep.myAtOne->holds);
  REQUIRE_FALSE(rep.myAtOne->equality);
  REQUIRE(rep.myAtR->holds);
  REQUIRE(rep.myAtR->rhs == Rat(96) / 49);

  REQUIRE(rep.alphaRequest.has_value());
  REQUIRE(rep.anglesAtAlpha->betas ==
          rats({Rat(13) / 24, Rat(13) / 24, Rat(7) / 12, Rat(5) / 12}));
  REQUIRE(rep.divisorAtAlpha->coeffs ==
          rats({Rat(11) / 12, Rat(11) / 12, Rat(5) / 6, Rat(7) / 6}));
  REQUIRE(rep.divisorAtAlpha->effective);
}

TEST_CASE("analysis of the equality cases") {
  const auto p2 = analyze(catalog_entry("p2").polytope, "p2");
  REQUIRE(p2.fano.R == 1);
  REQUIRE(p2.fano.barycenter_is_zero());
  REQUIRE_FALSE(p2.limiting.has_value());  // no limiting divisor at R = 1
  REQUIRE(p2.myAtOne->equality);           // 3 = 9/3
  REQUIRE(p2.myAtOne->lhs == 3);
  REQUIRE(p2.myAtOne->rhs == 3);

  const auto p3 = analyze(catalog_entry("p3").polytope, "p3");
  REQUIRE(p3.fano.R == 1);
  REQUIRE(p3.myAtOne->equality);           // 24 = (3/8) 64
  REQUIRE(p3.myAtOne->lhs == 24);
  REQUIRE(p3.myAtOne->rhs == 24);

  const auto p1 = analyze(catalog_entry("p1").polytope, "p1");
  REQUIRE(p1.fano.R == 1);
  REQUIRE_FALSE(p1.myAtOne.has_value());   // no surface inequality on a curve
}

TEST_CASE("rendered reports expose the same numbers in both modes") {
  const auto rep = analyze(catalog_entry("bl1p2").polytope, "bl1p2", Rat(1) / 2);

  const std::string human = render_report(rep);
  REQUIRE(human.find("polytope bl1p2: dim 2, 4 facets, 4 vertices") !=
          std::string::npos);
  REQUIRE(human.find("R            6/7") != std::string::npos);
  REQUIRE(human.find("window       alpha in [0, 6/7]") != std::string::npos);
  REQUIRE(human.find("2 (2)   on facet (-1, -1)") != std::string::npos);

  const std::string machine = render_report(rep, true);
  auto has_line = [&](const std::string& line) {
    return machine.find(line + "\n") != std::string::npos;
  };
  REQUIRE(has_line("name\tbl1p2"));
  REQUIRE(has_line("R\t6/7"));
  REQUIRE(has_line("sstar\t6"));
  REQUIRE(has_line("Q\t-1/2,-1/2"));
  REQUIRE(has_line("window\t0,6/7"));
  REQUIRE(has_line("angles_at_R\t13/14,13/14,1,5/7"));
  REQUIRE(has_line("limiting\t1/2,1/2,0,2"));
  REQUIRE(has_line("limiting_effective\t1"));
  REQUIRE(has_line("c1n\t8"));
  REQUIRE(has_line("my1\tholds"));
  REQUIRE(has_line("divisor_at_alpha\t11/12,11/12,5/6,7/6"));
  REQUIRE(has_line("divisor_effective\t1"));

  // barycenter-at-origin entries suppress the s*/Q rows entirely
  const std::string mp2 =
      render_report(analyze(catalog_entry("p2").polytope, "p2"), true);
  REQUIRE(mp2.find("sstar") == std::string::npos);
  REQUIRE(mp2.find("R\t1\n") != std::string::npos);
}
