#include "torickit/chern.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace torickit;

namespace {

FanoPolytope fano(std::vector<IVec> rays) {
  const int n = static_cast<int>(rays[0].size());
  return make_fano(make_presentation(n, std::move(rays), RatVec(rays.size(), Rat(1))));
}

const std::vector<IVec> kP1{{1}, {-1}};
const std::vector<IVec> kP2{{1, 0}, {0, 1}, {-1, -1}};
const std::vector<IVec> kP1xP1{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
const std::vector<IVec> kBl1{{1, 0}, {0, 1}, {1, 1}, {-1, -1}};
const std::vector<IVec> kBl2{{1, 0}, {0, 1}, {-1, -1}, {-1, 0}, {0, -1}};
const std::vector<IVec> kBl3{{1, 0}, {0, 1}, {1, 1}, {-1, -1}, {-1, 0}, {0, -1}};
const std::vector<IVec> kP3{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}};

}  // namespace

TEST_CASE("chern numbers across the catalog shapes") {
  struct Row {
    std::vector<IVec> rays;
    Rat c1n, c2c1;
    long euler;
  };
  const std::vector<Row> rows = {
      {kP1, 2, 0, 2},    {kP2, 9, 3, 3},    {kP1xP1, 8, 4, 4},
      {kBl1, 8, 4, 4},   {kBl2, 7, 5, 5},   {kBl3, 6, 6, 6},
      {kP3, 64, 24, 4},
  };
  for (const auto& r : rows) {
    const auto cd = toric_chern_numbers(fano(r.rays));
    CAPTURE(r.c1n);
    REQUIRE(cd.c1n == r.c1n);
    REQUIRE(cd.c2c1 == r.c2c1);
    REQUIRE(cd.euler == r.euler);
    REQUIRE(cd.hasSigma == (cd.n == 2));
  }
}

TEST_CASE("surface signatures") {
  REQUIRE(toric_chern_numbers(fano(kP2)).sigma == 1);
  REQUIRE(toric_chern_numbers(fano(kP1xP1)).sigma == 0);
  REQUIRE(toric_chern_numbers(fano(kBl1)).sigma == 0);
  REQUIRE(toric_chern_numbers(fano(kBl2)).sigma == -1);
  REQUIRE(toric_chern_numbers(fano(kBl3)).sigma == -2);
}

TEST_CASE("intersection matrices from the fan") {
  const auto P = fano(kBl1);
  const auto si = surface_intersection_matrix(P);
  REQUIRE(si.selfInt == std::vector<std::int64_t>{0, 0, -1, 1});
  // exceptional curve meets the two coordinate curves, not the far line
  REQUIRE(si.matrix[2][0] == 1);
  REQUIRE(si.matrix[2][1] == 1);
  REQUIRE(si.matrix[2][3] == 0);
  REQUIRE(si.matrix[0][1] == 0);  // disjoint fibers

  REQUIRE(surface_intersection_matrix(fano(kP2)).selfInt ==
          std::vector<std::int64_t>{1, 1, 1});
  REQUIRE(surface_intersection_matrix(fano(kP1xP1)).selfInt ==
          std::vector<std::int64_t>{0, 0, 0, 0});
  REQUIRE(surface_intersection_matrix(fano(kBl2)).selfInt ==
          std::vector<std::int64_t>{0, 0, -1, -1, -1});
  REQUIRE(surface_intersection_matrix(fano(kBl3)).selfInt ==
          std::vector<std::int64_t>{-1, -1, -1, -1, -1, -1});
}

TEST_CASE("pairing identities on every surface") {
  for (auto rays : {kP2, kP1xP1, kBl1, kBl2, kBl3}) {
    const auto P = fano(rays);
    const auto cd = toric_chern_numbers(P);
    const auto si = surface_intersection_matrix(P);
    const RatVec ones(P.facets.num_facets(), 1);
    // -K = sum of facet divisors, so its degree and square give c1^2
    REQUIRE(si.degree_c1(ones) == cd.c1n);
    REQUIRE(si.pair(ones, ones) == cd.c1n);
    // smooth anticanonical members are elliptic
    REQUIRE(si.adjunction_chi(ones) == 0);
    for (std::size_t i = 0; i < si.matrix.size(); ++i)
      for (std::size_t j = 0; j < si.matrix.size(); ++j)
        REQUIRE(si.matrix[i][j] == si.matrix[j][i]);
  }
}

TEST_CASE("limiting divisor is numerically anticanonical") {
  const auto P = fano(kBl1);
  const auto rep = greatest_ricci_lower_bound(P);
  const auto D = limiting_divisor(P, rep);
  const auto si = surface_intersection_matrix(P);
  const auto cd = toric_chern_numbers(P);
  REQUIRE(si.degree_c1(D.coeffs) == cd.c1n);
  REQUIRE(si.pair(D.coeffs, D.coeffs) == cd.c1n);
  REQUIRE(si.adjunction_chi(D.coeffs) == 0);
}

TEST_CASE("conical shifts") {
  const auto cd = toric_chern_numbers(fano(kP2));
  const auto s = conical_chern_shift(cd, Rat(1) / 2, 2);
  REQUIRE(s.c1_shift == 0);
  REQUIRE(s.c2_shift == 12);
  REQUIRE(s.c1sq_shift == 0);
  REQUIRE(s.extrapolated);

  // beta = 1 is the smooth case: nothing moves
  const auto id = conical_chern_shift(cd, Rat(1), 1);
  REQUIRE(id.c1_shift == cd.c1n);
  REQUIRE(id.c2_shift == cd.c2c1);
  REQUIRE(id.c1sq_shift == cd.c1n);
  REQUIRE_FALSE(id.extrapolated);

  // divisor form agrees with the |-mK| convenience form
  const auto P = fano(kBl1);
  const auto cb = toric_chern_numbers(P);
  const auto si = surface_intersection_matrix(P);
  const auto D = limiting_divisor(P, greatest_ricci_lower_bound(P));
  const auto viaDeg = conical_chern_shift(cb, Rat(2) / 3, si.degree_c1(D.coeffs),
                                          si.pair(D.coeffs, D.coeffs));
  const auto viaM = conical_chern_shift(cb, Rat(2) / 3, 1);
  REQUIRE(viaDeg.c1_shift == viaM.c1_shift);
  REQUIRE(viaDeg.c2_shift == viaM.c2_shift);
  REQUIRE(viaDeg.c1sq_shift == viaM.c1sq_shift);

  const auto half = conical_chern_shift(cb, Rat(1) / 2, 1);
  REQUIRE(half.c1_shift == 4);
  REQUIRE(half.c2_shift == 4);
  REQUIRE(half.c1sq_shift == 2);
}

TEST_CASE("inequality check and the maximal angle") {
  const auto p2 = toric_chern_numbers(fano(kP2));
  auto my = miyaoka_yau_check(p2, 1);
  REQUIRE(my.holds);
  REQUIRE(my.equality);
  REQUIRE(my.betaMaxSq == 1);

  my = miyaoka_yau_check(p2, Rat(1) / 2);
  REQUIRE(my.holds);
  REQUIRE_FALSE(my.equality);
  REQUIRE(my.rhs == Rat(3) / 4);

  const auto p3 = toric_chern_numbers(fano(kP3));
  my = miyaoka_yau_check(p3, 1);
  REQUIRE(my.holds);
  REQUIRE(my.equality);  // 24 = (3/8) * 64
  REQUIRE(my.betaMaxSq == 1);

  const auto bl2 = toric_chern_numbers(fano(kBl2));
  my = miyaoka_yau_check(bl2, 1);
  REQUIRE(my.holds);
  REQUIRE_FALSE(my.equality);
  REQUIRE(my.betaMaxSq == 1);  // capped: 30/14 > 1
}

TEST_CASE("euler and signature of the conical structure") {
  auto es = conical_euler_signature(3, 1, 0, 9, Rat(1) / 2);
  REQUIRE(es.chi_g == 3);
  REQUIRE(es.sigma_g == Rat(-5) / 4);

  es = conical_euler_signature(4, 0, 0, 8, Rat(1) / 2);
  REQUIRE(es.chi_g == 4);
  REQUIRE(es.sigma_g == -2);

  // smooth limit
  es = conical_euler_signature(4, 0, 0, 8, 1);
  REQUIRE(es.chi_g == 4);
  REQUIRE(es.sigma_g == 0);
}

TEST_CASE("dimension and angle guards") {
  const auto p1 = toric_chern_numbers(fano(kP1));
  REQUIRE(p1.c2c1 == 0);
  REQUIRE_THROWS_AS(miyaoka_yau_check(p1, 1), ValidationError);
  REQUIRE_THROWS_AS(conical_chern_shift(p1, Rat(1) / 2, 1), ValidationError);
  const auto p3 = toric_chern_numbers(fano(kP3));
  REQUIRE_THROWS_AS(conical_chern_shift(p3, Rat(1) / 2, 1), ValidationError);
  REQUIRE_THROWS_AS(surface_intersection_matrix(fano(kP3)), ValidationError);
  const auto p2 = toric_chern_numbers(fano(kP2));
  REQUIRE_THROWS_AS(miyaoka_yau_check(p2, 0), AlphaOutOfRange);
  REQUIRE_THROWS_AS(conical_chern_shift(p2, 2, 1), AlphaOutOfRange);
  REQUIRE_THROWS_AS(conical_euler_signature(3, 1, 0, 9, Rat(3) / 2),
                    AlphaOutOfRange);
}
