#include "torickit/special.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace torickit;

TEST_CASE("interval conical potential solves its equation exactly") {
  for (double beta : {1.0, 0.5, 0.25}) {
    const auto phi = p1_conical_potential(beta);
    double worst = 0;
    for (int k = 0; k <= 1000; ++k) {
      const double rho = -20 + 40.0 * k / 1000;
      worst = std::max(
          worst, std::abs(phi.second(rho) - std::exp(-beta * phi(rho))));
    }
    REQUIRE(worst <= 1e-12);  // measured 7.1e-15 at beta = 1
  }

  const auto phi1 = p1_conical_potential(1.0);
  REQUIRE(phi1(0.0) == Catch::Approx(std::log(2.0)).margin(1e-15));
  for (double rho : {-2.0, 0.0, 2.0})
    REQUIRE(phi1.second(rho) ==
            Catch::Approx(std::exp(-phi1(rho))).margin(1e-14));

  const auto phih = p1_conical_potential(0.5);
  REQUIRE(phih(0.0) == Catch::Approx(2.772588722239781).margin(1e-14));
  REQUIRE(phih.prime(0.0) == 0.0);
}

TEST_CASE("conical moment image and cone tail") {
  const auto phi = p1_conical_potential(0.5);
  for (double rho : {-30.0, -4.0, -0.3, 0.0, 1.7, 25.0}) {
    const double p = phi.prime(rho);
    REQUIRE(p > -1.0);
    REQUIRE(p < 1.0);
    REQUIRE(p == Catch::Approx(std::tanh(0.25 * rho)).margin(1e-15));
  }
  // the end of the interval is approached at the cone rate:
  // (1 - phi'(rho)) e^{beta rho} = 2 / (1 + e^{-beta rho}) -> 2
  for (double rho : {10.0, 14.0, 18.0}) {
    const double tail = (1 - phi.prime(rho)) * std::exp(0.5 * rho);
    REQUIRE(tail == Catch::Approx(2.0 / (1 + std::exp(-0.5 * rho)))
                        .margin(1e-10));
  }
  REQUIRE((1 - phi.prime(18.0)) * std::exp(0.5 * 18.0) ==
          Catch::Approx(2.0).margin(1e-3));

  REQUIRE_THROWS_AS(p1_conical_potential(0.0), AlphaOutOfRange);
  REQUIRE_THROWS_AS(p1_conical_potential(1.5), AlphaOutOfRange);
  REQUIRE_THROWS_AS(p1_conical_potential(-0.3), AlphaOutOfRange);
}

TEST_CASE("Calabi branch: closed values and the ODE residual") {
  REQUIRE(calabi_Y(0, 1, 3) == Catch::Approx(8.0 / 3).margin(1e-14));
  REQUIRE(calabi_Y(0.5, 1, 1) == 0.0);   // the branch fits Y(a) = 0 exactly
  REQUIRE(calabi_Yprime(0, 1, 3) == Catch::Approx(1 + 1.0 / 9).margin(1e-14));

  // the stable expm1 form keeps the residual at machine level across alpha,
  // including the near-limit alpha = 1e-3 where the naive form cancels badly
  double worst = 0;
  for (double alpha : {0.0, 1e-3, 0.1, 1.0 / 3, 0.5, 1.0}) {
    const CalabiProfile p{alpha, 1, 3, 0};
    REQUIRE(p(1.0) == 0.0);
    for (int k = 1; k < 1000; ++k) {
      const double x = 1 + 2.0 * k / 1000;
      worst = std::max(worst, p.ode_residual(x));
    }
  }
  REQUIRE(worst <= 1e-10);  // measured 1.8e-13
}

TEST_CASE("two-point constraint has closed rational checkpoints") {
  // g(alpha) = (3 alpha - 1) e^{2 alpha} - alpha + 1 on [1, 3]
  REQUIRE(calabi_constraint(0, 1, 3) == 0.0);
  REQUIRE(calabi_constraint(1.0 / 3, 1, 3) ==
          Catch::Approx(2.0 / 3).margin(1e-15));
  REQUIRE(calabi_constraint(0.5, 1, 3) ==
          Catch::Approx(std::exp(1.0) / 2 + 0.5).margin(1e-15));

  const auto cs = calabi_coefficients(1.0 / 3, 1, 3);
  REQUIRE_FALSE(cs.profile.has_value());
  REQUIRE(cs.defect == Catch::Approx(2.053668476130).margin(1e-9));

  // alpha = 0: the limit branch exists but still misses Y(b) = 0 by 8/3
  const auto cs0 = calabi_coefficients(0, 1, 3);
  REQUIRE_FALSE(cs0.profile.has_value());
  REQUIRE(cs0.defect == Catch::Approx(8.0 / 3).margin(1e-14));

  // a degenerate interval where the branch *is* consistent: b -> a collapses
  // the defect to zero, and the profile engages
  const auto tight = calabi_coefficients(0.5, 2, 2 + 1e-13, 1e-10);
  REQUIRE(tight.profile.has_value());
  REQUIRE(tight.profile->c ==
          Catch::Approx(8 * std::exp(1.0) * (1 - 1.0)).margin(1e-9));

  REQUIRE_THROWS_AS(calabi_coefficients(0.5, -1, 3), ValidationError);
  REQUIRE_THROWS_AS(calabi_coefficients(0.5, 3, 1), ValidationError);
  REQUIRE_THROWS_AS(calabi_coefficients(1.5, 1, 3), AlphaOutOfRange);
  REQUIRE_THROWS_AS(calabi_coefficients(-0.1, 1, 3), AlphaOutOfRange);
}

TEST_CASE("nonexistence certificate for the [1, 3] profile") {
  const auto cert = nonexistence_certificate();
  REQUIRE(cert.g0 == 0.0);
  REQUIRE(cert.gprime0 == 0.0);
  REQUIRE(cert.samples == 10000);
  REQUIRE(cert.minSecond == Catch::Approx(8.0).margin(1e-12));
  REQUIRE(cert.minG > 0.0);
  REQUIRE(cert.minG == Catch::Approx(4.0046700017e-6).margin(1e-12));

  REQUIRE_THROWS_AS(nonexistence_certificate(1, 2), ValidationError);
  REQUIRE_THROWS_AS(nonexistence_certificate(2, 3), ValidationError);
}

TEST_CASE("root scans come back empty on every tested interval") {
  // g(0) = g'(0) = 0 with g'' > 0 throughout, so no interval ever yields a
  // root; the scans verify the concrete instances at sampling resolution
  const auto s13 = scan_constraint_root(1, 3);
  REQUIRE_FALSE(s13.rootFound);
  REQUIRE(s13.samples == 10001);
  REQUIRE(s13.minValue > 0.0);
  REQUIRE(s13.minValue == Catch::Approx(4.000467e-8).epsilon(1e-4));
  REQUIRE(s13.argmin == Catch::Approx(1e-4).margin(1e-12));

  const auto s12 = scan_constraint_root(1, 2);
  REQUIRE_FALSE(s12.rootFound);
  REQUIRE(s12.minValue == Catch::Approx(1.500083e-8).epsilon(1e-4));

  for (auto [a, b] : {std::pair{0.5, 0.9}, {2.0, 2.5}, {0.1, 7.0}}) {
    const auto s = scan_constraint_root(a, b);
    REQUIRE_FALSE(s.rootFound);
    REQUIRE(s.minValue > 0.0);
  }

  REQUIRE_THROWS_AS(scan_constraint_root(0, 3), ValidationError);
  REQUIRE_THROWS_AS(scan_constraint_root(2, 2), ValidationError);
  REQUIRE_THROWS_AS(scan_constraint_root(1, 3, 1), ValidationError);
}
