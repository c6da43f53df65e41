#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hypgauge/exact.hpp"
#include "hypgauge/quadrature.hpp"

using namespace hypgauge;

TEST_CASE("disk hyperbolic distance", "[exact]") {
  CHECK(disk_hyperbolic_distance({0, 0}, {0.5, 0}) == Catch::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(disk_hyperbolic_distance({0, 0}, {0, 0}) == 0.0);
  CHECK_THROWS_AS(disk_hyperbolic_distance({1.0, 0}, {0, 0}), OutOfDisk);

  // Moebius invariance: send a to 0 by T(z) = (z - a)/(1 - conj(a) z).
  const Complex a{0.3, 0.0}, b{0.0, 0.3};
  const Complex image = (b - a) / (1.0 - std::conj(a) * b);
  CHECK(disk_hyperbolic_distance(a, b) ==
        Catch::Approx(disk_hyperbolic_distance({0, 0}, image)).epsilon(1e-12));
}

TEST_CASE("projection-theorem floor", "[exact]") {
  // independent route: arcsin((1-r)/(1+r)) = pi/2 - 2 atan(sqrt(r))
  const double r0 = 0.5;
  const double via_atan = 1.0 - (4.0 / kPi) * std::atan(std::sqrt(r0));
  CHECK(bn_lower_bound(r0) == Catch::Approx(via_atan).epsilon(1e-12));
  CHECK(bn_lower_bound(r0) == Catch::Approx(0.21634689593878546).epsilon(1e-12));
  CHECK(bn_lower_bound(1.0) == Catch::Approx(0.0).margin(1e-15));
  CHECK(bn_lower_bound(1e-12) == Catch::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS_AS(bn_lower_bound(0.0), DomainError);
  CHECK_THROWS_AS(bn_lower_bound(1.5), DomainError);

  // consistency with d = log((1+r)/(1-r)): floor equals (2/pi) asin(e^{-d})
  for (double r : {0.1, 0.4, 0.9}) {
    const double d = std::log((1 + r) / (1 - r));
    CHECK(bn_lower_bound(r) == Catch::Approx((2 / kPi) * std::asin(std::exp(-d))).epsilon(1e-12));
  }
}

TEST_CASE("radial slit measure hits the printed constant", "[exact]") {
  CHECK(radial_slit_measure(1.0 / 40.0) == Catch::Approx(0.719987303).margin(1e-9));
  CHECK(radial_slit_measure(1e-9) == Catch::Approx(1.0).epsilon(1e-4));
  CHECK(radial_slit_measure(1.0 - 1e-9) == Catch::Approx(0.0).margin(1e-6));
  CHECK_THROWS_AS(radial_slit_measure(1.0), DomainError);
}

TEST_CASE("geodesic measure bounds", "[exact]") {
  const auto b0 = geodesic_measure_bounds(0.0);
  CHECK(b0.lower == 1.0);
  CHECK(b0.upper == Catch::Approx(4.0 / kPi).epsilon(1e-15));
  const auto b1 = geodesic_measure_bounds(std::log(3.0));
  CHECK(b1.lower == Catch::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(b1.upper == Catch::Approx(4.0 / (3.0 * kPi)).epsilon(1e-12));
  // strict monotonicity
  CHECK(geodesic_measure_bounds(1.0).lower > geodesic_measure_bounds(2.0).lower);
  CHECK(geodesic_measure_bounds(1.0).upper > geodesic_measure_bounds(2.0).upper);
}

TEST_CASE("strip quantities", "[exact]") {
  CHECK(strip_line_measure(0.5) == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(strip_line_measure(0.0) == 1.0);
  CHECK(strip_line_measure(1.0 - 1e-12) == Catch::Approx(0.0).margin(1e-11));

  CHECK(strip_cross_distance(0.0) == 0.0);
  CHECK(strip_cross_distance(0.5) == Catch::Approx(1.7627471740390861).epsilon(1e-12));

  // quadrature oracle for the strip metric integral
  for (int k = 1; k <= 9; ++k) {
    const double c = 0.1 * k;
    const double oracle =
        integrate([](double t) { return 1.0 / std::cos(t); }, -c * kPi / 2, c * kPi / 2, 1e-12);
    CHECK(strip_cross_distance(c) == Catch::Approx(oracle).margin(1e-10));
  }
}

TEST_CASE("bounded-ratio constant", "[exact]") {
  CHECK(theorem_K(1e-9) == Catch::Approx(4.0 / kPi).epsilon(1e-6));
  // product of the two strip factors and 4/pi
  const double c = 0.5;
  const double expect = (4.0 / kPi) * (1.0 / strip_line_measure(c)) *
                        std::exp(strip_cross_distance(c));
  CHECK(theorem_K(c) == Catch::Approx(expect).epsilon(1e-12));
  CHECK(theorem_K(0.5) == Catch::Approx(22.262951696501737).epsilon(1e-9));
  // strictly increasing
  double prev = 0;
  for (int k = 1; k <= 19; ++k) {
    const double v = theorem_K(0.05 * k);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(theorem_K(0.0), DomainError);
  CHECK_THROWS_AS(theorem_K(1.0), DomainError);
}

TEST_CASE("identity K = (4/pi) e^{d}/omega on a grid", "[exact]") {
  for (int k = 1; k <= 99; ++k) {
    const double c = 0.01 * k;
    const double lhs = theorem_K(c);
    const double rhs =
        (4.0 / kPi) * (1.0 / strip_line_measure(c)) * std::exp(strip_cross_distance(c));
    REQUIRE(lhs == Catch::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("log-rectangle module", "[exact]") {
  CHECK(log_rectangle_module(1.0, std::exp(1.5 * kPi), kPi / 2) == Catch::Approx(3.0).epsilon(1e-12));
  CHECK(log_rectangle_module(1.0, std::exp(1.0), kPi) == Catch::Approx(1.0 / kPi).epsilon(1e-12));
  const double eps = 1e-6;
  CHECK(log_rectangle_module(1.0, 1.0 + eps, 0.7) ==
        Catch::Approx(eps / 0.7).epsilon(1e-5));
  CHECK_THROWS_AS(log_rectangle_module(1.0, 0.5, kPi), DomainError);
}

TEST_CASE("green-to-hyperbolic conversion", "[exact]") {
  CHECK(green_to_hyperbolic(std::log(3.0)) == Catch::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(green_to_hyperbolic(50.0) == Catch::Approx(0.0).margin(1e-20));
  CHECK_THROWS_AS(green_to_hyperbolic(0.0), DomainError);
  // disk consistency: g = -log r gives the hyperbolic distance to 0
  for (double r : {0.1, 0.5, 0.9}) {
    CHECK(green_to_hyperbolic(-std::log(r)) ==
          Catch::Approx(disk_hyperbolic_distance({0, 0}, {r, 0})).margin(1e-12));
  }
  // identity on a fine grid
  for (int k = 1; k < 1000; ++k) {
    const double r = k / 1000.0;
    REQUIRE(std::abs(green_to_hyperbolic(-std::log(r)) -
                     disk_hyperbolic_distance({0, 0}, {r, 0})) <= 1e-12);
  }
}

TEST_CASE("beurling upper bound", "[exact]") {
  CHECK(beurling_upper(2.0 + 1e-9) == Catch::Approx(3 * kPi * std::exp(-2 * kPi)).epsilon(1e-6));
  CHECK(beurling_upper(3.0) == Catch::Approx(3 * kPi * std::exp(-3 * kPi)).epsilon(1e-12));
  CHECK(beurling_upper(3.0) == Catch::Approx(7.6057503464132811e-04).epsilon(1e-9));
  CHECK_THROWS_AS(beurling_upper(2.0), PreconditionNotMet);
}

TEST_CASE("decomposition bound pair", "[exact]") {
  const auto [p1, lem1] = decomposition_bounds(3.0);
  CHECK(p1 == Catch::Approx(8.82 * std::exp(-3 * kPi)).epsilon(1e-12));
  CHECK(lem1 == Catch::Approx(3.0 * p1).epsilon(1e-12));
  for (double m2 : {3.0, 4.5, 8.0}) {
    const auto [a, b] = decomposition_bounds(m2);
    CHECK(b / a == Catch::Approx(3.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(decomposition_bounds(2.99), PreconditionNotMet);
}

TEST_CASE("center arc measure", "[exact]") {
  CHECK(center_arc_measure(1.5 * kPi) == Catch::Approx(0.75).epsilon(1e-15));
  CHECK(center_arc_measure(kTwoPi) == 1.0);
  CHECK(center_arc_measure(0.0) == 0.0);
  CHECK_THROWS_AS(center_arc_measure(7.0), DomainError);
}

TEST_CASE("arcsin dominates the identity on [0,1]", "[exact]") {
  // the inner step of the projection chain: (2/pi) asin x >= (2/pi) x
  for (int k = 0; k <= 10000; ++k) {
    const double x = k / 10000.0;
    REQUIRE(std::asin(x) >= x - 1e-15);
  }
}

TEST_CASE("sector oracle against the closed form", "[exact]") {
  // closed form omega = (4/pi) atan((base/alpha)^gamma), d = gamma log(alpha/base)
  for (double half : {kPi / 4, kPi / 2, 0.9}) {
    const double gamma = kPi / (2 * half);
    for (double alpha : {2.0, 10.0, 500.0}) {
      const auto res = sector_oracle(half, 1.0, alpha);
      const double x = std::pow(1.0 / alpha, gamma);
      CHECK(res.omega == Catch::Approx((4.0 / kPi) * std::atan(x)).margin(2e-8));
      CHECK(res.d == Catch::Approx(gamma * std::log(alpha)).epsilon(1e-12));
    }
  }
  // degenerate level through the base point
  const auto deg = sector_oracle(kPi / 2, 1.0, 1.0);
  CHECK(deg.d == 0.0);
  // inversion symmetry handles alpha < base
  const auto in = sector_oracle(kPi / 4, 1.0, 0.1);
  const auto out = sector_oracle(kPi / 4, 1.0, 10.0);
  CHECK(in.d == Catch::Approx(out.d).epsilon(1e-12));
  CHECK(in.omega == Catch::Approx(out.omega).margin(1e-8));
  // monotone decay past the base level
  double prev = 2.0;
  for (double alpha : {1.5, 3.0, 8.0, 30.0}) {
    const double w = sector_oracle(kPi / 4, 1.0, alpha).omega;
    CHECK(w < prev);
    prev = w;
  }
}
