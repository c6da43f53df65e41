#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hypgauge/domains.hpp"
#include "hypgauge/exact.hpp"
#include "hypgauge/quasihyp.hpp"

using namespace hypgauge;

namespace {

SlitDomain unit_disk() {
  SlitDomain dom;
  dom.pieces.push_back(Circle{{0, 0}, 1.0, CircleSide::Interior});
  dom.finalize();
  return dom;
}

SlitDomain upper_half_plane() {
  SlitDomain dom;
  dom.pieces.push_back(Segment{{-1e4, 0}, {1e4, 0}});
  dom.finalize();
  return dom;
}

}  // namespace

TEST_CASE("half-plane vertical geodesic", "[quasihyp]") {
  const SlitDomain uhp = upper_half_plane();
  const auto res = quasihyp_distance(uhp, {0, 1}, {0, std::exp(1.0)}, 4);
  CHECK(res.delta_upper == Catch::Approx(1.0).margin(1e-2));
  CHECK(res.delta_upper >= 1.0 - 1e-12);  // certified upper bound
  CHECK(res.polyline.front() == Complex{0, 1});
  CHECK(res.polyline.back() == Complex{0, std::exp(1.0)});
}

TEST_CASE("disk radius integral", "[quasihyp]") {
  const SlitDomain disk = unit_disk();
  const auto res = quasihyp_distance(disk, {0, 0}, {0.5, 0}, 4);
  CHECK(res.delta_upper == Catch::Approx(std::log(2.0)).margin(1e-2));
  CHECK(res.delta_upper >= std::log(2.0) - 1e-12);
}

TEST_CASE("strip vertical integral", "[quasihyp]") {
  const SlitDomain strip = strip_domain(1.0);
  const auto res = quasihyp_distance(strip, {0, 0}, {0, 1.0 - 1.0 / std::exp(1.0)}, 4);
  CHECK(res.delta_upper == Catch::Approx(1.0).margin(1e-2));
}

TEST_CASE("distance is symmetric in its endpoints", "[quasihyp]") {
  const SlitDomain disk = unit_disk();
  const Complex a{0.1, -0.3}, b{-0.5, 0.2};
  const auto ab = quasihyp_distance(disk, a, b, 2);
  const auto ba = quasihyp_distance(disk, b, a, 2);
  CHECK(std::abs(ab.delta_upper - ba.delta_upper) <= 1e-10);
}

TEST_CASE("triangle inequality on sampled triples", "[quasihyp]") {
  const SlitDomain dom = slit_disk(0.5);
  const Complex pts[] = {{0.0, 0.0}, {0.4, 0.3}, {-0.2, 0.5}, {0.1, -0.6}};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        if (k == i || k == j) continue;
        const double dij = quasihyp_distance(dom, pts[i], pts[j], 2).delta_upper;
        const double dik = quasihyp_distance(dom, pts[i], pts[k], 2).delta_upper;
        const double dkj = quasihyp_distance(dom, pts[k], pts[j], 2).delta_upper;
        // upper bounds may each overshoot by the mesh factor
        REQUIRE(dij <= dik + dkj + 0.15 * (dik + dkj) + 1e-9);
      }
}

TEST_CASE("refinement never increases the bound", "[quasihyp]") {
  const SlitDomain doms[] = {unit_disk(), slit_disk(0.5), strip_domain(1.0)};
  const Complex targets[] = {{0.55, 0.35}, {-0.62, 0.1}, {1.5, 0.7}};
  for (int c = 0; c < 3; ++c) {
    double prev = std::numeric_limits<double>::infinity();
    for (int levels = 1; levels <= 4; ++levels) {
      const auto res = quasihyp_distance(doms[c], {0, 0}, targets[c], levels);
      REQUIRE(res.delta_upper <= prev + 1e-12);
      prev = res.delta_upper;
    }
  }
}

TEST_CASE("bracket contains the true hyperbolic distance", "[quasihyp]") {
  // disk: exact d known in closed form
  const SlitDomain disk = unit_disk();
  for (double r : {0.3, 0.5, 0.8}) {
    const auto res = quasihyp_distance(disk, {0, 0}, {r, 0}, 3);
    const auto [lo, hi] = hyperbolic_bracket(res.delta_upper);
    const double d = disk_hyperbolic_distance({0, 0}, {r, 0});
    CHECK(lo <= d);
    CHECK(d <= hi);
  }
  // strip of half-width 1: crossing between symmetric points
  const SlitDomain strip = strip_domain(1.0);
  for (double c : {0.3, 0.6}) {
    const auto res = quasihyp_distance(strip, {0, -c}, {0, c}, 3);
    const auto [lo, hi] = hyperbolic_bracket(res.delta_upper);
    const double d = strip_cross_distance(c);
    CHECK(lo <= d);
    CHECK(d <= hi);
  }
}

TEST_CASE("bracket arithmetic", "[quasihyp]") {
  const auto [lo, hi] = hyperbolic_bracket(1.0);
  CHECK(lo == 0.5);
  CHECK(hi == 2.0);
  CHECK(hi / lo == 4.0);
  CHECK_THROWS_AS(hyperbolic_bracket(0.0), DomainError);
}

TEST_CASE("ring-crossing lower bound", "[quasihyp]") {
  CHECK(anisot_bound(1, 0.5, 0.5) == 0.0);
  CHECK(anisot_bound(1, 0.5, 1.0 - 1.0 / 40.0) ==
        Catch::Approx(1.4040651409846813).epsilon(1e-12));
  // closed antiderivative evaluated at x_hi = n - 40^{-n}
  const double direct = 0.5 * (std::asinh(40.0 * (1 - 0.25)) - std::asinh(1.0));
  CHECK(anisot_bound(1, 0.25, 1.0 - 1.0 / 40.0) == Catch::Approx(direct).epsilon(1e-12));
  CHECK_THROWS_AS(anisot_bound(1, 0.9, 0.5), DomainError);
}

TEST_CASE("log-plane ring crossings respect the arcsinh bound", "[quasihyp]") {
  const SlitDomain logdom = example2_log_domain(3, 3.5);
  for (int n : {1, 2}) {
    const double x_lo = n - 0.5;
    const double x_hi = std::log(example2_alpha(n));  // = n - 40^{-n}
    const auto res = quasihyp_distance(logdom, {x_lo, 0.0}, {x_hi, 0.0}, 4);
    const double bound = anisot_bound(n, x_lo, x_hi);
    CHECK(res.delta_upper >= bound - 1e-2);
    // the bound halves the integral, so the full distance dominates twice it
    CHECK(res.delta_upper >= 2.0 * bound - 1e-2);
  }
}

TEST_CASE("separated endpoints are reported", "[quasihyp]") {
  SlitDomain box;
  box.pieces.push_back(Segment{{0, 0}, {1, 0}});
  box.pieces.push_back(Segment{{1, 0}, {1, 1}});
  box.pieces.push_back(Segment{{1, 1}, {0, 1}});
  box.pieces.push_back(Segment{{0, 1}, {0, 0}});
  box.finalize();
  CHECK_THROWS_AS(quasihyp_distance(box, {0.5, 0.5}, {3.0, 0.5}, 1), Disconnected);
}

TEST_CASE("boundary endpoints are rejected", "[quasihyp]") {
  const SlitDomain disk = unit_disk();
  CHECK_THROWS_AS(quasihyp_distance(disk, {1.0, 0.0}, {0, 0}, 1), NonInteriorPoint);
}
