#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "hypgauge/domains.hpp"
#include "hypgauge/geometry.hpp"

using namespace hypgauge;

namespace {

SlitDomain single_ray_domain() {
  SlitDomain dom;
  dom.pieces.push_back(RadialRay{0.0, 1.0});
  dom.basepoint = {-1.0, 0.0};
  dom.finalize();
  return dom;
}

}  // namespace

TEST_CASE("distance to a single ray", "[geometry]") {
  const SlitDomain dom = single_ray_domain();
  // perpendicular foot lands on the ray
  CHECK(distance_to_boundary({2.0, 0.5}, dom) == Catch::Approx(0.5).epsilon(1e-12));
  // nearest point is the tip
  CHECK(distance_to_boundary({0.5, 0.0}, dom) == Catch::Approx(0.5).epsilon(1e-12));
  CHECK(distance_to_boundary({1.0, 0.0}, dom) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("ray-fan base point clearance", "[geometry]") {
  const SlitDomain dom = example1_domain({3});
  CHECK(distance_to_boundary({0.0, 0.0}, dom) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("locate classifies interior, boundary, outside", "[geometry]") {
  const SlitDomain ex2 = example2_domain({4});
  CHECK(locate(std::polar(0.5, 0.2), ex2, 1e-9).region == Region::Outside);
  CHECK(locate({std::exp(0.25), 0.0}, ex2, 1e-9).region == Region::Inside);
  CHECK(locate(std::polar(2.0, 1.4), ex2, 1e-9).region == Region::Outside);

  const SlitDomain ray = single_ray_domain();
  const auto on = locate({1.0 + 1e-12, 0.0}, ray, 1e-9);
  CHECK(on.region == Region::OnBoundary);
  CHECK(on.piece == 0);
}

TEST_CASE("fan distance matches generic piece distance", "[geometry]") {
  const SlitDomain fast = example1_domain({3});
  SlitDomain generic = fast;
  generic.fans.clear();
  generic.finalize();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ulog(-2.0, std::log(8e20));
  std::uniform_real_distribution<double> uang(-kPi, kPi);
  for (int k = 0; k < 20000; ++k) {
    const Complex z = std::polar(std::exp(ulog(rng)), uang(rng));
    const double a = distance_to_boundary(z, fast);
    const double b = distance_to_boundary(z, generic);
    // angle-representation rounding is amplified by |z|
    REQUIRE(std::abs(a - b) <= 1e-12 * std::max(a, b) + 5e-16 * std::abs(z));
  }
}

TEST_CASE("distance is 1-Lipschitz", "[geometry]") {
  const SlitDomain doms[] = {example1_domain({2}), example2_domain({3}), slit_disk(0.5)};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const auto& dom : doms) {
    for (int k = 0; k < 5000; ++k) {
      const Complex z1{u(rng), u(rng)};
      const Complex z2{u(rng), u(rng)};
      const double d1 = distance_to_boundary(z1, dom);
      const double d2 = distance_to_boundary(z2, dom);
      REQUIRE(std::abs(d1 - d2) <= std::abs(z1 - z2) + 1e-12);
    }
  }
}

TEST_CASE("level-circle components of the ray fan", "[geometry]") {
  const SlitDomain dom = example1_domain({3});

  const auto inner = circle_components(dom, 0.5);
  REQUIRE(inner.size() == 1);
  CHECK(inner[0].closed_circle);

  CHECK(circle_components(dom, 1.5).size() == 4);
  CHECK(circle_components(dom, std::exp(5.0 * kPi)).size() == 8);
}

TEST_CASE("component endpoints lie on pieces", "[geometry]") {
  const SlitDomain dom = example1_domain({3});
  for (double alpha : {1.7, std::exp(5.0 * kPi), std::exp(9.3 * kPi)}) {
    const auto comps = circle_components(dom, alpha);
    const double tol = geom_tol(alpha) * 10;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      // pairwise disjoint, sorted counterclockwise
      if (i + 1 < comps.size())
        REQUIRE(wrap_angle(comps[i].theta_hi) <= wrap_angle(comps[i + 1].theta_lo) + 1e-9);
      for (double ang : {comps[i].theta_lo, comps[i].theta_hi}) {
        const double d = distance_to_boundary(std::polar(alpha, ang), dom);
        REQUIRE(d <= tol * std::max(1.0, alpha));
      }
    }
  }
}

TEST_CASE("component count matches the closed form", "[geometry]") {
  const Example1Params p{3};
  const SlitDomain dom = example1_domain(p);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ulog(std::log(1e-2), 14.0 * kPi);
  int checked = 0;
  for (int k = 0; k < 10000; ++k) {
    const double alpha = std::exp(ulog(rng));
    const int expected = component_count(p, alpha);
    if (expected == 1) {
      const auto comps = circle_components(dom, alpha);
      REQUIRE(comps.size() == 1);
      REQUIRE(comps[0].closed_circle);
    } else {
      REQUIRE(static_cast<int>(circle_components(dom, alpha).size()) == expected);
    }
    ++checked;
  }
  REQUIRE(checked == 10000);
}

TEST_CASE("arc-slit sector level sets are connected", "[geometry]") {
  const SlitDomain dom = example2_domain({4});
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.01, 4.0);
  for (int k = 0; k < 1000; ++k) {
    const double alpha = std::exp(u(rng));
    REQUIRE(circle_components(dom, alpha).size() == 1);
  }
  // exactly at a ring radius only the gap arc remains
  const auto at_ring = circle_components(dom, std::exp(2.0));
  REQUIRE(at_ring.size() == 1);
  CHECK(at_ring[0].theta_hi - at_ring[0].theta_lo ==
        Catch::Approx(2.0 * example2_gap_half_width(2)).epsilon(1e-9));
}

TEST_CASE("circle misses the domain", "[geometry]") {
  const SlitDomain ex2 = example2_domain({2});
  CHECK_THROWS_AS(circle_components(ex2, 0.5), EmptyIntersection);
  const SlitDomain disk = slit_disk(0.5);
  CHECK_THROWS_AS(circle_components(disk, 1.5), EmptyIntersection);
}

TEST_CASE("slit disk level circle is cut by the slit", "[geometry]") {
  const SlitDomain disk = slit_disk(0.5);
  const auto below = circle_components(disk, 0.3);
  REQUIRE(below.size() == 1);
  CHECK(below[0].closed_circle);
  const auto across = circle_components(disk, 0.7);
  REQUIRE(across.size() == 1);
  CHECK_FALSE(across[0].closed_circle);
  CHECK(across[0].theta_hi - across[0].theta_lo == Catch::Approx(kTwoPi).epsilon(1e-9));
}

TEST_CASE("domain serialization round trip", "[geometry]") {
  const SlitDomain doms[] = {example1_domain({2}), example2_domain({3}), slit_disk(0.25),
                             sector_domain(kPi / 4), strip_domain(1.0)};
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (const auto& dom : doms) {
    std::ostringstream os;
    save_domain(os, dom);
    std::istringstream is(os.str());
    const SlitDomain back = load_domain(is);
    REQUIRE(back.pieces.size() == dom.pieces.size());
    REQUIRE(back.basepoint == dom.basepoint);
    for (int k = 0; k < 2000; ++k) {
      const Complex z{u(rng), u(rng)};
      REQUIRE(distance_to_boundary(z, back) ==
              Catch::Approx(distance_to_boundary(z, dom)).margin(1e-12));
    }
  }
}
