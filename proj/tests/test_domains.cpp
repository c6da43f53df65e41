#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "hypgauge/domains.hpp"
#include "hypgauge/quadspec.hpp"

using namespace hypgauge;

TEST_CASE("ray fan construction", "[domains]") {
  const SlitDomain dom = example1_domain({3});
  // 4 generation-0 rays plus 2^{l+1} per generation
  REQUIRE(dom.pieces.size() == 4u + 4u + 8u + 16u);
  const auto* r0 = std::get_if<RadialRay>(&dom.pieces[0]);
  REQUIRE(r0 != nullptr);
  CHECK(r0->theta == 0.0);
  CHECK(r0->r_start == 1.0);
  // generation 1 at (pi/2)(1/2 + k) from radius e^{4 pi}
  const auto* g1 = std::get_if<RadialRay>(&dom.pieces[4]);
  REQUIRE(g1 != nullptr);
  CHECK(g1->theta == Catch::Approx(kPi / 4).epsilon(1e-15));
  CHECK(g1->r_start == Catch::Approx(std::exp(4 * kPi)).epsilon(1e-15));
}

TEST_CASE("component count table", "[domains]") {
  const Example1Params p{3};
  CHECK(component_count(p, 0.5) == 1);
  CHECK(component_count(p, 1.5) == 4);
  CHECK(component_count(p, std::exp(9.0 * kPi)) == 16);
  // limit-from-above at the generation radius
  CHECK(component_count(p, std::exp(4.0 * kPi)) == 8);
  CHECK_THROWS_AS(component_count(p, std::exp(17.0 * kPi)), DomainError);
}

TEST_CASE("arc-slit sector construction", "[domains]") {
  const SlitDomain dom = example2_domain({4});
  CHECK(dom.basepoint == Complex{std::exp(0.25), 0.0});
  CHECK(dom.inner_radius.has_value());
  CHECK(dom.sector_half_angle == 1.0);
  CHECK(is_interior(dom.basepoint, dom, 1e-9));
  // ring 1 gap: the level circle at e^1 leaves the open arc |Arg z| < 1/40
  const auto comps = circle_components(dom, std::exp(1.0));
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].theta_lo == Catch::Approx(-1.0 / 40).margin(1e-12));
  CHECK(comps[0].theta_hi == Catch::Approx(1.0 / 40).margin(1e-12));
}

TEST_CASE("comb quadrilateral layout", "[domains]") {
  const CombQuad c1 = comb_quadrilateral(1);
  REQUIRE(c1.quad.dom.teeth.size() == 1);
  CHECK(c1.quad.dom.teeth[0].x == Catch::Approx(kPi / 4).epsilon(1e-15));
  CHECK(c1.quad.dom.teeth[0].y0 == Catch::Approx(4 * kPi).epsilon(1e-15));
  CHECK(c1.quad.dom.teeth[0].y1 == Catch::Approx(8 * kPi).epsilon(1e-15));
  REQUIRE(c1.module_R.size() == 1);
  CHECK(c1.module_R[0] == 4.0);
  REQUIRE(c1.level_cuts.size() == 1);
  CHECK(c1.level_cuts[0].y == Catch::Approx(6 * kPi).epsilon(1e-15));
  CHECK(c1.lj_cuts[0].y == Catch::Approx(5 * kPi).epsilon(1e-15));

  const CombQuad c2 = comb_quadrilateral(2);
  REQUIRE(c2.quad.dom.teeth.size() == 3);
  CHECK(c2.module_R[1] == 8.0);
  // gap heights halve per generation
  const double gap1 = kPi / 4, gap2 = kPi / 8;
  CHECK(gap2 / gap1 == Catch::Approx(0.5).epsilon(1e-15));
  CHECK(c2.quad.markers[2].real() == Catch::Approx(gap2).epsilon(1e-15));

  const CombQuad c0 = comb_quadrilateral(0);
  CHECK(c0.quad.dom.teeth.empty());
  CHECK(c0.quad.dom.height / c0.quad.dom.width == Catch::Approx(8.0).epsilon(1e-15));

  CHECK_THROWS_AS(comb_quadrilateral(4), DepthTooLarge);
}

TEST_CASE("domain spec strings", "[domains]") {
  const DomainSpec e1 = parse_domain_spec("example1:n=3");
  CHECK(e1.kind == DomainKind::Example1);
  CHECK(e1.n == 3);
  const DomainSpec sec = parse_domain_spec("sector:half=0.7853981633974483");
  CHECK(sec.kind == DomainKind::Sector);
  CHECK(sec.param == Catch::Approx(kPi / 4).epsilon(1e-12));
  CHECK(parse_domain_spec("strip:c=0.5").kind == DomainKind::Strip);
  CHECK(parse_domain_spec("slitdisk:r0=0.5").kind == DomainKind::SlitDisk);
  CHECK_THROWS_AS(parse_domain_spec("annulus:r=2"), DomainError);
  CHECK_THROWS_AS(parse_domain_spec("example1:m=3"), DomainError);
}

TEST_CASE("quad serialization round trip", "[domains]") {
  const CombQuad comb = comb_quadrilateral(2);
  std::ostringstream os;
  save_quad(os, comb.quad);
  std::istringstream is(os.str());
  const QuadSpec back = load_quad(is);
  REQUIRE(back.dom.teeth.size() == comb.quad.dom.teeth.size());
  CHECK(back.dom.width == comb.quad.dom.width);
  CHECK(back.dom.height == comb.quad.dom.height);
  for (std::size_t i = 0; i < back.dom.teeth.size(); ++i) {
    CHECK(back.dom.teeth[i].x == comb.quad.dom.teeth[i].x);
    CHECK(back.dom.teeth[i].y0 == comb.quad.dom.teeth[i].y0);
    CHECK(back.dom.teeth[i].y1 == comb.quad.dom.teeth[i].y1);
  }
  for (int k = 0; k < 4; ++k) CHECK(back.markers[k] == comb.quad.markers[k]);
}

TEST_CASE("fans mirror pieces after depth changes", "[domains]") {
  // random alphas stay consistent between the closed form and the kernel
  const Example1Params p{2};
  const SlitDomain dom = example1_domain(p);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ulog(0.1, 11.0 * kPi);
  for (int k = 0; k < 1000; ++k) {
    const double alpha = std::exp(ulog(rng));
    REQUIRE(static_cast<int>(circle_components(dom, alpha).size()) ==
            component_count(p, alpha));
  }
}
