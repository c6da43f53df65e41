#pragma once

// Constructors for the study domains: the ray-fan plane (whose level circles
// gain components generation by generation), the arc-slit sector with
// shrinking ring gaps, circular sectors, strips, and slit disks, together
// with their closed-form combinatorics and the log-plane comb quadrilateral.

#include <cmath>
#include <string>
#include <vector>

#include "hypgauge/errors.hpp"
#include "hypgauge/geometry.hpp"
#include "hypgauge/quadspec.hpp"

namespace hypgauge {

struct Example1Params {
  int n_max = 3;  // deepest ray generation constructed
};

struct Example2Params {
  int n_max = 4;  // deepest ring constructed
};

/// Generation-l rays start at radius e^{4 l pi}.
inline double example1_generation_radius(int l) { return std::exp(4.0 * kPi * l); }

/// Ring n sits at radius e^n with gap half-width 40^{-n}.
inline double example2_ring_radius(int n) { return std::exp(static_cast<double>(n)); }
inline double example2_gap_half_width(int n) { return std::pow(40.0, -n); }

/// The distinguished level radii alpha_n = e^{n - 40^{-n}} of the arc-slit
/// sector.
inline double example2_alpha(int n) {
  return std::exp(static_cast<double>(n) - std::pow(40.0, -n));
}

/// Plane minus four axis rays from radius 1 and, for each generation
/// l = 1..n_max, 2^{l+1} rays from radius e^{4 l pi} at angles
/// (pi/2^l)(1/2 + k). Base point 0.
inline SlitDomain example1_domain(const Example1Params& p) {
  if (p.n_max < 1) throw DomainError("example1_domain: n_max must be >= 1");
  SlitDomain dom;
  dom.label = "example1:n=" + std::to_string(p.n_max);
  dom.basepoint = {0.0, 0.0};
  for (int l = 0; l <= p.n_max; ++l) {
    const int count = l == 0 ? 4 : (2 << l);  // 2^{l+1}
    const double step = l == 0 ? kPi / 2.0 : kPi / (1 << l);
    const double offset = l == 0 ? 0.0 : 0.5 * step;
    const double r0 = l == 0 ? 1.0 : example1_generation_radius(l);
    RayFan fan{offset, step, count, r0, static_cast<int>(dom.pieces.size())};
    for (int k = 0; k < count; ++k)
      dom.pieces.push_back(RadialRay{offset + step * k, r0});
    dom.fans.push_back(fan);
  }
  dom.finalize();
  return dom;
}

/// Sector {|Arg z| < 1} outside the closed unit disk, minus the ring arc
/// slits {|z| = e^n, 40^{-n} <= |Arg z| < 1} for n = 1..n_max. Base point
/// e^{1/4}.
inline SlitDomain example2_domain(const Example2Params& p) {
  if (p.n_max < 1) throw DomainError("example2_domain: n_max must be >= 1");
  SlitDomain dom;
  dom.label = "example2:n=" + std::to_string(p.n_max);
  dom.basepoint = {std::exp(0.25), 0.0};
  dom.pieces.push_back(Circle{{0.0, 0.0}, 1.0, CircleSide::Exterior});
  dom.pieces.push_back(SectorWall{+1.0, 1.0});
  dom.pieces.push_back(SectorWall{-1.0, 1.0});
  for (int n = 1; n <= p.n_max; ++n) {
    const double r = example2_ring_radius(n);
    const double g = example2_gap_half_width(n);
    dom.pieces.push_back(ArcSlit{r, g, 1.0});
    dom.pieces.push_back(ArcSlit{r, -1.0, -g});
  }
  dom.finalize();
  return dom;
}

/// Closed-form component count of the level circle |z| = alpha in the ray-fan
/// domain: 1 below radius 1, otherwise 2^{n+2} on [e^{4 n pi}, e^{4(n+1) pi}).
/// Valid while generations <= n_max decide the count, i.e. for
/// alpha < e^{4 (n_max + 1) pi}.
inline int component_count(const Example1Params& p, double alpha) {
  if (!(alpha > 0)) throw DomainError("component_count: alpha must be positive");
  if (alpha >= example1_generation_radius(p.n_max + 1))
    throw DomainError("component_count: alpha beyond construction depth");
  if (alpha < 1.0) return 1;
  const double t = std::log(alpha) / (4.0 * kPi);
  int n = static_cast<int>(std::floor(t + 1e-12));
  if (n > p.n_max) n = p.n_max;
  return 4 << n;  // 2^{n+2}
}

/// Circular sector {|Arg z| < half_opening} with apex at 0; base point on the
/// axis at 1.
inline SlitDomain sector_domain(double half_opening) {
  if (!(half_opening > 0 && half_opening <= kPi))
    throw DomainError("sector_domain: half opening must lie in (0, pi]");
  SlitDomain dom;
  dom.label = "sector:half=" + std::to_string(half_opening);
  dom.basepoint = {1.0, 0.0};
  dom.pieces.push_back(SectorWall{+half_opening, 0.0});
  dom.pieces.push_back(SectorWall{-half_opening, 0.0});
  dom.finalize();
  return dom;
}

inline constexpr double kStripTruncation = 1e4;

/// Strip {|Im z| < half_width}, modeled with long horizontal boundary
/// segments; base point 0.
inline SlitDomain strip_domain(double half_width) {
  if (!(half_width > 0)) throw DomainError("strip_domain: half width must be positive");
  SlitDomain dom;
  dom.label = "strip";
  dom.basepoint = {0.0, 0.0};
  const double L = kStripTruncation * half_width;
  dom.pieces.push_back(Segment{{-L, half_width}, {L, half_width}});
  dom.pieces.push_back(Segment{{-L, -half_width}, {L, -half_width}});
  dom.finalize();
  return dom;
}

/// Unit disk minus the radial slit [-1, -r0]; base point 0.
inline SlitDomain slit_disk(double r0) {
  if (!(r0 > 0 && r0 < 1)) throw DomainError("slit_disk: r0 must lie in (0, 1)");
  SlitDomain dom;
  dom.label = "slitdisk:r0=" + std::to_string(r0);
  dom.basepoint = {0.0, 0.0};
  dom.pieces.push_back(Circle{{0.0, 0.0}, 1.0, CircleSide::Interior});
  dom.pieces.push_back(Segment{{-1.0, 0.0}, {-r0, 0.0}});
  dom.finalize();
  return dom;
}

/// Log-plane image of the arc-slit sector: the half strip {x > 0, |y| < 1}
/// minus vertical slits at x = n leaving gaps |y| < 40^{-n}, truncated at
/// x_max. Base point (1/4, 0), the log of the sector base point.
inline SlitDomain example2_log_domain(int n_max, double x_max) {
  if (n_max < 1) throw DomainError("example2_log_domain: n_max must be >= 1");
  if (!(x_max > 0.5)) throw DomainError("example2_log_domain: x_max too small");
  SlitDomain dom;
  dom.label = "example2log:n=" + std::to_string(n_max);
  dom.basepoint = {0.25, 0.0};
  dom.pieces.push_back(Segment{{0.0, -1.0}, {0.0, 1.0}});
  dom.pieces.push_back(Segment{{0.0, 1.0}, {x_max, 1.0}});
  dom.pieces.push_back(Segment{{0.0, -1.0}, {x_max, -1.0}});
  for (int n = 1; n <= n_max && n < x_max; ++n) {
    const double g = example2_gap_half_width(n);
    const double x = static_cast<double>(n);
    dom.pieces.push_back(Segment{{x, g}, {x, 1.0}});
    dom.pieces.push_back(Segment{{x, -1.0}, {x, -g}});
  }
  dom.finalize();
  return dom;
}

// ---------------------------------------------------------------------------
// The log-plane comb

/// Comb quadrilateral with its crosscut ladder. The rectangle is the log
/// image of a quadrant of the ray-fan domain between radii 1 and e^{4(n+1)pi}
/// (angle along x, log radius along y). Teeth of generation j are vertical
/// slits at x = (pi/2^j)(1/2 + k) from y = 4 j pi to the top edge. Measured
/// sides: the whole bottom edge and the top-edge gap adjacent to x = 0.
struct CombQuad {
  QuadSpec quad;
  std::vector<CrossCut> level_cuts;  // gamma_j at y = (4j + 2) pi, j = 1..n
  std::vector<CrossCut> lj_cuts;     // l_j at y = (4j + 1) pi, j = 1..n
  std::vector<double> module_R;      // m(R_j) = 2^{j+1}
  int n = 0;
};

inline CombQuad comb_quadrilateral(int n) {
  if (n < 0 || n > 3) throw DepthTooLarge("comb_quadrilateral: need 0 <= n <= 3");
  CombQuad comb;
  comb.n = n;
  const double W = kPi / 2.0;
  const double H = 4.0 * kPi * (n + 1);
  comb.quad.dom.width = W;
  comb.quad.dom.height = H;
  for (int j = 1; j <= n; ++j) {
    const double y0 = 4.0 * kPi * j;
    const int count = 1 << (j - 1);
    for (int k = 0; k < count; ++k) {
      const double x = (kPi / (1 << j)) * (0.5 + k);
      comb.quad.dom.teeth.push_back(Tooth{x, y0, H});
    }
  }
  const double gap = kPi / std::pow(2.0, n + 1);
  comb.quad.markers = {Complex{0, 0}, Complex{W, 0}, Complex{gap, H}, Complex{0, H}};
  for (int j = 1; j <= n; ++j) {
    const double channel = kPi / std::pow(2.0, j + 1);
    comb.level_cuts.push_back(CrossCut{(4.0 * j + 2.0) * kPi, 0.0, channel});
    comb.lj_cuts.push_back(CrossCut{(4.0 * j + 1.0) * kPi, 0.0, channel});
    comb.module_R.push_back(std::pow(2.0, j + 1));
  }
  return comb;
}

// ---------------------------------------------------------------------------
// CLI domain spec strings

enum class DomainKind { Example1, Example2, Sector, Strip, SlitDisk };

struct DomainSpec {
  DomainKind kind;
  double param = 0.0;  // half opening, strip c, or slit r0
  int n = 0;           // construction depth
  SlitDomain dom;
  std::string text;
};

/// Parses `example1:n=3`, `example2:n=4`, `sector:half=0.785`, `strip:c=0.5`,
/// or `slitdisk:r0=0.5`.
inline DomainSpec parse_domain_spec(const std::string& text) {
  DomainSpec spec;
  spec.text = text;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  const auto eq = tail.find('=');
  const std::string key = eq == std::string::npos ? "" : tail.substr(0, eq);
  const std::string val = eq == std::string::npos ? "" : tail.substr(eq + 1);
  auto need = [&](const char* k) {
    if (key != k) throw DomainError("domain spec '" + text + "': expected " + head + ":" + k + "=...");
  };
  if (head == "example1") {
    need("n");
    spec.kind = DomainKind::Example1;
    spec.n = std::stoi(val);
    spec.dom = example1_domain({spec.n});
  } else if (head == "example2") {
    need("n");
    spec.kind = DomainKind::Example2;
    spec.n = std::stoi(val);
    spec.dom = example2_domain({spec.n});
  } else if (head == "sector") {
    need("half");
    spec.kind = DomainKind::Sector;
    spec.param = std::stod(val);
    spec.dom = sector_domain(spec.param);
  } else if (head == "strip") {
    need("c");
    spec.kind = DomainKind::Strip;
    spec.param = std::stod(val);
    spec.dom = strip_domain(1.0);
  } else if (head == "slitdisk") {
    need("r0");
    spec.kind = DomainKind::SlitDisk;
    spec.param = std::stod(val);
    spec.dom = slit_disk(spec.param);
  } else {
    throw DomainError("unknown domain spec '" + text + "'");
  }
  return spec;
}

}  // namespace hypgauge
