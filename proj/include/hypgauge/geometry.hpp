#pragma once

// Planar slit domains built from radial rays, circular-arc slits, sector
// walls, segments, and circles, with exact distance queries and level-circle
// component extraction.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "hypgauge/errors.hpp"

namespace hypgauge {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t <= -kPi) t += kTwoPi;
  if (t > kPi) t -= kTwoPi;
  return t;
}

/// Angular offset of t counterclockwise from lo, in [0, 2pi).
inline double angle_from(double lo, double t) {
  double d = std::fmod(t - lo, kTwoPi);
  if (d < 0) d += kTwoPi;
  return d;
}

// Distance comparisons switch from absolute to relative tolerance at |z| = 1e3
// so that radii as large as e^{16 pi} keep meaningful slack.
inline double geom_tol(double scale) {
  return std::max(1e-9, 1e-12 * std::abs(scale));
}

// ---------------------------------------------------------------------------
// Pieces

struct RadialRay {
  double theta;    // direction, radians
  double r_start;  // {s e^{i theta} : s >= r_start}
};

struct ArcSlit {
  double radius;
  double angle_lo;
  double angle_hi;  // angle_lo < angle_hi
};

// Same geometry as RadialRay but marks a bounding wall of an angular sector;
// a +-theta pair turns the sector exterior into "outside".
struct SectorWall {
  double theta;
  double r_start;
};

struct Segment {
  Complex a;
  Complex b;
};

enum class CircleSide : std::uint8_t { Interior, Exterior };  // side the domain lies on

struct Circle {
  Complex center;
  double radius;
  CircleSide side;
};

using SlitPiece = std::variant<RadialRay, ArcSlit, SectorWall, Segment, Circle>;

inline double distance_to(const RadialRay& p, Complex z) {
  const Complex w = z * std::polar(1.0, -p.theta);
  if (w.real() >= p.r_start) return std::abs(w.imag());
  return std::abs(w - Complex(p.r_start, 0.0));
}

inline double distance_to(const SectorWall& p, Complex z) {
  return distance_to(RadialRay{p.theta, p.r_start}, z);
}

inline double distance_to(const ArcSlit& p, Complex z) {
  const double span = p.angle_hi - p.angle_lo;
  const double off = angle_from(p.angle_lo, std::arg(z));
  if (off <= span) return std::abs(std::abs(z) - p.radius);
  const double d1 = std::abs(z - std::polar(p.radius, p.angle_lo));
  const double d2 = std::abs(z - std::polar(p.radius, p.angle_hi));
  return std::min(d1, d2);
}

inline double distance_to(const Segment& p, Complex z) {
  const Complex ab = p.b - p.a;
  const Complex az = z - p.a;
  const double len2 = std::norm(ab);
  double t = (az.real() * ab.real() + az.imag() * ab.imag()) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(z - (p.a + t * ab));
}

inline double distance_to(const Circle& p, Complex z) {
  return std::abs(std::abs(z - p.center) - p.radius);
}

inline double distance_to(const SlitPiece& piece, Complex z) {
  return std::visit([&](const auto& p) { return distance_to(p, z); }, piece);
}

/// Natural parameter of the closest point of a piece: radial position for
/// rays/walls, angle for arcs and circles, chord fraction for segments.
inline double closest_param(const SlitPiece& piece, Complex z) {
  struct V {
    Complex z;
    double operator()(const RadialRay& p) const {
      const Complex w = z * std::polar(1.0, -p.theta);
      return std::max(w.real(), p.r_start);
    }
    double operator()(const SectorWall& p) const {
      return (*this)(RadialRay{p.theta, p.r_start});
    }
    double operator()(const ArcSlit& p) const {
      const double span = p.angle_hi - p.angle_lo;
      const double off = angle_from(p.angle_lo, std::arg(z));
      if (off <= span) return p.angle_lo + off;
      return off - span < kTwoPi - span - off + span ? p.angle_hi : p.angle_lo;
    }
    double operator()(const Segment& p) const {
      const Complex ab = p.b - p.a;
      const Complex az = z - p.a;
      double t = (az.real() * ab.real() + az.imag() * ab.imag()) / std::norm(ab);
      return std::clamp(t, 0.0, 1.0);
    }
    double operator()(const Circle& p) const { return std::arg(z - p.center); }
  };
  return std::visit(V{z}, piece);
}

/// Side of the piece a point lies on: +1/-1 across the carrying curve.
inline int side_of(const SlitPiece& piece, Complex z) {
  struct V {
    Complex z;
    int operator()(const RadialRay& p) const {
      const double s = (z * std::polar(1.0, -p.theta)).imag();
      return s >= 0 ? +1 : -1;
    }
    int operator()(const SectorWall& p) const {
      return (*this)(RadialRay{p.theta, p.r_start});
    }
    int operator()(const ArcSlit& p) const {
      return std::abs(z) >= p.radius ? +1 : -1;
    }
    int operator()(const Segment& p) const {
      const Complex ab = p.b - p.a;
      const Complex az = z - p.a;
      const double cross = ab.real() * az.imag() - ab.imag() * az.real();
      return cross >= 0 ? +1 : -1;
    }
    int operator()(const Circle& p) const {
      return std::abs(z - p.center) >= p.radius ? +1 : -1;
    }
  };
  return std::visit(V{z}, piece);
}

// ---------------------------------------------------------------------------
// Domains

/// Fast path for a regularly spaced family of rays with one common start
/// radius; mirrors pieces [piece_begin, piece_begin + count).
struct RayFan {
  double offset;
  double step;
  int count;
  double r_start;
  int piece_begin;
};

struct AngularInterval {
  double radius;
  double theta_lo;
  double theta_hi;
  bool closed_circle = false;
};

struct SlitDomain {
  std::vector<SlitPiece> pieces;
  Complex basepoint{};
  std::string label;

  // Enclosing constraints, derived from the pieces by finalize().
  std::optional<double> sector_half_angle;  // walls at +-theta about the real axis
  std::optional<double> inner_radius;       // exterior circle centered at 0
  std::optional<double> outer_radius;       // interior circle centered at 0

  std::vector<RayFan> fans;      // acceleration only; values match the pieces
  std::vector<int> loose;        // piece indices not covered by a fan

  /// Derives enclosing constraints and the loose-piece list. Constructors in
  /// paper_domains fill `fans` themselves; generic loads leave them empty.
  void finalize() {
    sector_half_angle.reset();
    inner_radius.reset();
    outer_radius.reset();
    std::optional<double> wall_pos, wall_neg;
    for (const auto& piece : pieces) {
      if (const auto* w = std::get_if<SectorWall>(&piece)) {
        if (w->theta > 0)
          wall_pos = w->theta;
        else
          wall_neg = -w->theta;
      } else if (const auto* c = std::get_if<Circle>(&piece)) {
        if (std::abs(c->center) < 1e-14) {
          if (c->side == CircleSide::Exterior)
            inner_radius = c->radius;
          else
            outer_radius = c->radius;
        }
      }
    }
    if (wall_pos && wall_neg && std::abs(*wall_pos - *wall_neg) < 1e-12)
      sector_half_angle = *wall_pos;
    std::vector<char> covered(pieces.size(), 0);
    for (const auto& fan : fans)
      for (int k = 0; k < fan.count; ++k) covered[fan.piece_begin + k] = 1;
    loose.clear();
    for (std::size_t i = 0; i < pieces.size(); ++i)
      if (!covered[i]) loose.push_back(static_cast<int>(i));
  }
};

struct NearestPiece {
  int index = -1;
  double distance = std::numeric_limits<double>::infinity();
  double param = 0.0;
  int side = +1;
};

inline void fan_nearest(const RayFan& fan, Complex z, NearestPiece& best) {
  const double r = std::abs(z);
  const double theta = std::arg(z);
  // The two nearest family angles bracket theta.
  const double raw = (theta - fan.offset) / fan.step;
  const long k0 = static_cast<long>(std::floor(raw));
  for (long k = k0; k <= k0 + 1; ++k) {
    long kk = k % fan.count;
    if (kk < 0) kk += fan.count;
    const double ang = fan.offset + fan.step * static_cast<double>(k);
    const Complex w = z * std::polar(1.0, -ang);
    double d;
    if (w.real() >= fan.r_start)
      d = std::abs(w.imag());
    else
      d = std::abs(w - Complex(fan.r_start, 0.0));
    if (d < best.distance) {
      best.distance = d;
      best.index = fan.piece_begin + static_cast<int>(kk);
      best.param = std::max(w.real(), fan.r_start);
      best.side = w.imag() >= 0 ? +1 : -1;
    }
  }
  (void)r;
}

/// Nearest boundary piece with distance, parameter, and side.
inline NearestPiece classify_nearest(const SlitDomain& dom, Complex z) {
  NearestPiece best;
  for (const auto& fan : dom.fans) fan_nearest(fan, z, best);
  const bool fan_hit = best.index >= 0;
  const double fan_dist = best.distance;
  if (dom.fans.empty()) {
    for (std::size_t i = 0; i < dom.pieces.size(); ++i) {
      const double d = distance_to(dom.pieces[i], z);
      if (d < best.distance) {
        best.distance = d;
        best.index = static_cast<int>(i);
      }
    }
  } else {
    for (int i : dom.loose) {
      const double d = distance_to(dom.pieces[i], z);
      if (d < best.distance) {
        best.distance = d;
        best.index = i;
      }
    }
  }
  const bool from_fan = fan_hit && best.distance == fan_dist;
  if (best.index >= 0 && !from_fan) {
    best.param = closest_param(dom.pieces[best.index], z);
    best.side = side_of(dom.pieces[best.index], z);
  }
  return best;
}

/// Exact Euclidean distance from z to the union of boundary pieces.
inline double distance_to_boundary(Complex z, const SlitDomain& dom) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& fan : dom.fans) {
    NearestPiece np;
    fan_nearest(fan, z, np);
    best = std::min(best, np.distance);
  }
  if (dom.fans.empty()) {
    for (const auto& piece : dom.pieces) best = std::min(best, distance_to(piece, z));
  } else {
    for (int i : dom.loose) best = std::min(best, distance_to(dom.pieces[i], z));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Point location

enum class Region : std::uint8_t { Inside, OnBoundary, Outside };

struct LocateResult {
  Region region;
  int piece = -1;
  double param = 0.0;
};

/// Classifies z against the domain. Outside is only reported when an
/// enclosing constraint (sector walls, interior/exterior circle) is violated;
/// slit-only domains have no exterior.
inline LocateResult locate(Complex z, const SlitDomain& dom, double tol) {
  if (!(tol > 0)) throw DomainError("locate: tol must be positive");
  const NearestPiece np = classify_nearest(dom, z);
  if (np.distance <= tol) return {Region::OnBoundary, np.index, np.param};
  const double r = std::abs(z);
  if (dom.inner_radius && r < *dom.inner_radius) return {Region::Outside, -1, 0.0};
  if (dom.outer_radius && r > *dom.outer_radius) return {Region::Outside, -1, 0.0};
  if (dom.sector_half_angle) {
    double wall_start = 0.0;
    for (const auto& piece : dom.pieces)
      if (const auto* w = std::get_if<SectorWall>(&piece)) wall_start = w->r_start;
    if (std::abs(wrap_angle(std::arg(z))) > *dom.sector_half_angle && r > wall_start)
      return {Region::Outside, -1, 0.0};
  }
  return {Region::Inside, -1, 0.0};
}

inline bool is_interior(Complex z, const SlitDomain& dom, double tol) {
  return locate(z, dom, tol).region == Region::Inside;
}

// ---------------------------------------------------------------------------
// Level-circle components

namespace detail {

inline void push_cut(std::vector<double>& cuts, double angle) {
  cuts.push_back(wrap_angle(angle));
}

}  // namespace detail

/// Connected components of {|z| = alpha} within the domain, as angular
/// intervals in counterclockwise order. Intervals are open at slit contact;
/// a ray tip exactly at radius alpha counts as cutting (the limit from
/// larger alpha).
inline std::vector<AngularInterval> circle_components(const SlitDomain& dom, double alpha) {
  if (!(alpha > 0)) throw DomainError("circle_components: alpha must be positive");
  const double tol = geom_tol(alpha);
  if (dom.inner_radius && alpha <= *dom.inner_radius + geom_tol(*dom.inner_radius))
    throw EmptyIntersection("circle |z| = alpha lies inside the excluded disk");
  if (dom.outer_radius && alpha >= *dom.outer_radius - geom_tol(*dom.outer_radius))
    throw EmptyIntersection("circle |z| = alpha lies outside the bounding circle");

  std::vector<double> cuts;
  std::vector<std::pair<double, double>> blocks;  // [lo, hi] in absolute angles
  for (const auto& piece : dom.pieces) {
    if (const auto* ray = std::get_if<RadialRay>(&piece)) {
      if (ray->r_start <= alpha + tol) detail::push_cut(cuts, ray->theta);
    } else if (const auto* wall = std::get_if<SectorWall>(&piece)) {
      if (wall->r_start <= alpha + tol) detail::push_cut(cuts, wall->theta);
    } else if (const auto* arc = std::get_if<ArcSlit>(&piece)) {
      if (std::abs(arc->radius - alpha) <= tol) blocks.push_back({arc->angle_lo, arc->angle_hi});
    } else if (const auto* seg = std::get_if<Segment>(&piece)) {
      // |a + t (b - a)| = alpha for t in [0, 1]
      const Complex ab = seg->b - seg->a;
      const double A = std::norm(ab);
      const double B = 2.0 * (seg->a.real() * ab.real() + seg->a.imag() * ab.imag());
      const double C = std::norm(seg->a) - alpha * alpha;
      const double disc = B * B - 4 * A * C;
      if (disc >= 0) {
        const double sq = std::sqrt(disc);
        for (double t : {(-B - sq) / (2 * A), (-B + sq) / (2 * A)}) {
          if (t >= -1e-12 && t <= 1 + 1e-12)
            detail::push_cut(cuts, std::arg(seg->a + t * ab));
        }
      }
    } else if (const auto* circ = std::get_if<Circle>(&piece)) {
      const double d = std::abs(circ->center);
      if (d < 1e-14) continue;  // concentric handled by enclosing constraints
      // intersection of circles |z| = alpha and |z - c| = R
      const double R = circ->radius;
      const double cosphi = (d * d + alpha * alpha - R * R) / (2 * d * alpha);
      if (std::abs(cosphi) <= 1) {
        const double phi = std::acos(cosphi);
        const double base = std::arg(circ->center);
        detail::push_cut(cuts, base + phi);
        if (phi > 0) detail::push_cut(cuts, base - phi);
      }
    }
  }

  const bool sector = dom.sector_half_angle.has_value();
  if (sector) {
    // restrict to the allowed span; the wall cuts at +-theta close it
    const double tw = *dom.sector_half_angle;
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(),
                              [&](double c) { return std::abs(c) > tw + 1e-12; }),
               cuts.end());
  }

  std::vector<AngularInterval> out;
  if (cuts.empty() && blocks.empty() && !sector) {
    const Complex probe = std::polar(alpha, 0.123456);
    if (locate(probe, dom, tol).region != Region::Inside)
      throw EmptyIntersection("circle |z| = alpha does not meet the domain");
    out.push_back({alpha, -kPi, kPi, true});
    return out;
  }

  // Event angles splitting the circle: cuts plus block endpoints plus walls.
  std::vector<std::pair<double, double>> open_spans;
  if (sector) {
    open_spans.push_back({-*dom.sector_half_angle, *dom.sector_half_angle});
  } else if (!blocks.empty()) {
    // start the sweep at a blocked angle so spans do not wrap
    open_spans.push_back({wrap_angle(blocks.front().first),
                          wrap_angle(blocks.front().first) + kTwoPi});
  } else {
    const double a0 = cuts.front();
    open_spans.push_back({a0, a0 + kTwoPi});
  }

  // Subtract blocked arcs.
  for (const auto& b : blocks) {
    std::vector<std::pair<double, double>> next;
    for (const auto& span : open_spans) {
      // map block into the span frame
      double lo = span.first + angle_from(span.first, b.first);
      double hi = lo + (b.second - b.first);
      if (lo >= span.second - 1e-15) {
        next.push_back(span);
        continue;
      }
      if (lo > span.first) next.push_back({span.first, std::min(lo, span.second)});
      if (hi < span.second) next.push_back({std::max(hi, span.first), span.second});
    }
    open_spans = std::move(next);
  }

  // Split the remaining spans at cut angles.
  for (const auto& span : open_spans) {
    std::vector<double> local{span.first};
    for (double c : cuts) {
      const double pos = span.first + angle_from(span.first, c);
      if (pos > span.first + 1e-13 && pos < span.second - 1e-13) local.push_back(pos);
    }
    local.push_back(span.second);
    std::sort(local.begin(), local.end());
    for (std::size_t i = 0; i + 1 < local.size(); ++i) {
      const double lo = local[i], hi = local[i + 1];
      if (hi - lo < 1e-12) continue;
      const Complex mid = std::polar(alpha, 0.5 * (lo + hi));
      if (locate(mid, dom, tol).region != Region::Inside) continue;
      out.push_back({alpha, lo, hi, false});
    }
  }
  if (out.empty()) throw EmptyIntersection("circle |z| = alpha does not meet the domain");
  std::sort(out.begin(), out.end(), [](const AngularInterval& a, const AngularInterval& b) {
    return wrap_angle(a.theta_lo) < wrap_angle(b.theta_lo);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Plain-text serialization
//
//   basepoint x y
//   ray theta r_start
//   arc r theta_lo theta_hi
//   wall theta r_start
//   segment x1 y1 x2 y2
//   circle cx cy r {int|ext}

inline void save_domain(std::ostream& os, const SlitDomain& dom) {
  os.precision(17);
  os << "basepoint " << dom.basepoint.real() << ' ' << dom.basepoint.imag() << '\n';
  for (const auto& piece : dom.pieces) {
    if (const auto* r = std::get_if<RadialRay>(&piece))
      os << "ray " << r->theta << ' ' << r->r_start << '\n';
    else if (const auto* a = std::get_if<ArcSlit>(&piece))
      os << "arc " << a->radius << ' ' << a->angle_lo << ' ' << a->angle_hi << '\n';
    else if (const auto* w = std::get_if<SectorWall>(&piece))
      os << "wall " << w->theta << ' ' << w->r_start << '\n';
    else if (const auto* s = std::get_if<Segment>(&piece))
      os << "segment " << s->a.real() << ' ' << s->a.imag() << ' ' << s->b.real() << ' '
         << s->b.imag() << '\n';
    else if (const auto* c = std::get_if<Circle>(&piece))
      os << "circle " << c->center.real() << ' ' << c->center.imag() << ' ' << c->radius << ' '
         << (c->side == CircleSide::Interior ? "int" : "ext") << '\n';
  }
}

inline SlitDomain load_domain(std::istream& is) {
  SlitDomain dom;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string kind;
    ss >> kind;
    if (kind == "basepoint") {
      double x, y;
      ss >> x >> y;
      dom.basepoint = {x, y};
    } else if (kind == "ray") {
      RadialRay r{};
      ss >> r.theta >> r.r_start;
      dom.pieces.push_back(r);
    } else if (kind == "arc") {
      ArcSlit a{};
      ss >> a.radius >> a.angle_lo >> a.angle_hi;
      dom.pieces.push_back(a);
    } else if (kind == "wall") {
      SectorWall w{};
      ss >> w.theta >> w.r_start;
      dom.pieces.push_back(w);
    } else if (kind == "segment") {
      double x1, y1, x2, y2;
      ss >> x1 >> y1 >> x2 >> y2;
      dom.pieces.push_back(Segment{{x1, y1}, {x2, y2}});
    } else if (kind == "circle") {
      double cx, cy, r;
      std::string side;
      ss >> cx >> cy >> r >> side;
      dom.pieces.push_back(Circle{{cx, cy}, r,
                                   side == "int" ? CircleSide::Interior : CircleSide::Exterior});
    } else {
      throw ConfigParse("unknown piece kind '" + kind + "'", lineno);
    }
    if (ss.fail()) throw ConfigParse("malformed piece line", lineno);
  }
  dom.finalize();
  return dom;
}

}  // namespace hypgauge
