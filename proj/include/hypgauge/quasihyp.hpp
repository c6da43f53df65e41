#pragma once

// Quasi-hyperbolic distance by shortest path on a point graph grown
// adaptively to the local feature size. Node spacing is proportional to the
// clearance d(x, boundary), the graph is grown best-first in the
// quasi-hyperbolic metric from one endpoint (so only the useful part of the
// domain is meshed), and edge weights use a conservative minimum rule, making
// the reported value a true upper bound of the infimum. Refinement rounds
// halve the spacing in a tube around the current optimum.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <set>
#include <unordered_map>
#include <vector>

#include "hypgauge/errors.hpp"
#include "hypgauge/geometry.hpp"

namespace hypgauge {

struct PathResult {
  double delta_upper = std::numeric_limits<double>::infinity();
  std::vector<Complex> polyline;
  int refinement_level = 0;
};

struct QuasihypConfig {
  double spacing_factor = 0.15;    // node spacing = factor * clearance
  double connect_factor = 2.6;     // edge reach in units of spacing
  std::size_t max_nodes = 200000;
  double clearance_floor = 1e-13;  // relative numeric floor on clearance
};

inline std::pair<double, double> hyperbolic_bracket(double delta) {
  if (!(delta > 0)) throw DomainError("hyperbolic_bracket: delta must be positive");
  return {0.5 * delta, 2.0 * delta};
}

/// Closed antiderivative bound (1/2)[arcsinh(40^n (n - x_lo)) -
/// arcsinh(40^n (n - x_hi))] for the crossing of ring n in the log plane.
inline double anisot_bound(int n, double x_lo, double x_hi) {
  if (n < 1) throw DomainError("anisot_bound: n must be positive");
  if (!(x_lo <= x_hi && x_hi <= static_cast<double>(n) + 1e-12))
    throw DomainError("anisot_bound: need x_lo <= x_hi <= n");
  const double s = std::pow(40.0, n);
  return 0.5 * (std::asinh(s * (n - x_lo)) - std::asinh(s * (n - x_hi)));
}

namespace qh_detail {

// Multi-scale spatial hash: nodes bucketed by cells of size 2^level matched
// to their spacing. Queries scan the active levels with a bounded cell range,
// which can miss much finer nodes far from their own scale; that only costs
// a few duplicate nodes, never correctness.
class ScaleIndex {
 public:
  void insert(int id, Complex p, double radius) {
    const int level = level_of(radius);
    active_.insert(level);
    cells_[key(level, p)].push_back(id);
  }

  template <class Visit>
  void for_near(Complex p, double r, Visit&& visit) const {
    for (int level : active_) {
      const double c = std::ldexp(1.0, level);
      int range = static_cast<int>(std::ceil(r / c)) + 1;
      if (range > 3) range = 3;
      const long ix = static_cast<long>(std::floor(p.real() / c));
      const long iy = static_cast<long>(std::floor(p.imag() / c));
      for (long dx = -range; dx <= range; ++dx)
        for (long dy = -range; dy <= range; ++dy) {
          const auto it = cells_.find(pack(level, ix + dx, iy + dy));
          if (it == cells_.end()) continue;
          for (int id : it->second)
            if (!visit(id)) return;
        }
    }
  }

 private:
  static int level_of(double radius) {
    int e;
    std::frexp(std::max(radius, 1e-300), &e);
    return e;
  }
  static std::uint64_t pack(int level, long ix, long iy) {
    std::uint64_t h = static_cast<std::uint64_t>(level + 1080);
    h = h * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(ix);
    h = h * 0xbf58476d1ce4e5b9ULL + static_cast<std::uint64_t>(iy);
    return h;
  }
  std::uint64_t key(int level, Complex p) const {
    const double c = std::ldexp(1.0, level);
    return pack(level, static_cast<long>(std::floor(p.real() / c)),
                static_cast<long>(std::floor(p.imag() / c)));
  }
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
  std::set<int> active_;
};

/// Conservative quasi-hyperbolic length of the straight edge a-b;
/// +inf when the edge cannot be certified inside the domain.
inline double edge_weight(const SlitDomain& dom, Complex a, Complex b, double da, double db) {
  const double len = std::abs(b - a);
  if (!(len > 0)) return std::numeric_limits<double>::infinity();
  if (len > 0.9 * std::max(da, db)) return std::numeric_limits<double>::infinity();
  double dmin = std::min(da, db);
  for (int k = 1; k < 8; ++k) {
    const Complex p = a + (static_cast<double>(k) / 8.0) * (b - a);
    dmin = std::min(dmin, distance_to_boundary(p, dom));
  }
  // Lipschitz slack keeps the weight at or above the true line integral.
  const double denom = dmin - len / 16.0;
  if (!(denom > 0)) return std::numeric_limits<double>::infinity();
  return len / denom;
}

}  // namespace qh_detail

/// Converging upper bound on the quasi-hyperbolic distance between two
/// interior points, with the optimal polyline.
inline PathResult quasihyp_distance(const SlitDomain& dom, Complex z1_in, Complex z2_in,
                                    int levels, const QuasihypConfig& qc = {}) {
  if (levels < 1) throw DomainError("quasihyp_distance: levels must be positive");
  // Canonical endpoint order makes the construction symmetric in (z1, z2).
  Complex z1 = z1_in, z2 = z2_in;
  bool swapped = false;
  if (z2.real() < z1.real() || (z2.real() == z1.real() && z2.imag() < z1.imag())) {
    std::swap(z1, z2);
    swapped = true;
  }
  const double d1 = distance_to_boundary(z1, dom);
  const double d2 = distance_to_boundary(z2, dom);
  if (!(d1 > 0) || !is_interior(z1, dom, d1 * 0.5 + 1e-300))
    throw NonInteriorPoint("quasihyp_distance: first point not interior");
  if (!(d2 > 0) || !is_interior(z2, dom, d2 * 0.5 + 1e-300))
    throw NonInteriorPoint("quasihyp_distance: second point not interior");

  PathResult best;
  std::vector<Complex> tube;  // decimated previous optimum

  auto tube_near = [&](Complex p, double scale) {
    if (tube.empty()) return false;
    for (std::size_t i = 0; i + 1 < tube.size(); ++i)
      if (distance_to(Segment{tube[i], tube[i + 1]}, p) <= 4.0 * scale) return true;
    return false;
  };

  for (int round = 0; round < levels; ++round) {
    std::vector<Complex> pos;
    std::vector<double> clearance, spacing;
    qh_detail::ScaleIndex index;
    const double base_f = qc.spacing_factor;
    const double fine_f = base_f / std::ldexp(1.0, round);

    auto spacing_at = [&](Complex p, double clear) {
      const double f =
          (round > 0 && tube_near(p, base_f * clear)) ? fine_f : base_f;
      return f * clear;
    };

    auto try_add = [&](Complex p) -> int {
      if (pos.size() >= qc.max_nodes) return -1;
      const double clear = distance_to_boundary(p, dom);
      if (!(clear > qc.clearance_floor * std::max(1.0, std::abs(p)))) return -1;
      if (locate(p, dom, clear * 0.5).region != Region::Inside) return -1;
      const double s = spacing_at(p, clear);
      bool blocked = false;
      index.for_near(p, 0.6 * s, [&](int id) {
        if (std::abs(pos[id] - p) < 0.6 * s) {
          blocked = true;
          return false;
        }
        return true;
      });
      if (blocked) return -1;
      const int id = static_cast<int>(pos.size());
      pos.push_back(p);
      clearance.push_back(clear);
      spacing.push_back(s);
      index.insert(id, p, s);
      return id;
    };

    pos.push_back(z1);
    clearance.push_back(d1);
    spacing.push_back(spacing_at(z1, d1));
    index.insert(0, z1, spacing[0]);
    pos.push_back(z2);
    clearance.push_back(d2);
    spacing.push_back(spacing_at(z2, d2));
    index.insert(1, z2, spacing[1]);
    const int src = 0, dst = 1;

    // Seed rings around piece tips and endpoints so the front can thread
    // narrow passages.
    std::vector<std::pair<Complex, double>> tips;
    for (const auto& piece : dom.pieces) {
      if (const auto* r = std::get_if<RadialRay>(&piece)) {
        if (r->r_start > 0) tips.push_back({std::polar(r->r_start, r->theta), r->r_start});
      } else if (const auto* w = std::get_if<SectorWall>(&piece)) {
        if (w->r_start > 0) tips.push_back({std::polar(w->r_start, w->theta), w->r_start});
      } else if (const auto* a = std::get_if<ArcSlit>(&piece)) {
        tips.push_back({std::polar(a->radius, a->angle_lo), a->radius});
        tips.push_back({std::polar(a->radius, a->angle_hi), a->radius});
      } else if (const auto* s = std::get_if<Segment>(&piece)) {
        const double scale = std::max(1.0, std::abs(s->b - s->a));
        tips.push_back({s->a, scale});
        tips.push_back({s->b, scale});
      }
    }
    for (const auto& [tip, scale] : tips)
      for (int k = 2; k <= 30; ++k) {
        const double rr = scale * std::ldexp(1.0, -k);
        if (rr < 1e-9 * scale) break;
        for (int j = 0; j < 8; ++j) try_add(tip + std::polar(rr, j * kPi / 4.0));
      }

    // Best-first growth from z1; neighborhoods are generated when a node is
    // settled. Stops once no tentative label can beat the target's.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(pos.size(), inf);
    std::vector<int> parent(pos.size(), -1);
    std::vector<char> settled(pos.size(), 0);
    auto grow_arrays = [&]() {
      dist.resize(pos.size(), inf);
      parent.resize(pos.size(), -1);
      settled.resize(pos.size(), 0);
    };
    using QItem = std::pair<double, int>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
    dist[src] = 0;
    pq.push({0.0, src});

    while (!pq.empty()) {
      const auto [du, u] = pq.top();
      pq.pop();
      if (settled[u]) continue;
      settled[u] = 1;
      if (dist[dst] < inf && du >= dist[dst]) break;

      const double su = spacing[u];
      const Complex pu = pos[u];
      const double rot = (u % 2) ? kPi / 8.0 : 0.0;
      for (int j = 0; j < 8; ++j) try_add(pu + std::polar(su, rot + j * kPi / 4.0));
      grow_arrays();

      const double reach = qc.connect_factor * std::max(su, spacing[dst]);
      std::vector<int> nbrs;
      index.for_near(pu, reach, [&](int id) {
        if (id != u && std::abs(pos[id] - pu) <= reach) nbrs.push_back(id);
        return true;
      });
      for (int v : nbrs) {
        if (settled[v]) continue;
        const double w = qh_detail::edge_weight(dom, pu, pos[v], clearance[u], clearance[v]);
        if (!(w < inf)) continue;
        if (du + w < dist[v] - 1e-15) {
          dist[v] = du + w;
          parent[v] = u;
          pq.push({dist[v], v});
        }
      }
    }

    if (!(dist[dst] < inf)) {
      if (pos.size() >= qc.max_nodes)
        throw NonConvergence("quasihyp_distance: node budget exhausted before reaching target");
      throw Disconnected("quasihyp_distance: endpoints not connected in the domain");
    }

    std::vector<Complex> path;
    for (int v = dst; v != -1; v = parent[v]) path.push_back(pos[v]);
    std::reverse(path.begin(), path.end());

    if (dist[dst] < best.delta_upper) {
      best.delta_upper = dist[dst];
      best.polyline = path;
      best.refinement_level = round;
    }

    tube.clear();
    const std::size_t stride = std::max<std::size_t>(1, best.polyline.size() / 64);
    for (std::size_t i = 0; i < best.polyline.size(); i += stride) tube.push_back(best.polyline[i]);
    if (tube.back() != best.polyline.back()) tube.push_back(best.polyline.back());
  }

  if (swapped) std::reverse(best.polyline.begin(), best.polyline.end());
  return best;
}

}  // namespace hypgauge
