#pragma once

// Walk-on-spheres estimators on slit domains: harmonic measure, Green's
// function, hyperbolic distance from a base point through the Green identity,
// and a fixed-effort splitting variant for exponentially small measures.
//
// Level sets and gates are absorbing interfaces: the step radius is capped by
// the distance to every active interface, so a sphere jump can never skip
// one, and a walker within the absorption shell of an interface is recorded
// as crossing there. Sampling is batched; batch boundaries and substream
// seeds depend only on (seed, samples), so results are bit-identical for any
// worker count.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hypgauge/errors.hpp"
#include "hypgauge/estimate.hpp"
#include "hypgauge/exact.hpp"
#include "hypgauge/geometry.hpp"
#include "hypgauge/rng.hpp"

namespace hypgauge {

struct WosConfig {
  double eps_shell = 1e-6;  // absorption distance, relative to max(1, |x|)
  int max_steps = 100000;
  long samples = 100000;
  std::uint64_t seed = 1;
  std::optional<double> far_radius;  // truncate the domain at |z| < far_radius
};

/// Absorbing interface inside the domain: an arc of an origin-centered circle
/// (closed_circle spans the whole level set) or a straight segment.
struct Interface {
  std::variant<AngularInterval, Segment> curve;

  double distance(Complex z) const {
    if (const auto* arc = std::get_if<AngularInterval>(&curve)) {
      if (arc->closed_circle) return std::abs(std::abs(z) - arc->radius);
      return distance_to(ArcSlit{arc->radius, arc->theta_lo, arc->theta_hi}, z);
    }
    return distance_to(std::get<Segment>(curve), z);
  }

  double param(Complex z) const {
    if (std::holds_alternative<AngularInterval>(curve)) return std::arg(z);
    const auto& s = std::get<Segment>(curve);
    const Complex ab = s.b - s.a;
    const Complex az = z - s.a;
    const double t = (az.real() * ab.real() + az.imag() * ab.imag()) / std::norm(ab);
    return std::clamp(t, 0.0, 1.0);
  }

  static Interface level_circle(double r) {
    return Interface{AngularInterval{r, -kPi, kPi, true}};
  }
  static Interface arc(double r, double lo, double hi) {
    return Interface{AngularInterval{r, lo, hi, false}};
  }
  static Interface segment(Complex a, Complex b) { return Interface{Segment{a, b}}; }
};

using GateSequence = std::vector<Interface>;

struct HitInfo {
  bool absorber = false;
  int index = -1;
  double param = 0.0;
  int side = +1;
  Complex pos{};
  bool lost = false;  // exceeded max_steps
};

struct TargetPart {
  bool absorber = false;
  int index = 0;
  std::optional<std::pair<double, double>> range;  // param range on the piece
  bool angular = false;                            // range compares as angles
  std::optional<int> side;
};

/// A labeled union of boundary pieces, piece sub-arcs, or absorbing
/// interfaces. A part naming a slit without a side matches both sides.
struct BoundaryTarget {
  std::vector<TargetPart> parts;
  std::string label;

  bool matches(const HitInfo& h) const {
    if (h.lost) return false;
    for (const auto& p : parts) {
      if (p.absorber != h.absorber || p.index != h.index) continue;
      if (p.side && h.side != *p.side) continue;
      if (p.range) {
        if (p.angular) {
          // half-open so a boundary partition counts every hit exactly once
          const double span = p.range->second - p.range->first;
          if (angle_from(p.range->first, h.param) >= span) continue;
        } else {
          if (h.param < p.range->first || h.param > p.range->second) continue;
        }
      }
      return true;
    }
    return false;
  }

  static BoundaryTarget piece(int index, std::string label = {}) {
    return {{TargetPart{false, index, std::nullopt, false, std::nullopt}}, std::move(label)};
  }
  static BoundaryTarget piece_arc(int index, double lo, double hi, std::string label = {}) {
    return {{TargetPart{false, index, std::pair{lo, hi}, true, std::nullopt}}, std::move(label)};
  }
  static BoundaryTarget absorber(int index, std::string label = {}) {
    return {{TargetPart{true, index, std::nullopt, false, std::nullopt}}, std::move(label)};
  }
  static BoundaryTarget whole_boundary(const SlitDomain& dom, std::string label = {}) {
    BoundaryTarget t;
    t.label = std::move(label);
    for (std::size_t i = 0; i < dom.pieces.size(); ++i)
      t.parts.push_back(TargetPart{false, static_cast<int>(i), std::nullopt, false, std::nullopt});
    return t;
  }
};

namespace wos_detail {

inline constexpr std::uint64_t kTagPlain = 0x11;
inline constexpr std::uint64_t kTagGreen = 0x22;
inline constexpr std::uint64_t kTagStageBase = 0x1000;
inline constexpr std::uint64_t kTagResampleBase = 0x2000;
inline constexpr std::uint64_t kTagFinal = 0x33;

struct WalkerParams {
  double eps_shell;
  int max_steps;
  Complex origin;
  double step_cap_factor = 1e3;
};

inline HitInfo walk_one(const SlitDomain& dom, std::span<const Interface> absorbers,
                        Complex start, Rng& rng, const WalkerParams& wp) {
  Complex x = start;
  for (int step = 0; step < wp.max_steps; ++step) {
    const double db = distance_to_boundary(x, dom);
    double da = std::numeric_limits<double>::infinity();
    int ai = -1;
    for (std::size_t k = 0; k < absorbers.size(); ++k) {
      const double d = absorbers[k].distance(x);
      if (d < da) {
        da = d;
        ai = static_cast<int>(k);
      }
    }
    const double shell = wp.eps_shell * std::max(1.0, std::abs(x));
    if (db <= shell || da <= shell) {
      HitInfo h;
      h.pos = x;
      if (da < db) {
        h.absorber = true;
        h.index = ai;
        h.param = absorbers[ai].param(x);
      } else {
        const NearestPiece np = classify_nearest(dom, x);
        h.index = np.index;
        h.param = np.param;
        h.side = np.side;
      }
      return h;
    }
    double r = std::min(db, da);
    const double cap = wp.step_cap_factor * std::max(1.0, std::abs(x - wp.origin));
    if (r > cap) r = cap;
    x += std::polar(r, rng.angle());
  }
  HitInfo h;
  h.pos = x;
  h.lost = true;
  return h;
}

inline void require_interior(const SlitDomain& dom, Complex z, const WosConfig& cfg,
                             const char* who) {
  const double shell = cfg.eps_shell * std::max(1.0, std::abs(z));
  if (locate(z, dom, 4.0 * shell).region != Region::Inside)
    throw NonInteriorStart(std::string(who) + ": start point is not strictly interior");
}

inline void check_losses(long lost, long total, const char* who) {
  if (lost * 1000 >= total && lost > 0)
    throw NonConvergence(std::string(who) + ": " + std::to_string(lost) + " of " +
                         std::to_string(total) + " walks exceeded max_steps");
}

inline std::vector<Interface> with_far_radius(std::span<const Interface> absorbers,
                                              const WosConfig& cfg) {
  std::vector<Interface> all(absorbers.begin(), absorbers.end());
  if (cfg.far_radius) all.push_back(Interface::level_circle(*cfg.far_radius));
  return all;
}

}  // namespace wos_detail

// ---------------------------------------------------------------------------
// Plain harmonic measure

/// Probability that Brownian motion from z0 exits through `target`.
/// `absorbers` adjoin absorbing interfaces to the boundary (level-set arcs of
/// a truncated domain); target parts may reference them by index.
inline Estimate harmonic_measure(const SlitDomain& dom, Complex z0, const BoundaryTarget& target,
                                 const WosConfig& cfg, std::span<const Interface> absorbers = {}) {
  wos_detail::require_interior(dom, z0, cfg, "harmonic_measure");
  const auto all = wos_detail::with_far_radius(absorbers, cfg);
  const wos_detail::WalkerParams wp{cfg.eps_shell, cfg.max_steps, z0};
  struct Acc {
    long hits = 0;
    long lost = 0;
  };
  auto batches = run_batches<Acc>(
      cfg.samples, cfg.seed, wos_detail::kTagPlain, [&](long, long count, Rng& rng) {
        Acc acc;
        for (long i = 0; i < count; ++i) {
          const HitInfo h = wos_detail::walk_one(dom, all, z0, rng, wp);
          if (h.lost)
            ++acc.lost;
          else if (target.matches(h))
            ++acc.hits;
        }
        return acc;
      });
  long hits = 0, lost = 0;
  for (const auto& b : batches) {
    hits += b.hits;
    lost += b.lost;
  }
  wos_detail::check_losses(lost, cfg.samples, "harmonic_measure");
  const double n = static_cast<double>(cfg.samples);
  const double p = static_cast<double>(hits) / n;
  const double sd = cfg.samples > 1 ? std::sqrt(p * (1.0 - p) * n / (n - 1.0)) : 0.0;
  return {p, sd / std::sqrt(n), cfg.samples, cfg.seed};
}

// ---------------------------------------------------------------------------
// Green's function

/// g(z0, z) estimated by walks launched from z scoring log-distance of the
/// exit point to z0. With far_radius set the domain is truncated at that
/// circle and the estimate is a lower bound, increasing in far_radius.
inline Estimate green(const SlitDomain& dom, Complex z0, Complex z, const WosConfig& cfg) {
  wos_detail::require_interior(dom, z0, cfg, "green");
  wos_detail::require_interior(dom, z, cfg, "green");
  if (std::abs(z - z0) < 16.0 * cfg.eps_shell * std::max(1.0, std::abs(z0)))
    throw CoincidentPoints("green: z and z0 coincide");
  const auto all = wos_detail::with_far_radius({}, cfg);
  const wos_detail::WalkerParams wp{cfg.eps_shell, cfg.max_steps, z};
  struct Acc {
    double sum = 0, sumsq = 0;
    long lost = 0;
  };
  auto batches = run_batches<Acc>(
      cfg.samples, cfg.seed, wos_detail::kTagGreen, [&](long, long count, Rng& rng) {
        Acc acc;
        for (long i = 0; i < count; ++i) {
          const HitInfo h = wos_detail::walk_one(dom, all, z, rng, wp);
          if (h.lost) {
            ++acc.lost;
            continue;
          }
          const double v = std::log(std::abs(h.pos - z0));
          acc.sum += v;
          acc.sumsq += v * v;
        }
        return acc;
      });
  double sum = 0, sumsq = 0;
  long lost = 0;
  for (const auto& b : batches) {
    sum += b.sum;
    sumsq += b.sumsq;
    lost += b.lost;
  }
  wos_detail::check_losses(lost, cfg.samples, "green");
  const long n = cfg.samples - lost;
  const double mean = sum / static_cast<double>(n);
  return {mean - std::log(std::abs(z - z0)), stderr_from_sums(sum, sumsq, n), cfg.samples,
          cfg.seed};
}

// ---------------------------------------------------------------------------
// Splitting stages (shared by the rare-event estimators)

namespace wos_detail {

struct Stage {
  double p_hat = 0;
  long n = 0;
  std::vector<Complex> crossings;
};

/// Propagates walkers from `starts` (resampled uniformly per walk when more
/// than one) until they cross `gate` or absorb on the boundary.
inline Stage propagate_stage(const SlitDomain& dom, std::span<const Complex> starts,
                             const Interface& gate, const WosConfig& cfg, int stage_index) {
  const std::vector<Interface> absorbers{gate};
  const WalkerParams wp{cfg.eps_shell, cfg.max_steps, starts.front()};
  struct Acc {
    std::vector<Complex> crossings;
    long lost = 0;
  };
  auto batches = run_batches<Acc>(
      cfg.samples, cfg.seed, kTagStageBase + static_cast<std::uint64_t>(stage_index),
      [&](long, long count, Rng& rng) {
        Acc acc;
        for (long i = 0; i < count; ++i) {
          const Complex s =
              starts.size() == 1 ? starts.front() : starts[rng.index(starts.size())];
          const HitInfo h = walk_one(dom, absorbers, s, rng, wp);
          if (h.lost)
            ++acc.lost;
          else if (h.absorber && h.index == 0)
            acc.crossings.push_back(h.pos);
        }
        return acc;
      });
  Stage st;
  st.n = cfg.samples;
  long lost = 0;
  for (auto& b : batches) {
    st.crossings.insert(st.crossings.end(), b.crossings.begin(), b.crossings.end());
    lost += b.lost;
  }
  check_losses(lost, cfg.samples, "harmonic_measure_split");
  st.p_hat = static_cast<double>(st.crossings.size()) / static_cast<double>(cfg.samples);
  if (st.crossings.empty()) throw ZeroSurvivors(stage_index);
  return st;
}

inline void validate_gates(std::span<const Interface> gates,
                           std::span<const Interface> finals) {
  double prev = 0.0;
  bool all_arcs = true;
  auto radius_of = [&](const Interface& g) -> std::optional<double> {
    if (const auto* arc = std::get_if<AngularInterval>(&g.curve)) return arc->radius;
    return std::nullopt;
  };
  for (const auto& g : gates) {
    const auto r = radius_of(g);
    if (!r) {
      all_arcs = false;
      continue;
    }
    if (*r <= prev) throw GateOrderInvalid("gates must sit at strictly increasing radii");
    prev = *r;
  }
  if (all_arcs && !finals.empty()) {
    for (const auto& f : finals) {
      const auto r = radius_of(f);
      if (r && *r <= prev)
        throw GateOrderInvalid("target interface must lie beyond the last gate");
    }
  }
}

}  // namespace wos_detail

/// Fixed-effort splitting: survivors of each stage are resampled to
/// cfg.samples walkers at the next gate; the estimate is the product of the
/// stage passage probabilities, with the delta-method standard error.
inline Estimate harmonic_measure_split(const SlitDomain& dom, Complex z0,
                                       const BoundaryTarget& target, const GateSequence& gates,
                                       const WosConfig& cfg,
                                       std::span<const Interface> absorbers = {}) {
  if (gates.empty()) return harmonic_measure(dom, z0, target, cfg, absorbers);
  wos_detail::require_interior(dom, z0, cfg, "harmonic_measure_split");
  wos_detail::validate_gates(gates, absorbers);

  const auto finals = wos_detail::with_far_radius(absorbers, cfg);
  double product = 1.0;
  double rel_var = 0.0;
  std::vector<Complex> starts{z0};
  for (std::size_t k = 0; k < gates.size(); ++k) {
    const auto stage =
        wos_detail::propagate_stage(dom, starts, gates[k], cfg, static_cast<int>(k));
    product *= stage.p_hat;
    rel_var += (1.0 - stage.p_hat) / (stage.p_hat * static_cast<double>(stage.n));
    starts = std::move(stage.crossings);
  }
  // Final stage: from the last gate to the target against the full boundary.
  const wos_detail::WalkerParams wp{cfg.eps_shell, cfg.max_steps, z0};
  struct Acc {
    long hits = 0;
    long lost = 0;
  };
  auto batches = run_batches<Acc>(
      cfg.samples, cfg.seed, wos_detail::kTagFinal, [&](long, long count, Rng& rng) {
        Acc acc;
        for (long i = 0; i < count; ++i) {
          const Complex s = starts[rng.index(starts.size())];
          const HitInfo h = wos_detail::walk_one(dom, finals, s, rng, wp);
          if (h.lost)
            ++acc.lost;
          else if (target.matches(h))
            ++acc.hits;
        }
        return acc;
      });
  long hits = 0, lost = 0;
  for (const auto& b : batches) {
    hits += b.hits;
    lost += b.lost;
  }
  wos_detail::check_losses(lost, cfg.samples, "harmonic_measure_split");
  if (hits == 0) throw ZeroSurvivors(static_cast<int>(gates.size()));
  const double n = static_cast<double>(cfg.samples);
  const double p = static_cast<double>(hits) / n;
  product *= p;
  rel_var += (1.0 - p) / (p * n);
  return {product, product * std::sqrt(rel_var), cfg.samples, cfg.seed};
}

// ---------------------------------------------------------------------------
// Hyperbolic distance from the base point

/// d_D(z0, set) via the Green identity: one walk ensemble from z0 scores
/// g(z0, w) for every candidate w simultaneously, and the smallest distance
/// corresponds to the largest Green value. With gates, the ensemble is
/// propagated by splitting and the final-chamber scores are rescaled by the
/// stage passage product (the strong Markov factorization of g).
inline Estimate hyperbolic_distance_base(const SlitDomain& dom, Complex z0,
                                         std::span<const Complex> set, const WosConfig& cfg,
                                         std::span<const Interface> gates = {},
                                         Complex* argmax_out = nullptr) {
  if (set.empty()) throw DomainError("hyperbolic_distance_base: empty candidate set");
  wos_detail::require_interior(dom, z0, cfg, "hyperbolic_distance_base");

  double stage_product = 1.0;
  double stage_rel_var = 0.0;
  std::vector<Complex> starts{z0};
  for (std::size_t k = 0; k < gates.size(); ++k) {
    const auto stage =
        wos_detail::propagate_stage(dom, starts, gates[k], cfg, static_cast<int>(k));
    stage_product *= stage.p_hat;
    stage_rel_var += (1.0 - stage.p_hat) / (stage.p_hat * static_cast<double>(stage.n));
    starts = std::move(stage.crossings);
  }

  const auto finals = wos_detail::with_far_radius({}, cfg);
  const wos_detail::WalkerParams wp{cfg.eps_shell, cfg.max_steps, z0};
  const std::size_t m = set.size();
  struct Acc {
    std::vector<double> sum, sumsq;
    long n = 0, lost = 0;
  };
  auto batches = run_batches<Acc>(
      cfg.samples, cfg.seed, wos_detail::kTagFinal + 1, [&](long, long count, Rng& rng) {
        Acc acc;
        acc.sum.assign(m, 0.0);
        acc.sumsq.assign(m, 0.0);
        for (long i = 0; i < count; ++i) {
          const Complex s = starts.size() == 1 ? starts.front() : starts[rng.index(starts.size())];
          const HitInfo h = wos_detail::walk_one(dom, finals, s, rng, wp);
          if (h.lost) {
            ++acc.lost;
            continue;
          }
          ++acc.n;
          for (std::size_t j = 0; j < m; ++j) {
            const double v = std::log(std::abs(h.pos - set[j])) - std::log(std::abs(s - set[j]));
            acc.sum[j] += v;
            acc.sumsq[j] += v * v;
          }
        }
        return acc;
      });
  std::vector<double> sum(m, 0.0), sumsq(m, 0.0);
  long n = 0, lost = 0;
  for (const auto& b : batches) {
    for (std::size_t j = 0; j < m; ++j) {
      sum[j] += b.sum[j];
      sumsq[j] += b.sumsq[j];
    }
    n += b.n;
    lost += b.lost;
  }
  wos_detail::check_losses(lost, cfg.samples, "hyperbolic_distance_base");

  // Largest Green value <-> smallest hyperbolic distance.
  std::size_t best = 0;
  double best_g = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j) {
    const double g = stage_product * (sum[j] / static_cast<double>(n));
    if (g > best_g) {
      best_g = g;
      best = j;
    }
  }
  if (!(best_g > 0.0))
    throw NonConvergence("hyperbolic_distance_base: Green estimate not positive; "
                         "increase samples or add gates");
  if (argmax_out) *argmax_out = set[best];
  const double mean = sum[best] / static_cast<double>(n);
  const double se_mean = stderr_from_sums(sum[best], sumsq[best], n);
  // Var(p * mean) with independent stage noise.
  const double se_g = std::abs(best_g) * std::sqrt(stage_rel_var +
                                                   (mean != 0 ? (se_mean / mean) * (se_mean / mean)
                                                              : 0.0));
  const double d = green_to_hyperbolic(best_g);
  const double se_d = std::abs(green_to_hyperbolic_slope(best_g)) * se_g;
  return {d, se_d, cfg.samples, cfg.seed};
}

}  // namespace hypgauge
