#pragma once

// Experiment driver: ratio scans over level radii, the inequality audits, the
// Hardy-integral diagnostic, and the key=value config runner.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hypgauge/domains.hpp"
#include "hypgauge/errors.hpp"
#include "hypgauge/exact.hpp"
#include "hypgauge/quasihyp.hpp"
#include "hypgauge/records.hpp"
#include "hypgauge/wos.hpp"

namespace hypgauge {

inline constexpr const char* kVersion = "hypgauge 0.1.0";

// ---------------------------------------------------------------------------
// Natural gate ladders

/// Level-circle gates for the ray-fan domain: spacing shrinks with the local
/// corridor exponent 2^{l+1} so stage passage probabilities stay moderate.
inline GateSequence example1_gates(double alpha) {
  GateSequence gates;
  const double ln_target = std::log(alpha);
  double lnr = 1.25;
  while (lnr < ln_target - 0.25) {
    gates.push_back(Interface::level_circle(std::exp(lnr)));
    const int l = std::max(0, static_cast<int>(std::floor(lnr / (4.0 * kPi))));
    const double gamma = std::ldexp(1.0, l + 1);  // 2^{l+1}
    lnr += 2.5 / gamma;
  }
  return gates;
}

/// Cross-section arc gates for the arc-slit sector: cruise arcs between
/// rings plus geometric approach/exit arcs that thread each ring gap.
inline GateSequence example2_gates(double alpha, int n_max, Complex basepoint) {
  std::vector<double> radii;
  std::vector<std::optional<double>> gap_span;  // engaged only at ring radii
  auto push = [&](double r, std::optional<double> span = std::nullopt) {
    radii.push_back(r);
    gap_span.push_back(span);
  };
  push(std::exp(0.5));
  for (int n = 1; n <= n_max; ++n) {
    const double ring = example2_ring_radius(n);
    const double w = example2_gap_half_width(n);
    push(std::exp(n - 0.5));
    for (double c : {27.0, 9.0, 3.0}) push(ring * (1.0 - c * w));
    push(ring, w);
    for (double c : {3.0, 9.0, 27.0}) push(ring * (1.0 + c * w));
  }
  GateSequence gates;
  double prev = 1.08 * std::abs(basepoint);
  prev = std::max(prev, 1.02);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    if (r <= prev * 1.0001) continue;
    if (r >= alpha * (1.0 - 1e-9)) break;
    if (gap_span[i])
      gates.push_back(Interface::arc(r, -*gap_span[i], *gap_span[i]));
    else
      gates.push_back(Interface::arc(r, -1.0, 1.0));
    prev = r;
  }
  return gates;
}

inline GateSequence sector_gates(double alpha, double half_opening, Complex basepoint) {
  GateSequence gates;
  const double gamma = kPi / (2.0 * half_opening);
  const double step = 2.5 / gamma;
  double lnr = std::log(std::abs(basepoint)) + step;
  while (lnr < std::log(alpha) - 0.2 * step) {
    gates.push_back(Interface::arc(std::exp(lnr), -half_opening, half_opening));
    lnr += step;
  }
  return gates;
}

// ---------------------------------------------------------------------------
// Ratio scan

namespace exp_detail {

/// Candidate points on a level-set arc, concentrated toward the arc center.
inline void arc_candidates(double radius, double lo, double hi, int count,
                           std::vector<Complex>& out) {
  const double c = 0.5 * (lo + hi);
  const double s = 0.49 * (hi - lo);
  out.push_back(std::polar(radius, c));
  const int half = std::max(1, count / 2);
  for (int k = 1; k <= half; ++k) {
    const double off = s * std::pow(static_cast<double>(k) / half, 1.7);
    out.push_back(std::polar(radius, c + off));
    out.push_back(std::polar(radius, c - off));
  }
}

inline std::optional<std::pair<double, double>> bracket_for(const SlitDomain& dom, Complex z0,
                                                            Complex target_point) {
  try {
    const PathResult pr = quasihyp_distance(dom, z0, target_point, 4);
    return hyperbolic_bracket(pr.delta_upper);
  } catch (const std::exception&) {
    return std::nullopt;  // graph infeasible; bracket marked absent
  }
}

inline Estimate omega_with_trigger(const SlitDomain& dom, Complex z0,
                                   const BoundaryTarget& target, const GateSequence& gates,
                                   const WosConfig& cfg, std::span<const Interface> absorbers) {
  const Estimate plain = harmonic_measure(dom, z0, target, cfg, absorbers);
  const double hits = plain.value * static_cast<double>(plain.samples);
  if (hits >= 100.0 || gates.empty()) return plain;
  return harmonic_measure_split(dom, z0, target, gates, cfg, absorbers);
}

}  // namespace exp_detail

/// One scan record: harmonic measure of the level set F_alpha, the
/// Green-identity distance estimate, the quasi-hyperbolic bracket when the
/// graph build succeeds, and the component count.
inline RatioRecord scan_one(const DomainSpec& spec, double alpha, const WosConfig& cfg) {
  RatioRecord rec;
  rec.alpha = alpha;
  const SlitDomain& dom = spec.dom;
  const Complex z0 = dom.basepoint;

  switch (spec.kind) {
    case DomainKind::Example1:
    case DomainKind::Example2:
    case DomainKind::Sector: {
      const auto comps = circle_components(dom, alpha);
      rec.n_components = static_cast<int>(comps.size());

      std::vector<Interface> absorbers;
      if (dom.sector_half_angle) {
        absorbers.push_back(
            Interface::arc(alpha, -*dom.sector_half_angle, *dom.sector_half_angle));
      } else {
        absorbers.push_back(Interface::level_circle(alpha));
      }
      const BoundaryTarget target = BoundaryTarget::absorber(0, "F_alpha");

      GateSequence gates;
      if (spec.kind == DomainKind::Example1)
        gates = example1_gates(alpha);
      else if (spec.kind == DomainKind::Example2)
        gates = example2_gates(alpha, spec.n, z0);
      else
        gates = sector_gates(alpha, spec.param, z0);

      rec.omega = exp_detail::omega_with_trigger(dom, z0, target, gates, cfg, absorbers);

      std::vector<Complex> candidates;
      const int per_comp = std::max(16, 64 / static_cast<int>(comps.size()));
      for (const auto& arc : comps) {
        const double lo = arc.closed_circle ? -kPi : arc.theta_lo;
        const double hi = arc.closed_circle ? kPi : arc.theta_hi;
        exp_detail::arc_candidates(alpha, lo, hi, per_comp, candidates);
      }
      WosConfig dcfg = cfg;
      dcfg.far_radius = 1e3 * alpha;
      Complex argmax;
      rec.d_green = hyperbolic_distance_base(dom, z0, candidates, dcfg, gates, &argmax);
      // Truncation convergence check: doubling the far radius must move the
      // estimate by less than its standard error (plus the second run's).
      WosConfig dcfg2 = dcfg;
      dcfg2.far_radius = 2e3 * alpha;
      dcfg2.samples = std::max<long>(cfg.samples / 4, 2000);
      const Estimate d2 = hyperbolic_distance_base(dom, z0, candidates, dcfg2, gates);
      if (std::abs(d2.value - rec.d_green.value) >
          3.0 * (rec.d_green.stderr_ + d2.stderr_) + 1e-9)
        throw NonConvergence("scan_one: far-radius truncation not converged");
      rec.delta_bracket = exp_detail::bracket_for(dom, z0, argmax);
      break;
    }
    case DomainKind::Strip: {
      // alpha is the height c of the base point; the target is the real
      // axis, a geodesic of the strip.
      if (!(alpha > 0 && alpha < 1)) throw DomainError("strip scan: alpha = c must be in (0,1)");
      const Complex zc{0.0, alpha};
      const double L = kStripTruncation * 0.98;
      std::vector<Interface> absorbers{Interface::segment({-L, 0.0}, {L, 0.0})};
      rec.omega = harmonic_measure(dom, zc, BoundaryTarget::absorber(0, "R"), cfg, absorbers);
      std::vector<Complex> candidates;
      for (int k = -24; k <= 24; ++k) {
        const double x = 3.0 * std::pow(std::abs(k) / 24.0, 1.7) * (k < 0 ? -1 : 1);
        candidates.push_back({x, 0.0});
      }
      Complex argmax;
      rec.d_green = hyperbolic_distance_base(dom, zc, candidates, cfg, {}, &argmax);
      rec.delta_bracket = exp_detail::bracket_for(dom, zc, argmax);
      rec.n_components = 1;
      rec.geodesic = true;
      break;
    }
    case DomainKind::SlitDisk: {
      // alpha is the slit tip radius r0; omega is measured on the slit disk,
      // d in the plain disk, where the slit is an interior obstacle.
      if (!(alpha > 0 && alpha < 1))
        throw DomainError("slitdisk scan: alpha = r0 must be in (0,1)");
      const SlitDomain cut = slit_disk(alpha);
      rec.omega = harmonic_measure(cut, {0.0, 0.0}, BoundaryTarget::piece(1, "slit"), cfg);
      SlitDomain disk;
      disk.label = "disk";
      disk.pieces.push_back(Circle{{0, 0}, 1.0, CircleSide::Interior});
      disk.finalize();
      std::vector<Complex> candidates;
      for (int k = 0; k <= 32; ++k) {
        const double x = alpha + (1.0 - alpha) * 0.98 * std::pow(k / 32.0, 2.0);
        candidates.push_back({-x, 0.0});
      }
      Complex argmax;
      rec.d_green = hyperbolic_distance_base(disk, {0.0, 0.0}, candidates, cfg, {}, &argmax);
      rec.delta_bracket = exp_detail::bracket_for(disk, {0.0, 0.0}, argmax);
      rec.n_components = 1;
      break;
    }
  }

  rec.ratio = rec.omega.value / std::exp(-rec.d_green.value);
  return rec;
}

/// Scans the level family of a domain spec. Per-alpha failures flush the
/// partial results collected so far.
inline std::vector<RatioRecord> ratio_scan(const std::string& domain_spec,
                                           const std::vector<double>& alphas,
                                           const WosConfig& cfg,
                                           std::vector<RatioRecord>* partial = nullptr) {
  const DomainSpec spec = parse_domain_spec(domain_spec);
  std::vector<RatioRecord> records;
  for (double a : alphas) {
    WosConfig c = cfg;
    c.seed = substream(cfg.seed, 0xA1FA, static_cast<std::uint64_t>(records.size()));
    records.push_back(scan_one(spec, a, c));
    if (partial) *partial = records;
  }
  std::sort(records.begin(), records.end(),
            [](const RatioRecord& a, const RatioRecord& b) { return a.alpha < b.alpha; });
  return records;
}

/// Default level grids: geometric midpoints of consecutive generation radii
/// for the ray fan, the alpha_n radii for the arc-slit sector, decades for
/// the sector, and parameter sweeps for strip and slit disk.
inline std::vector<double> auto_alphas(const DomainSpec& spec) {
  switch (spec.kind) {
    case DomainKind::Example1: {
      std::vector<double> a;
      for (int n = 0; n <= std::min(2, spec.n - 1); ++n)
        a.push_back(std::exp((4.0 * n + 2.0) * kPi));
      return a;
    }
    case DomainKind::Example2: {
      std::vector<double> a;
      for (int n = 1; n <= std::min(3, spec.n); ++n) a.push_back(example2_alpha(n));
      return a;
    }
    case DomainKind::Sector:
      return {10.0, 1e2, 1e3, 1e4, 1e5};
    case DomainKind::Strip:
      return {0.25, 0.5, 0.75};
    case DomainKind::SlitDisk:
      return {0.2, 0.35, 0.5, 0.65, 0.8};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Audits

struct AuditRow {
  double alpha;
  bool floor_pass;                  // omega >= (2/pi) e^{-d} with 3 sigma slack
  std::optional<bool> geodesic_pass;  // two-sided geodesic bounds, when flagged
};

struct AuditReport {
  std::vector<AuditRow> rows;
  int failures = 0;
  bool pass() const { return failures == 0; }
};

/// Per-record audit of the projection-theorem floor, plus the two-sided
/// geodesic bounds for records flagged as geodesic targets.
inline AuditReport audit_inequalities(const std::vector<RatioRecord>& records) {
  if (records.empty()) throw DomainError("audit_inequalities: no records");
  AuditReport rep;
  for (const auto& r : records) {
    AuditRow row{r.alpha, true, std::nullopt};
    const double floor =
        (2.0 / kPi) * std::exp(-(r.d_green.value - 3.0 * r.d_green.stderr_));
    row.floor_pass = r.omega.value + 3.0 * r.omega.stderr_ >= floor;
    if (r.geodesic) {
      const double lo = std::exp(-(r.d_green.value + 3.0 * r.d_green.stderr_));
      const double hi =
          (4.0 / kPi) * std::exp(-(r.d_green.value - 3.0 * r.d_green.stderr_));
      row.geodesic_pass = r.omega.value + 3.0 * r.omega.stderr_ >= lo &&
                          r.omega.value - 3.0 * r.omega.stderr_ <= hi;
    }
    if (!row.floor_pass || (row.geodesic_pass && !*row.geodesic_pass)) ++rep.failures;
    rep.rows.push_back(row);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Hardy integral diagnostic

struct HardyResult {
  double truncated_integral;
  std::string tail_trend;  // growing | flat | decaying
};

/// Trapezoid rule for int alpha^{p-1} omega(alpha) d alpha over the record
/// grid, with a tail classification comparing the last decade of alpha
/// against the one before it.
inline HardyResult hardy_integral(double p, const std::vector<RatioRecord>& records) {
  if (!(p > 0)) throw DomainError("hardy_integral: p must be positive");
  if (records.size() < 4) throw InsufficientGrid("hardy_integral: need at least 4 records");
  for (std::size_t i = 0; i + 1 < records.size(); ++i)
    if (records[i].alpha >= records[i + 1].alpha)
      throw InsufficientGrid("hardy_integral: records must be sorted by alpha");
  if (records.front().alpha < 1.0)
    throw InsufficientGrid("hardy_integral: alphas must be >= 1");

  auto f = [&](const RatioRecord& r) { return std::pow(r.alpha, p - 1.0) * r.omega.value; };
  double total = 0, last_decade = 0, prev_decade = 0;
  const double amax = records.back().alpha;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    const double piece =
        0.5 * (f(records[i]) + f(records[i + 1])) * (records[i + 1].alpha - records[i].alpha);
    total += piece;
    const double mid = 0.5 * (records[i].alpha + records[i + 1].alpha);
    if (mid >= amax / 10.0)
      last_decade += piece;
    else if (mid >= amax / 100.0)
      prev_decade += piece;
  }
  HardyResult out;
  out.truncated_integral = total;
  if (prev_decade <= 0)
    out.tail_trend = last_decade > 0 ? "growing" : "flat";
  else if (last_decade > 1.25 * prev_decade)
    out.tail_trend = "growing";
  else if (last_decade < 0.8 * prev_decade)
    out.tail_trend = "decaying";
  else
    out.tail_trend = "flat";
  return out;
}

// ---------------------------------------------------------------------------
// Config runner

struct RunConfig {
  std::string experiment;
  std::string domain;
  std::string alphas = "auto";
  long samples = 100000;
  std::uint64_t seed = 1;
  std::string out = "run";
  std::string format = "csv";
  double p = 0.4;
  std::string in;
};

inline RunConfig parse_run_config(std::istream& is) {
  RunConfig rc;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigParse("expected key=value", lineno);
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    if (key == "experiment")
      rc.experiment = val;
    else if (key == "domain")
      rc.domain = val;
    else if (key == "alphas")
      rc.alphas = val;
    else if (key == "samples")
      rc.samples = std::stol(val);
    else if (key == "seed")
      rc.seed = std::stoull(val);
    else if (key == "out")
      rc.out = val;
    else if (key == "format")
      rc.format = val;
    else if (key == "p")
      rc.p = std::stod(val);
    else if (key == "in")
      rc.in = val;
    else
      throw ConfigParse("unknown key '" + key + "'", lineno);
  }
  if (rc.experiment.empty()) throw ConfigParse("missing experiment=", lineno);
  return rc;
}

inline std::vector<double> parse_alphas(const std::string& text, const DomainSpec& spec) {
  if (text == "auto") return auto_alphas(spec);
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw DomainError("empty alpha list");
  return out;
}

}  // namespace hypgauge
