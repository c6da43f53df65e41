#pragma once

// Closed forms for disk hyperbolic distance, harmonic-measure bounds of the
// Beurling-Nevanlinna type, strip quantities, modules of log-rectangles, the
// Green-to-hyperbolic conversion, and a deterministic sector oracle.

#include <cmath>
#include <optional>

#include "hypgauge/errors.hpp"
#include "hypgauge/geometry.hpp"
#include "hypgauge/quadrature.hpp"

namespace hypgauge {

struct BoundTriple {
  double lower;
  std::optional<double> value;
  double upper;
};

/// Hyperbolic distance between interior points of the unit disk,
/// log((1 + rho)/(1 - rho)) with rho the Moebius pseudo-distance.
inline double disk_hyperbolic_distance(Complex z, Complex w) {
  if (std::abs(z) >= 1.0 || std::abs(w) >= 1.0)
    throw OutOfDisk("disk_hyperbolic_distance: arguments must lie in the open unit disk");
  const double rho = std::abs((z - w) / (1.0 - z * std::conj(w)));
  return 2.0 * std::atanh(rho);
}

/// Harmonic measure at 0 of the radial slit [-1, -r0] in the unit disk;
/// the floor (2/pi) arcsin(e^{-d}) of the projection-theorem chain.
inline double bn_lower_bound(double r0) {
  if (!(r0 > 0.0 && r0 <= 1.0)) throw DomainError("bn_lower_bound: r0 must lie in (0, 1]");
  return (2.0 / kPi) * std::asin((1.0 - r0) / (1.0 + r0));
}

/// Harmonic measure omega_D(x, [-1, -x]) at the interior point x of the slit
/// with matching tip.
inline double radial_slit_measure(double x) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("radial_slit_measure: x must lie in (0, 1)");
  const double q = (1.0 - x) / (1.0 + x);
  return (2.0 / kPi) * std::asin(q * q);
}

/// Two-sided bounds e^{-d} <= omega <= (4/pi) e^{-d} for the harmonic measure
/// of a boundary-to-boundary geodesic at hyperbolic distance d.
inline BoundTriple geodesic_measure_bounds(double d) {
  if (!(d >= 0.0)) throw DomainError("geodesic_measure_bounds: d must be nonnegative");
  const double e = std::exp(-d);
  return {e, std::nullopt, (4.0 / kPi) * e};
}

/// omega_S(ic, {Im z = -c}) in the strip of half-width 1.
inline double strip_line_measure(double c) {
  if (!(c >= 0.0 && c < 1.0)) throw DomainError("strip_line_measure: c must lie in [0, 1)");
  return (1.0 - c) / (1.0 + c);
}

/// d_S(-ic, ic) in the strip of half-width 1.
inline double strip_cross_distance(double c) {
  if (!(c >= 0.0 && c < 1.0)) throw DomainError("strip_cross_distance: c must lie in [0, 1)");
  return 2.0 * std::atanh(std::sin(c * kPi / 2.0));
}

/// The bounded-ratio constant K(c) = (4/pi) (1+c)/(1-c) (1+sin(c pi/2))/(1-sin(c pi/2)).
inline double theorem_K(double c) {
  if (!(c > 0.0 && c < 1.0)) throw DomainError("theorem_K: c must lie in (0, 1)");
  const double s = std::sin(c * kPi / 2.0);
  return (4.0 / kPi) * ((1.0 + c) / (1.0 - c)) * ((1.0 + s) / (1.0 - s));
}

/// Module of the annular-sector quadrilateral between radii r1 < r2 and
/// angles 0, theta, measured between the two radial sides.
inline double log_rectangle_module(double r1, double r2, double theta) {
  if (!(r1 > 0.0 && r2 > r1)) throw DomainError("log_rectangle_module: need r2 > r1 > 0");
  if (!(theta > 0.0 && theta <= kTwoPi))
    throw DomainError("log_rectangle_module: theta must lie in (0, 2 pi]");
  return std::log(r2 / r1) / theta;
}

/// d = log((1 + e^{-g})/(1 - e^{-g})); converts a Green's function value at a
/// point into the hyperbolic distance to the base point.
inline double green_to_hyperbolic(double g) {
  if (!(g > 0.0)) throw DomainError("green_to_hyperbolic: g must be positive");
  return 2.0 * std::atanh(std::exp(-g));
}

/// Derivative d(green_to_hyperbolic)/dg, used for error propagation.
inline double green_to_hyperbolic_slope(double g) {
  const double e = std::exp(-g);
  return -2.0 * e / (1.0 - e * e);
}

/// Beurling-type extremal-distance upper bound 3 pi e^{-pi lambda},
/// valid for lambda > 2.
inline double beurling_upper(double lambda) {
  if (!(lambda > 2.0))
    throw PreconditionNotMet("beurling_upper: requires lambda > 2");
  return 3.0 * kPi * std::exp(-kPi * lambda);
}

/// Decomposition error bounds (8.82 e^{-pi m2}, 26.46 e^{-pi m2});
/// require m2 >= 3.
inline std::pair<double, double> decomposition_bounds(double m2) {
  if (!(m2 >= 3.0)) throw PreconditionNotMet("decomposition_bounds: requires m2 >= 3");
  const double e = std::exp(-kPi * m2);
  return {8.82 * e, 26.46 * e};
}

/// Harmonic measure at the disk center of a boundary arc of given length.
inline double center_arc_measure(double arc_length) {
  if (!(arc_length >= 0.0 && arc_length <= kTwoPi))
    throw DomainError("center_arc_measure: arc length must lie in [0, 2 pi]");
  return arc_length / kTwoPi;
}

struct SectorOracleResult {
  double omega;
  double d;
};

/// Harmonic measure and hyperbolic distance from the axis point `base` to the
/// level arc {|z| = alpha} in the sector {|Arg z| < half_opening}. The sector
/// maps to the upper half-plane by a power map; omega comes from the Poisson
/// integral over the image of the arc (adaptive quadrature, abs tol 1e-8) and
/// d from the half-plane metric along the imaginary axis.
inline SectorOracleResult sector_oracle(double half_opening, double base, double alpha,
                                        int arc_index = 0) {
  if (!(half_opening > 0.0 && half_opening <= kPi))
    throw DomainError("sector_oracle: half_opening must lie in (0, pi]");
  if (!(base > 0.0 && alpha > 0.0))
    throw DomainError("sector_oracle: base and alpha must be positive");
  if (arc_index != 0) throw DomainError("sector_oracle: the level set has one arc");
  if (alpha == base) return {1.0, 0.0};

  const double gamma = kPi / (2.0 * half_opening);
  // Inversion z -> 1/z fixes the sector; reduce to alpha > base.
  const double lo = std::min(base, alpha), hi = std::max(base, alpha);
  const double x = std::pow(lo / hi, gamma);  // = e^{-d}
  const double d = -std::log(x);

  // Rescaled picture: half-disk of radius 1 in the upper half-plane with the
  // base point at i x. The joukowski-type map t = -(w + 1/w)/2 sends the arc
  // to [-1, 1] and ix to i Y, and the Poisson integral gives omega.
  const double Y = 0.5 * (1.0 / x - x);
  const auto integrand = [Y](double u) {
    const double t = std::sin(u);
    return (Y / (t * t + Y * Y)) * std::cos(u);
  };
  const double omega = integrate(integrand, -kPi / 2.0, kPi / 2.0, 1e-8) / kPi;
  return {omega, d};
}

}  // namespace hypgauge
