#pragma once

// Adaptive Gauss-Kronrod quadrature (7-15 pair) with bisection on the
// embedded error estimate.

#include <cmath>
#include <vector>

#include "hypgauge/errors.hpp"

namespace hypgauge {

namespace gk {

// 15-point Kronrod nodes on [0, 1] side (symmetric) and weights, with the
// embedded 7-point Gauss weights on the odd-index nodes.
inline constexpr double kNodes[8] = {
    0.00000000000000000, 0.20778495500789847, 0.40584515137739717, 0.58608723546769113,
    0.74153118559939444, 0.86486442335976907, 0.94910791234275852, 0.99145537112081264};
inline constexpr double kWeightsK[8] = {
    0.20948214108472783, 0.20443294007529889, 0.19035057806478541, 0.16900472663926790,
    0.14065325971552592, 0.10479001032225018, 0.06309209262997855, 0.02293532201052922};
inline constexpr double kWeightsG[4] = {
    0.41795918367346939, 0.38183005050511894, 0.27970539148927667, 0.12948496616886969};

template <class F>
inline void eval_panel(const F& f, double a, double b, double& integral, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double f0 = f(c);
  double ik = kWeightsK[0] * f0;
  double ig = kWeightsG[0] * f0;
  for (int j = 1; j < 8; ++j) {
    const double x = h * kNodes[j];
    const double fv = f(c - x) + f(c + x);
    ik += kWeightsK[j] * fv;
    if (j % 2 == 0) ig += kWeightsG[j / 2] * fv;
  }
  integral = ik * h;
  err = std::abs(ik - ig) * h;
}

}  // namespace gk

/// Integrates f over [a, b] to absolute tolerance abs_tol.
template <class F>
inline double integrate(const F& f, double a, double b, double abs_tol = 1e-10,
                        int max_depth = 48) {
  struct Panel {
    double a, b, integral, err;
    int depth;
  };
  double i0, e0;
  gk::eval_panel(f, a, b, i0, e0);
  if (e0 <= abs_tol) return i0;
  std::vector<Panel> stack{{a, b, i0, e0, 0}};
  double total = 0.0;
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    if (p.err <= abs_tol * std::max(1e-3, (p.b - p.a) / (b - a)) || p.depth >= max_depth) {
      total += p.integral;
      continue;
    }
    const double m = 0.5 * (p.a + p.b);
    double il, el, ir, er;
    gk::eval_panel(f, p.a, m, il, el);
    gk::eval_panel(f, m, p.b, ir, er);
    stack.push_back({p.a, m, il, el, p.depth + 1});
    stack.push_back({m, p.b, ir, er, p.depth + 1});
  }
  return total;
}

}  // namespace hypgauge
