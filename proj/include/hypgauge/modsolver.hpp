#pragma once

// Conformal modules of rectilinear quadrilaterals by a finite-volume Laplace
// solve: potential 0 and 1 on the measured side pair, insulation elsewhere,
// module = 1 / Dirichlet energy. Teeth are zero-thickness vertical slits that
// block the flux across their grid line. Crosscut electrodes (interior
// horizontal segments) support the decomposition checkers; the active
// component is selected by flood fill from a seed. Values are Richardson
// extrapolated from grids h and h/2.

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "hypgauge/errors.hpp"
#include "hypgauge/exact.hpp"
#include "hypgauge/quadspec.hpp"

namespace hypgauge {

struct ModuleEstimate {
  double value = 0.0;
  double grid_h = 0.0;
  double error_bound = 0.0;
};

namespace fd_detail {

// Axis-aligned electrode piece: horizontal (y = c, x in [lo, hi]) on the
// outline or interior, or vertical (x = c, y in [lo, hi]) on the outline.
struct BSeg {
  bool horizontal;
  double c;
  double lo, hi;
};

inline long snap_index(double coord, double h, const char* what) {
  const double raw = coord / h;
  const long idx = std::lround(raw);
  if (std::abs(raw - static_cast<double>(idx)) > 1e-6)
    throw NonRectilinear(std::string(what) + " does not align with the grid");
  return idx;
}

struct Grid {
  int nx, ny;
  double hx, hy;
  double W, H;

  long cell(long i, long j) const { return i + static_cast<long>(nx) * j; }
  long ncells() const { return static_cast<long>(nx) * ny; }
};

struct Assembled {
  std::vector<int> id;          // cell -> unknown index or -1
  std::vector<char> active;
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  double g_h, g_v;              // face conductances
};

struct FdResult {
  double module;
  double energy;
};

/// One finite-volume solve. d0 carries potential 0, d1 potential 1.
inline FdResult fd_solve(const RectDomain& dom, const std::vector<BSeg>& d0,
                         const std::vector<BSeg>& d1, Complex seed, int nx, int ny) {
  Grid g{nx, ny, dom.width / nx, dom.height / ny, dom.width, dom.height};
  const double g_h = g.hy / g.hx;  // conductance of a face crossed along x
  const double g_v = g.hx / g.hy;

  // Blocked horizontal faces (i, j): between cells (i-1, j) and (i, j).
  std::vector<char> blocked(static_cast<std::size_t>((nx + 1)) * ny, 0);
  auto hface = [&](long i, long j) -> char& {
    return blocked[static_cast<std::size_t>(i) + static_cast<std::size_t>(nx + 1) * j];
  };
  for (const auto& t : dom.teeth) {
    const long i = snap_index(t.x, g.hx, "tooth abscissa");
    const long j0 = snap_index(t.y0, g.hy, "tooth start");
    const long j1 = snap_index(t.y1, g.hy, "tooth end");
    if (i <= 0 || i >= nx) throw NonRectilinear("tooth lies on the outline");
    if (j1 - j0 < 4) throw GridTooCoarse("tooth spans fewer than 4 cells");
    for (long j = j0; j < j1; ++j) hface(i, j) = 1;
  }

  // Dirichlet faces: (cell, conductance, value); interior cuts also block
  // the crossing face for connectivity.
  struct DFace {
    long cell;
    double cond;
    double value;
  };
  std::vector<DFace> dfaces;
  std::vector<char> vblocked(static_cast<std::size_t>(nx) * (ny + 1), 0);
  auto vface = [&](long i, long j) -> char& {
    return vblocked[static_cast<std::size_t>(i) + static_cast<std::size_t>(nx) * j];
  };

  auto add_electrode = [&](const std::vector<BSeg>& segs, double value) {
    for (const auto& s : segs) {
      if (s.horizontal) {
        const long j = snap_index(s.c, g.hy, "electrode ordinate");
        const long i0 = snap_index(s.lo, g.hx, "electrode start");
        const long i1 = snap_index(s.hi, g.hx, "electrode end");
        if (i1 - i0 < 1) throw GridTooCoarse("electrode shorter than one cell");
        if (j == 0) {
          for (long i = i0; i < i1; ++i) dfaces.push_back({g.cell(i, 0), 2.0 * g_v, value});
        } else if (j == ny) {
          for (long i = i0; i < i1; ++i) dfaces.push_back({g.cell(i, ny - 1), 2.0 * g_v, value});
        } else {
          for (long i = i0; i < i1; ++i) {
            dfaces.push_back({g.cell(i, j - 1), 2.0 * g_v, value});
            dfaces.push_back({g.cell(i, j), 2.0 * g_v, value});
            vface(i, j) = 1;
          }
        }
      } else {
        const long i = snap_index(s.c, g.hx, "electrode abscissa");
        const long j0 = snap_index(s.lo, g.hy, "electrode start");
        const long j1 = snap_index(s.hi, g.hy, "electrode end");
        if (i != 0 && i != nx)
          throw NonRectilinear("vertical electrodes must lie on the outline");
        const long ci = i == 0 ? 0 : nx - 1;
        for (long j = j0; j < j1; ++j) dfaces.push_back({g.cell(ci, j), 2.0 * g_h, value});
      }
    }
  };
  add_electrode(d0, 0.0);
  add_electrode(d1, 1.0);

  // Active component by flood fill from the seed.
  std::vector<char> active(g.ncells(), 0);
  {
    long si = static_cast<long>(seed.real() / g.hx);
    long sj = static_cast<long>(seed.imag() / g.hy);
    si = std::clamp<long>(si, 0, nx - 1);
    sj = std::clamp<long>(sj, 0, ny - 1);
    std::vector<long> stack{g.cell(si, sj)};
    active[stack.front()] = 1;
    while (!stack.empty()) {
      const long c = stack.back();
      stack.pop_back();
      const long i = c % nx, j = c / nx;
      auto visit = [&](long c2) {
        if (!active[c2]) {
          active[c2] = 1;
          stack.push_back(c2);
        }
      };
      if (i > 0 && !hface(i, j)) visit(g.cell(i - 1, j));
      if (i < nx - 1 && !hface(i + 1, j)) visit(g.cell(i + 1, j));
      if (j > 0 && !vface(i, j)) visit(g.cell(i, j - 1));
      if (j < ny - 1 && !vface(i, j + 1)) visit(g.cell(i, j + 1));
    }
  }

  std::vector<int> id(g.ncells(), -1);
  int nunk = 0;
  for (long c = 0; c < g.ncells(); ++c)
    if (active[c]) id[c] = nunk++;
  if (nunk == 0) throw GridTooCoarse("no active cells at the seed");

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nunk) * 5);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(nunk);
  std::vector<double> diag(nunk, 0.0);
  auto couple = [&](long ca, long cb, double cond) {
    if (!active[ca] || !active[cb]) return;
    const int a = id[ca], c = id[cb];
    diag[a] += cond;
    diag[c] += cond;
    trip.emplace_back(a, c, -cond);
    trip.emplace_back(c, a, -cond);
  };
  for (long j = 0; j < ny; ++j)
    for (long i = 0; i + 1 < nx; ++i)
      if (!hface(i + 1, j)) couple(g.cell(i, j), g.cell(i + 1, j), g_h);
  for (long j = 0; j + 1 < ny; ++j)
    for (long i = 0; i < nx; ++i)
      if (!vface(i, j + 1)) couple(g.cell(i, j), g.cell(i, j + 1), g_v);
  for (const auto& df : dfaces) {
    if (!active[df.cell]) continue;
    const int a = id[df.cell];
    diag[a] += df.cond;
    b[a] += df.cond * df.value;
  }
  for (int k = 0; k < nunk; ++k) trip.emplace_back(k, k, diag[k]);

  Eigen::SparseMatrix<double> A(nunk, nunk);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::IncompleteCholesky<double>>
      cg;
  cg.setTolerance(1e-10);
  cg.compute(A);
  const Eigen::VectorXd u = cg.solve(b);
  if (cg.info() != Eigen::Success)
    throw NonConvergence("fd_solve: conjugate gradient failed to converge");

  double energy = 0.0;
  for (long j = 0; j < ny; ++j)
    for (long i = 0; i + 1 < nx; ++i) {
      if (hface(i + 1, j)) continue;
      const long ca = g.cell(i, j), cb = g.cell(i + 1, j);
      if (!active[ca] || !active[cb]) continue;
      const double du = u[id[cb]] - u[id[ca]];
      energy += g_h * du * du;
    }
  for (long j = 0; j + 1 < ny; ++j)
    for (long i = 0; i < nx; ++i) {
      if (vface(i, j + 1)) continue;
      const long ca = g.cell(i, j), cb = g.cell(i, j + 1);
      if (!active[ca] || !active[cb]) continue;
      const double du = u[id[cb]] - u[id[ca]];
      energy += g_v * du * du;
    }
  for (const auto& df : dfaces) {
    if (!active[df.cell]) continue;
    const double du = u[id[df.cell]] - df.value;
    energy += df.cond * du * du;
  }
  if (!(energy > 0)) throw NonConvergence("fd_solve: vanishing Dirichlet energy");
  return {1.0 / energy, energy};
}

/// Grid counts aligned to the domain features nearest a requested spacing h.
inline std::pair<int, int> aligned_grid(const RectDomain& dom,
                                        const std::vector<BSeg>& electrodes, double h) {
  if (!(h > 0)) throw GridTooCoarse("h must be positive");
  auto denominator = [](const std::vector<double>& fractions) {
    for (int q = 1; q <= 256; ++q) {
      bool ok = true;
      for (double f : fractions) {
        const double v = f * q;
        if (std::abs(v - std::lround(v)) > 1e-9 * q) {
          ok = false;
          break;
        }
      }
      if (ok) return q;
    }
    throw NonRectilinear("feature coordinates are not commensurable with any grid <= 256");
  };
  std::vector<double> fx, fy;
  for (const auto& t : dom.teeth) {
    fx.push_back(t.x / dom.width);
    fy.push_back(t.y0 / dom.height);
    fy.push_back(t.y1 / dom.height);
  }
  for (const auto& s : electrodes) {
    if (s.horizontal) {
      fy.push_back(s.c / dom.height);
      fx.push_back(s.lo / dom.width);
      fx.push_back(s.hi / dom.width);
    } else {
      fx.push_back(s.c / dom.width);
      fy.push_back(s.lo / dom.height);
      fy.push_back(s.hi / dom.height);
    }
  }
  const int qx = fx.empty() ? 1 : denominator(fx);
  const int qy = fy.empty() ? 1 : denominator(fy);
  const int nx = qx * std::max(1, static_cast<int>(std::lround(dom.width / h / qx)));
  const int ny = qy * std::max(1, static_cast<int>(std::lround(dom.height / h / qy)));
  return {std::max(nx, 4), std::max(ny, 4)};
}

/// Richardson-extrapolated solve at h and h/2.
inline ModuleEstimate solve_richardson(const RectDomain& dom, const std::vector<BSeg>& d0,
                                       const std::vector<BSeg>& d1, Complex seed, double h) {
  std::vector<BSeg> all(d0);
  all.insert(all.end(), d1.begin(), d1.end());
  const auto [nx, ny] = aligned_grid(dom, all, h);
  const double coarse = fd_solve(dom, d0, d1, seed, nx, ny).module;
  const double fine = fd_solve(dom, d0, d1, seed, 2 * nx, 2 * ny).module;
  const double extrapolated = fine + (fine - coarse) / 3.0;
  ModuleEstimate est;
  est.value = extrapolated;
  est.grid_h = dom.width / (2 * nx);
  est.error_bound = std::abs(extrapolated - fine) + 1e-9 * std::abs(extrapolated) + 1e-12;
  return est;
}

/// Boundary arc of the rectangle outline from marker a to marker b,
/// counterclockwise, as electrode pieces. Markers must lie on the outline.
inline std::vector<BSeg> outline_arc(const RectDomain& dom, Complex a, Complex b) {
  const double W = dom.width, H = dom.height;
  auto par = [&](Complex p) -> double {
    const double tol = 1e-9 * std::max(W, H);
    if (std::abs(p.imag()) < tol) return p.real();                      // bottom
    if (std::abs(p.real() - W) < tol) return W + p.imag();              // right
    if (std::abs(p.imag() - H) < tol) return W + H + (W - p.real());    // top
    if (std::abs(p.real()) < tol) return 2 * W + H + (H - p.imag());    // left
    throw NonRectilinear("marker does not lie on the rectangle outline");
  };
  const double per = 2 * (W + H);
  double ta = par(a), tb = par(b);
  if (tb <= ta + 1e-12) tb += per;
  std::vector<BSeg> out;
  // Corners at W, W+H, W+2H... walk and emit per-edge pieces.
  const double corners[5] = {0, W, W + H, 2 * W + H, per};
  double t = ta;
  while (t < tb - 1e-12) {
    // find the edge containing t (mod per)
    double tm = std::fmod(t, per);
    int e = 0;
    while (e < 3 && tm >= corners[e + 1] - 1e-12) ++e;
    const double edge_end = corners[e + 1];
    const double seg_end = std::min(tb - t + tm, edge_end);
    const double lo = tm, hi = seg_end;
    if (hi - lo > 1e-12) {
      switch (e) {
        case 0:
          out.push_back({true, 0.0, lo, hi});
          break;
        case 1:
          out.push_back({false, W, lo - W, hi - W});
          break;
        case 2:
          out.push_back({true, H, W - (hi - (W + H)), W - (lo - (W + H))});
          break;
        case 3:
          out.push_back({false, 0.0, H - (hi - (2 * W + H)), H - (lo - (2 * W + H))});
          break;
      }
    }
    t += seg_end - tm;
  }
  return out;
}

inline std::vector<BSeg> cut_to_segs(const CrossCut& cut) {
  return {BSeg{true, cut.y, cut.x0, cut.x1}};
}

inline Complex rect_center(const RectDomain& dom) {
  return {dom.width / 2.0, dom.height / 2.0};
}

}  // namespace fd_detail

/// Module of a marker quadrilateral: Laplace solve with potential 0 on side
/// (z1, z2), 1 on (z3, z4), insulation elsewhere; value is Richardson
/// extrapolated, and for toothless quads averaged with the conjugate
/// (side-swapped) solve whose module is the exact reciprocal.
inline ModuleEstimate solve_module(const QuadSpec& q, double h) {
  using namespace fd_detail;
  const auto d0 = outline_arc(q.dom, q.markers[0], q.markers[1]);
  const auto d1 = outline_arc(q.dom, q.markers[2], q.markers[3]);
  Complex seed = rect_center(q.dom);
  if (!q.dom.teeth.empty()) {
    // center may sit on a tooth line; nudge off it
    seed += Complex(q.dom.width * 0.011, q.dom.height * 0.007);
  }
  ModuleEstimate primal = solve_richardson(q.dom, d0, d1, seed, h);
  if (q.dom.teeth.empty()) {
    const auto e0 = outline_arc(q.dom, q.markers[1], q.markers[2]);
    const auto e1 = outline_arc(q.dom, q.markers[3], q.markers[0]);
    const ModuleEstimate dual = solve_richardson(q.dom, e0, e1, seed, h);
    ModuleEstimate out;
    out.value = std::sqrt(primal.value / dual.value);
    out.grid_h = primal.grid_h;
    out.error_bound = 0.5 * (primal.error_bound / primal.value +
                             dual.error_bound / dual.value) *
                          out.value +
                      0.5 * std::abs(out.value - primal.value);
    return out;
  }
  return primal;
}

/// Module between two electrodes that may be interior crosscuts; the
/// quadrilateral is the component of the domain (cut along both electrodes)
/// containing `seed`.
inline ModuleEstimate solve_between(const QuadSpec& q, const std::vector<fd_detail::BSeg>& d0,
                                    const std::vector<fd_detail::BSeg>& d1, Complex seed,
                                    double h) {
  return fd_detail::solve_richardson(q.dom, d0, d1, seed, h);
}

struct SerialRuleResult {
  double residual;
  double tolerance;
  bool pass;
};

/// Serial rule direction: the whole module dominates the sum of the parts.
inline SerialRuleResult serial_rule_check(const ModuleEstimate& whole,
                                          const std::vector<ModuleEstimate>& parts) {
  double sum = 0, tol = whole.error_bound;
  for (const auto& p : parts) {
    sum += p.value;
    tol += p.error_bound;
  }
  const double residual = whole.value - sum;
  return {residual, tol, residual >= -tol};
}

struct DecompositionReport {
  ModuleEstimate whole, q12, q23, q2;
  double residual = 0;
  double bound = 0;
  double fd_slack = 0;
  bool pass = false;
};

/// Three-piece decomposition residual m(Q) - m(Q12) - m(Q23) + m(Q2) against
/// the 8.82 e^{-pi m(Q2)} bound; requires measured m(Q2) >= 3.
inline DecompositionReport decomposition_residual(const QuadSpec& q, const CrossCut& cut1,
                                                  const CrossCut& cut2, double h) {
  using namespace fd_detail;
  if (cut2.y <= cut1.y) throw DomainError("decomposition_residual: cuts must be ordered in y");
  DecompositionReport rep;
  rep.whole = solve_module(q, h);
  const auto side12 = outline_arc(q.dom, q.markers[0], q.markers[1]);
  const auto side34 = outline_arc(q.dom, q.markers[2], q.markers[3]);
  const auto c1 = cut_to_segs(cut1);
  const auto c2 = cut_to_segs(cut2);
  const Complex seed_low{0.5 * (cut1.x0 + cut1.x1), 0.5 * cut1.y};
  const Complex seed_mid{0.5 * (cut1.x0 + cut1.x1), 0.5 * (cut1.y + cut2.y)};
  const Complex seed_high{0.5 * (cut2.x0 + cut2.x1), 0.5 * (cut2.y + q.dom.height)};
  rep.q12 = solve_between(q, side12, c2, seed_low, h);
  rep.q23 = solve_between(q, c1, side34, seed_high, h);
  rep.q2 = solve_between(q, c1, c2, seed_mid, h);
  if (rep.q2.value < 3.0)
    throw PreconditionNotMet("decomposition_residual: measured m(Q2) < 3");
  rep.residual = rep.whole.value - rep.q12.value - rep.q23.value + rep.q2.value;
  rep.bound = decomposition_bounds(rep.q2.value).first;
  rep.fd_slack = 2.0 * (rep.whole.error_bound + rep.q12.error_bound + rep.q23.error_bound +
                        rep.q2.error_bound);
  rep.pass = std::abs(rep.residual) <= rep.bound + rep.fd_slack;
  return rep;
}

struct TelescopingReport {
  ModuleEstimate end_to_end;
  std::vector<ModuleEstimate> cells;
  std::vector<double> module_R_measured;
  double gap = 0;    // end_to_end - sum(cells)
  double bound = 0;  // 26.46 sum e^{-pi m(R_j)}
  double fd_slack = 0;
  bool pass = false;
};

/// Telescoped comb decomposition: 0 <= m(end) - sum m(Q_j) <=
/// 26.46 sum_j e^{-pi m(R_j)} with m(R_j) = 2^{j+1}.
inline TelescopingReport telescoping_check(const CombQuad& comb, double h) {
  using namespace fd_detail;
  TelescopingReport rep;
  rep.end_to_end = solve_module(comb.quad, h);
  const double W = comb.quad.dom.width;
  const double H = comb.quad.dom.height;
  const auto bottom = outline_arc(comb.quad.dom, comb.quad.markers[0], comb.quad.markers[1]);
  const auto topgap = outline_arc(comb.quad.dom, comb.quad.markers[2], comb.quad.markers[3]);

  std::vector<std::vector<BSeg>> electrodes;
  electrodes.push_back(bottom);
  for (const auto& cut : comb.level_cuts) electrodes.push_back(cut_to_segs(cut));
  electrodes.push_back(topgap);

  std::vector<double> ys{0.0};
  std::vector<double> xs{W};
  for (const auto& cut : comb.level_cuts) {
    ys.push_back(cut.y);
    xs.push_back(cut.x1);
  }
  ys.push_back(H);
  xs.push_back(comb.level_cuts.empty() ? W : comb.level_cuts.back().x1);

  double sum = 0;
  for (std::size_t k = 0; k + 1 < electrodes.size(); ++k) {
    const double xseed = 0.5 * std::min(xs[k], xs[k + 1]);
    const Complex seed{xseed, 0.5 * (ys[k] + ys[k + 1])};
    auto cell = solve_between(comb.quad, electrodes[k], electrodes[k + 1], seed, h);
    sum += cell.value;
    rep.fd_slack += cell.error_bound;
    rep.cells.push_back(cell);
  }
  rep.fd_slack = 2.0 * (rep.fd_slack + rep.end_to_end.error_bound);
  rep.gap = rep.end_to_end.value - sum;
  rep.bound = 0;
  for (double mR : comb.module_R) rep.bound += 26.46 * std::exp(-kPi * mR);

  // Measured m(R_j) as a cross-check of the analytic 2^{j+1}.
  for (std::size_t j = 0; j < comb.level_cuts.size(); ++j) {
    const auto& lj = comb.lj_cuts[j];
    const auto& gj = comb.level_cuts[j];
    const Complex seed{0.5 * lj.x1, 0.5 * (lj.y + gj.y)};
    rep.module_R_measured.push_back(
        solve_between(comb.quad, cut_to_segs(lj), cut_to_segs(gj), seed, h).value);
  }
  rep.pass = rep.gap >= -rep.fd_slack && rep.gap <= rep.bound + rep.fd_slack;
  return rep;
}

}  // namespace hypgauge
