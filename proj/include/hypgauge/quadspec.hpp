#pragma once

// Rectilinear quadrilaterals: an axis-aligned rectangle minus vertical tooth
// segments, four boundary markers in counterclockwise order, and straight
// crosscuts used by the decomposition checkers.

#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hypgauge/errors.hpp"
#include "hypgauge/geometry.hpp"

namespace hypgauge {

/// Vertical slit at abscissa x spanning [y0, y1]; a tooth is part of the
/// insulated boundary.
struct Tooth {
  double x;
  double y0;
  double y1;
};

struct RectDomain {
  double width = 1.0;
  double height = 1.0;
  std::vector<Tooth> teeth;
};

/// Horizontal crosscut at ordinate y spanning [x0, x1]; crosscuts run between
/// boundary points (outline or tooth) and carry Dirichlet data in
/// decomposition solves.
struct CrossCut {
  double y;
  double x0;
  double x1;
};

/// Quadrilateral: rectilinear domain plus markers z1..z4 in counterclockwise
/// order on the rectangle outline. The measured side pair is (z1,z2) and
/// (z3,z4).
struct QuadSpec {
  RectDomain dom;
  std::array<Complex, 4> markers;

  static QuadSpec rectangle(double width, double height) {
    QuadSpec q;
    q.dom.width = width;
    q.dom.height = height;
    q.markers = {Complex{0, 0}, Complex{width, 0}, Complex{width, height}, Complex{0, height}};
    return q;
  }
};

// Plain text form:
//   rect W H
//   tooth x y_from y_to
//   markers x1 y1 x2 y2 x3 y3 x4 y4     (optional; defaults to the corners)

inline void save_quad(std::ostream& os, const QuadSpec& q) {
  os.precision(17);
  os << "rect " << q.dom.width << ' ' << q.dom.height << '\n';
  for (const auto& t : q.dom.teeth) os << "tooth " << t.x << ' ' << t.y0 << ' ' << t.y1 << '\n';
  os << "markers";
  for (const auto& m : q.markers) os << ' ' << m.real() << ' ' << m.imag();
  os << '\n';
}

inline QuadSpec load_quad(std::istream& is) {
  QuadSpec q;
  bool have_rect = false, have_markers = false;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string kind;
    ss >> kind;
    if (kind == "rect") {
      ss >> q.dom.width >> q.dom.height;
      have_rect = true;
    } else if (kind == "tooth") {
      Tooth t{};
      ss >> t.x >> t.y0 >> t.y1;
      q.dom.teeth.push_back(t);
    } else if (kind == "markers") {
      for (auto& m : q.markers) {
        double x, y;
        ss >> x >> y;
        m = {x, y};
      }
      have_markers = true;
    } else {
      throw ConfigParse("unknown quad line kind '" + kind + "'", lineno);
    }
    if (ss.fail()) throw ConfigParse("malformed quad line", lineno);
  }
  if (!have_rect) throw ConfigParse("missing rect line", lineno);
  if (!have_markers)
    q.markers = {Complex{0, 0}, Complex{q.dom.width, 0}, Complex{q.dom.width, q.dom.height},
                 Complex{0, q.dom.height}};
  return q;
}

}  // namespace hypgauge
