#pragma once

#include "ptl/geometry.hpp"

#include <functional>
#include <span>
#include <vector>

namespace ptl {

// One term |a.y - b| of a constrained regression over unit vectors y.
// b is kept non-negative; a constraint given with b < 0 is normalized by
// flipping the sign of a (the objective is invariant under (a,b) -> (-a,-b)
// once the whole circle is searched).
struct CircleConstraint {
  Vec2 a = Vec2::UnitX();
  double b = 0.0;

  static CircleConstraint from(const Vec2& a, double b);
  double value(const Vec2& y) const { return std::abs(a.dot(y) - b); }
  bool degenerate() const { return a.norm() == 0.0; }
};

struct CircleMinima {
  Vec2 points[2];
  int count = 0;   // 1 or 2
  double value = 0.0;
};

// Minimizers of |a.y - b| over unit y. If b <= ||a|| the level set a.y = b
// meets the circle in one or two points (value 0); otherwise the unique
// minimizer is a/||a|| with value b - ||a||. Throws on a == 0.
CircleMinima min_abs_affine_on_circle(const CircleConstraint& c);

// Union of per-constraint minimizers, de-duplicated by angle (1e-12).
// Contains, for every unit x, a vector x' with
//   |a_i.x' - b_i| <= 4 |a_i.x - b_i|  for all i simultaneously.
// Degenerate constraints are skipped; throws if all are degenerate.
std::vector<Vec2> candidate_unit_vectors(std::span<const CircleConstraint> constraints);

// A real function described by the explicit list of its local minima. The
// caller supplies the partition; nothing is discovered automatically.
struct PiecewiseFn {
  std::vector<double> minima;            // sorted
  std::function<double(double)> eval;
};

// True when every listed minimum is a local infimum of eval (sampled on
// left/right neighbourhoods of half-width h).
bool validate_piecewise_minima(const PiecewiseFn& fn, double h = 1e-3, int samples = 64);

// The element of the union of all minima closest to x; equidistant ties go to
// the point with smaller owner-function value, then to the smaller abscissa.
double simultaneous_approx_select(std::span<const PiecewiseFn> fns, double x);

}  // namespace ptl
