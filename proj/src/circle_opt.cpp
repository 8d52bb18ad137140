#include "ptl/circle_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ptl {

CircleConstraint CircleConstraint::from(const Vec2& a, double b) {
  if (!a.allFinite() || !std::isfinite(b)) throw std::invalid_argument("CircleConstraint: non-finite input");
  if (b < 0.0) return CircleConstraint{-a, -b};
  return CircleConstraint{a, b};
}

CircleMinima min_abs_affine_on_circle(const CircleConstraint& c) {
  const double na = c.a.norm();
  if (!(na > 0.0)) throw std::invalid_argument("min_abs_affine_on_circle: degenerate constraint (a == 0)");
  const Vec2 ahat = c.a / na;
  const double beta = c.b / na;
  CircleMinima out;
  if (beta > 1.0) {
    out.points[0] = ahat;
    out.count = 1;
    out.value = c.b - na;
    return out;
  }
  const double s = std::sqrt(std::max(0.0, 1.0 - beta * beta));
  const Vec2 side = perp_ccw(ahat);
  out.points[0] = beta * ahat + s * side;
  out.points[1] = beta * ahat - s * side;
  out.count = (s == 0.0) ? 1 : 2;
  out.value = 0.0;
  return out;
}

std::vector<Vec2> candidate_unit_vectors(std::span<const CircleConstraint> constraints) {
  std::vector<double> angles;
  angles.reserve(2 * constraints.size());
  for (const auto& c : constraints) {
    if (c.degenerate()) continue;
    const CircleMinima m = min_abs_affine_on_circle(c);
    for (int i = 0; i < m.count; ++i) angles.push_back(std::atan2(m.points[i].y(), m.points[i].x()));
  }
  if (angles.empty()) throw std::invalid_argument("candidate_unit_vectors: all constraints degenerate");
  std::sort(angles.begin(), angles.end());
  std::vector<Vec2> out;
  out.reserve(angles.size());
  constexpr double tol = 1e-12;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (i > 0 && angles[i] - angles[i - 1] <= tol) continue;
    // wrap-around duplicate of the first angle
    if (i + 1 == angles.size() && !out.empty() && (angles[i] - 2.0 * M_PI) >= angles.front() - tol &&
        std::abs((angles[i] - 2.0 * M_PI) - angles.front()) <= tol)
      continue;
    out.emplace_back(std::cos(angles[i]), std::sin(angles[i]));
  }
  return out;
}

bool validate_piecewise_minima(const PiecewiseFn& fn, double h, int samples) {
  if (fn.minima.empty() || !fn.eval) return false;
  for (double m : fn.minima) {
    const double at = fn.eval(m);
    for (int i = 1; i <= samples; ++i) {
      const double d = h * static_cast<double>(i) / samples;
      if (fn.eval(m + d) < at - 1e-12 || fn.eval(m - d) < at - 1e-12) return false;
    }
  }
  return true;
}

double simultaneous_approx_select(std::span<const PiecewiseFn> fns, double x) {
  bool found = false;
  double best = 0.0, best_dist = std::numeric_limits<double>::infinity(),
         best_val = std::numeric_limits<double>::infinity();
  for (const auto& fn : fns) {
    for (double m : fn.minima) {
      const double d = std::abs(m - x);
      const double v = fn.eval ? fn.eval(m) : 0.0;
      if (!found || d < best_dist || (d == best_dist && (v < best_val || (v == best_val && m < best)))) {
        found = true;
        best = m;
        best_dist = d;
        best_val = v;
      }
    }
  }
  if (!found) throw std::invalid_argument("simultaneous_approx_select: no minima supplied");
  return best;
}

}  // namespace ptl
