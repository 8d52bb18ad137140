#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace ptl {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using PlanarPoint = Vec2;

// 90 degree counter-clockwise rotation of v.
inline Vec2 perp_ccw(const Vec2& v) { return Vec2(-v.y(), v.x()); }

// Perpendicular of v normalized so its first coordinate is >= 0
// (second >= 0 when the first is zero).
Vec2 perp_nonneg_x(const Vec2& v);

// A line {q : normal.dot(q) == offset}. The stored normal is unit length and
// the offset is non-negative; the factory flips the normal's sign to enforce
// this.
struct PlanarLine {
  Vec2 normal = Vec2::UnitX();
  double offset = 0.0;

  static PlanarLine from(const Vec2& normal, double offset);
  static PlanarLine through(const Vec2& a, const Vec2& b);

  Vec2 direction() const { return perp_ccw(normal); }
  Vec2 point_on() const { return offset * normal; }
  // Signed distance in units of the (unit) normal.
  double signed_residual(const Vec2& p) const { return normal.dot(p) - offset; }
  Vec2 project(const Vec2& p) const { return p - signed_residual(p) * normal; }
};

// Rigid motion acting on points as p -> R p - t.
// Note the minus sign on the translation; it is used consistently everywhere.
struct Alignment {
  Mat2 rotation = Mat2::Identity();
  Vec2 translation = Vec2::Zero();

  static Alignment from_angle(double theta, const Vec2& t = Vec2::Zero());

  Vec2 apply(const Vec2& p) const { return rotation * p - translation; }
  // The matrix is authoritative; the angle is derived on demand.
  double angle() const { return std::atan2(rotation(1, 0), rotation(0, 0)); }
  Alignment inverse() const;
  bool is_valid(double tol = 1e-10) const;
};

inline Vec2 apply_alignment(const Alignment& a, const Vec2& p) { return a.apply(p); }

// Ordered point-line pairs stored as parallel arrays.
struct PairSet {
  std::vector<PlanarPoint> points;
  std::vector<PlanarLine> lines;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  void push_back(const PlanarPoint& p, const PlanarLine& l) {
    points.push_back(p);
    lines.push_back(l);
  }
  PairSet subset(const std::vector<int>& idx) const;
};

// Dual-norm magnitude of v for the l_z norm (1/z + 1/z* = 1), used by the
// closed-form point-to-line l_z distance. z must be >= 1.
double dual_norm(const Vec2& v, double z);

// min over q on l of ||p - q||_z. For z == 2 this is |v.p - b|.
double point_line_distance(const Vec2& p, const PlanarLine& l, double z);

// Proper rotation M (det +1) with M v = (1, 0)^T for unit v.
Mat2 rotation_to_x_axis(const Vec2& v);

// The unique proper rigid motion with R p1 - t = q1 and R p2 - t = q2.
// Requires ||p1 - p2|| == ||q1 - q2|| (1e-9 relative) and p1 != p2.
Alignment rigid_from_two_correspondences(const Vec2& p1, const Vec2& p2,
                                         const Vec2& q1, const Vec2& q2);

// Empty when the lines are parallel (|n1.n2| > 1 - 1e-12).
std::optional<Vec2> line_intersection(const PlanarLine& l1, const PlanarLine& l2);

// Image of a line under the alignment action (mapping two of its points).
PlanarLine transform_line(const Alignment& a, const PlanarLine& l);

// max(1, largest coordinate / offset magnitude); used to express tolerances
// relative to the size of an instance.
double instance_scale(const PairSet& A);

}  // namespace ptl
