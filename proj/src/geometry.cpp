#include "ptl/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace ptl {

Vec2 perp_nonneg_x(const Vec2& v) {
  Vec2 w = perp_ccw(v);
  if (w.x() < 0.0 || (w.x() == 0.0 && w.y() < 0.0)) w = -w;
  return w;
}

PlanarLine PlanarLine::from(const Vec2& normal, double offset) {
  const double n = normal.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("PlanarLine: zero or non-finite normal");
  Vec2 v = normal;
  double b = offset;
  if (std::abs(n - 1.0) > 1e-14) {  // already-unit input stays bit-exact
    v /= n;
    b /= n;
  }
  if (b < 0.0) {
    v = -v;
    b = -b;
  }
  return PlanarLine{v, b};
}

PlanarLine PlanarLine::through(const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  if (!(d.norm() > 0.0)) throw std::invalid_argument("PlanarLine::through: coincident points");
  const Vec2 n = perp_ccw(d);
  return from(n, n.dot(a));
}

Alignment Alignment::from_angle(double theta, const Vec2& t) {
  const double c = std::cos(theta), s = std::sin(theta);
  Alignment a;
  a.rotation << c, -s, s, c;
  a.translation = t;
  return a;
}

Alignment Alignment::inverse() const {
  Alignment a;
  a.rotation = rotation.transpose();
  a.translation = -rotation.transpose() * translation;
  return a;
}

bool Alignment::is_valid(double tol) const {
  const Mat2 e = rotation.transpose() * rotation - Mat2::Identity();
  return e.cwiseAbs().maxCoeff() <= tol && std::abs(rotation.determinant() - 1.0) <= tol &&
         translation.allFinite();
}

PairSet PairSet::subset(const std::vector<int>& idx) const {
  PairSet out;
  out.points.reserve(idx.size());
  out.lines.reserve(idx.size());
  for (int i : idx) out.push_back(points.at(static_cast<std::size_t>(i)), lines.at(static_cast<std::size_t>(i)));
  return out;
}

double dual_norm(const Vec2& v, double z) {
  if (!(z >= 1.0)) throw std::invalid_argument("dual_norm: z must be >= 1");
  const double ax = std::abs(v.x()), ay = std::abs(v.y());
  const double hi = std::max(ax, ay), lo = std::min(ax, ay);
  if (z == 1.0) return hi;          // dual of l1 is l_inf
  if (z == 2.0) return v.norm();
  if (hi == 0.0) return 0.0;
  const double zs = z / (z - 1.0);  // dual exponent
  return hi * std::pow(1.0 + std::pow(lo / hi, zs), 1.0 / zs);
}

double point_line_distance(const Vec2& p, const PlanarLine& l, double z) {
  if (!(z >= 1.0)) throw std::invalid_argument("point_line_distance: z must be >= 1");
  return std::abs(l.signed_residual(p)) / dual_norm(l.normal, z);
}

Mat2 rotation_to_x_axis(const Vec2& v) {
  if (std::abs(v.norm() - 1.0) > 1e-9) throw std::invalid_argument("rotation_to_x_axis: v must be unit");
  // Rows v^T and (perp of v)^T oriented so the determinant is +1.
  Mat2 m;
  m << v.x(), v.y(), -v.y(), v.x();
  return m;
}

Alignment rigid_from_two_correspondences(const Vec2& p1, const Vec2& p2,
                                         const Vec2& q1, const Vec2& q2) {
  const Vec2 dp = p2 - p1, dq = q2 - q1;
  const double np = dp.norm(), nq = dq.norm();
  if (!(np > 0.0)) throw std::invalid_argument("rigid_from_two_correspondences: coincident source points");
  if (std::abs(np - nq) > 1e-9 * std::max(1.0, np))
    throw std::invalid_argument("rigid_from_two_correspondences: segment lengths differ");
  double c = dp.dot(dq) / (np * np);
  double s = (dp.x() * dq.y() - dp.y() * dq.x()) / (np * np);
  const double h = std::hypot(c, s);
  c /= h;
  s /= h;
  Alignment a;
  a.rotation << c, -s, s, c;
  a.translation = a.rotation * p1 - q1;
  return a;
}

std::optional<Vec2> line_intersection(const PlanarLine& l1, const PlanarLine& l2) {
  if (std::abs(l1.normal.dot(l2.normal)) > 1.0 - 1e-12) return std::nullopt;
  Mat2 m;
  m.row(0) = l1.normal.transpose();
  m.row(1) = l2.normal.transpose();
  return Vec2(m.inverse() * Vec2(l1.offset, l2.offset));
}

PlanarLine transform_line(const Alignment& a, const PlanarLine& l) {
  const Vec2 q1 = a.apply(l.point_on());
  const Vec2 q2 = a.apply(l.point_on() + l.direction());
  return PlanarLine::through(q1, q2);
}

double instance_scale(const PairSet& A) {
  double s = 1.0;
  for (const auto& p : A.points) s = std::max({s, std::abs(p.x()), std::abs(p.y())});
  for (const auto& l : A.lines) s = std::max(s, std::abs(l.offset));
  return s;
}

}  // namespace ptl
