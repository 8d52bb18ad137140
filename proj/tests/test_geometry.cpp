#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "ptl/geometry.hpp"

using namespace ptl;
using ptl::testing::make_rng;
using ptl::testing::random_alignment;
using ptl::testing::random_line;
using ptl::testing::random_point;
using ptl::testing::random_unit;

namespace {

// Brute-force l_z point-to-line distance over a fine discretization of the
// line; independent oracle for the closed form.
double brute_line_distance(const Vec2& p, const PlanarLine& l, double z, double span = 400.0,
                           int steps = 4'000'001) {
  const Vec2 base = l.point_on();
  const Vec2 dir = l.direction();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < steps; ++i) {
    const double t = -span + 2.0 * span * i / (steps - 1);
    const Vec2 q = base + t * dir;
    const Vec2 d = p - q;
    const double v = std::pow(std::abs(d.x()), z) + std::pow(std::abs(d.y()), z);
    best = std::min(best, std::pow(v, 1.0 / z));
  }
  return best;
}

}  // namespace

TEST_CASE("line construction normalizes") {
  const auto l = PlanarLine::from(Vec2(2.0, 0.0), -6.0);
  CHECK(l.normal.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(l.offset == doctest::Approx(3.0));
  CHECK(l.normal.x() == doctest::Approx(-1.0));
  CHECK_THROWS_AS(PlanarLine::from(Vec2(0.0, 0.0), 1.0), std::invalid_argument);
}

TEST_CASE("apply_alignment basics") {
  CHECK((apply_alignment(Alignment{}, Vec2(3, 4)) - Vec2(3, 4)).norm() == doctest::Approx(0.0));

  const auto rot90 = Alignment::from_angle(M_PI / 2.0);
  CHECK((rot90.apply(Vec2(1, 0)) - Vec2(0, 1)).norm() == doctest::Approx(0.0).epsilon(1e-15));

  const auto shift = Alignment::from_angle(0.0, Vec2(1, 2));
  CHECK((shift.apply(Vec2(3, 4)) - Vec2(2, 2)).norm() == doctest::Approx(0.0));
}

TEST_CASE("alignment inverse and validity") {
  auto rng = make_rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_alignment(rng);
    CHECK(a.is_valid());
    const auto p = random_point(rng);
    CHECK((a.inverse().apply(a.apply(p)) - p).norm() < 1e-10);
  }
}

TEST_CASE("point_line_distance closed forms") {
  const auto lx = PlanarLine::from(Vec2(1, 0), 1.0);
  CHECK(point_line_distance(Vec2(0, 0), lx, 2.0) == doctest::Approx(1.0));

  auto rng = make_rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto l = random_line(rng);
    const Vec2 on = l.point_on() + 3.7 * l.direction();
    for (double z : {1.0, 1.5, 2.0, 3.0}) CHECK(point_line_distance(on, l, z) < 1e-12);
  }

  // diagonal line, l1 distance; frozen value 2 from the brute-force oracle
  const auto diag = PlanarLine::from(Vec2(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)), std::sqrt(2.0));
  CHECK(point_line_distance(Vec2(0, 0), diag, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(brute_line_distance(Vec2(0, 0), diag, 1.0, 10.0, 2'000'001) == doctest::Approx(2.0).epsilon(1e-6));

  CHECK_THROWS_AS(point_line_distance(Vec2(0, 0), lx, 0.5), std::invalid_argument);
}

TEST_CASE("point_line_distance matches brute force for assorted z") {
  auto rng = make_rng(17);
  for (int t = 0; t < 8; ++t) {
    const auto l = random_line(rng, 5.0);
    const auto p = random_point(rng, 20.0);
    for (double z : {1.0, 1.3, 2.0, 4.0}) {
      const double got = point_line_distance(p, l, z);
      const double want = brute_line_distance(p, l, z, 200.0, 400'001);
      CHECK(got == doctest::Approx(want).epsilon(1e-4));
      CHECK(got <= want + 1e-9);  // oracle is an upper bound on the true min
    }
  }
}

TEST_CASE("l2 vs lz within sqrt(2) both ways") {
  auto rng = make_rng(23);
  for (int t = 0; t < 200; ++t) {
    const auto l = random_line(rng);
    const auto p = random_point(rng);
    std::uniform_real_distribution<double> zdist(1.0, 8.0);
    const double z = zdist(rng);
    const double d2 = point_line_distance(p, l, 2.0);
    const double dz = point_line_distance(p, l, z);
    CHECK(d2 <= std::sqrt(2.0) * dz + 1e-12);
    CHECK(dz <= std::sqrt(2.0) * d2 + 1e-12);
  }
}

TEST_CASE("rotation_to_x_axis") {
  CHECK((rotation_to_x_axis(Vec2(1, 0)) - Mat2::Identity()).norm() == doctest::Approx(0.0));
  CHECK((rotation_to_x_axis(Vec2(0, 1)) * Vec2(0, 1) - Vec2(1, 0)).norm() < 1e-15);

  const Vec2 v(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  const Mat2 m = rotation_to_x_axis(v);
  CHECK((m * v - Vec2(1, 0)).norm() < 1e-12);
  CHECK(m.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((m.transpose() * m - Mat2::Identity()).norm() < 1e-12);

  auto rng = make_rng(5);
  for (int t = 0; t < 100; ++t) {
    const Vec2 u = random_unit(rng);
    const Mat2 r = rotation_to_x_axis(u);
    CHECK((r.transpose() * (r * u) - u).norm() < 1e-12);
  }
  CHECK_THROWS_AS(rotation_to_x_axis(Vec2(1, 1)), std::invalid_argument);
}

TEST_CASE("rigid_from_two_correspondences") {
  const auto id = rigid_from_two_correspondences(Vec2(1, 2), Vec2(3, 4), Vec2(1, 2), Vec2(3, 4));
  CHECK((id.rotation - Mat2::Identity()).norm() < 1e-12);
  CHECK(id.translation.norm() < 1e-12);

  const auto r = rigid_from_two_correspondences(Vec2(0, 0), Vec2(1, 0), Vec2(0, 0), Vec2(0, 1));
  CHECK(r.angle() == doctest::Approx(M_PI / 2.0));
  CHECK(r.translation.norm() < 1e-12);

  auto rng = make_rng(7);
  for (int t = 0; t < 100; ++t) {
    const auto a = random_alignment(rng);
    const Vec2 p1 = random_point(rng), p2 = random_point(rng);
    if ((p1 - p2).norm() < 1e-6) continue;
    const auto rec = rigid_from_two_correspondences(p1, p2, a.apply(p1), a.apply(p2));
    CHECK((rec.rotation - a.rotation).norm() < 1e-9);
    CHECK((rec.translation - a.translation).norm() < 1e-7);
  }

  CHECK_THROWS_AS(rigid_from_two_correspondences(Vec2(0, 0), Vec2(0, 0), Vec2(1, 1), Vec2(1, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(rigid_from_two_correspondences(Vec2(0, 0), Vec2(1, 0), Vec2(0, 0), Vec2(2, 0)),
                  std::invalid_argument);
}

TEST_CASE("line_intersection") {
  const auto xaxis = PlanarLine::from(Vec2(0, 1), 0.0);
  const auto yaxis = PlanarLine::from(Vec2(1, 0), 0.0);
  auto s = line_intersection(xaxis, yaxis);
  REQUIRE(s.has_value());
  CHECK(s->norm() < 1e-12);

  const auto v1 = PlanarLine::from(Vec2(1, 0), 2.0);
  const auto v2 = PlanarLine::from(Vec2(0, 1), 3.0);
  s = line_intersection(v1, v2);
  REQUIRE(s.has_value());
  CHECK((*s - Vec2(2, 3)).norm() < 1e-12);

  CHECK_FALSE(line_intersection(v1, PlanarLine::from(Vec2(-1, 0), 5.0)).has_value());

  auto rng = make_rng(29);
  for (int t = 0; t < 50; ++t) {
    const auto l1 = random_line(rng), l2 = random_line(rng);
    const auto p = line_intersection(l1, l2);
    if (!p) continue;
    CHECK(std::abs(l1.signed_residual(*p)) < 1e-9);
    CHECK(std::abs(l2.signed_residual(*p)) < 1e-9);
  }
}

TEST_CASE("alignment action preserves pairwise distance") {
  auto rng = make_rng(31);
  for (int t = 0; t < 200; ++t) {
    const auto a = random_alignment(rng);
    const Vec2 p = random_point(rng), q = random_point(rng);
    const double before = (p - q).norm();
    const double after = (a.apply(p) - a.apply(q)).norm();
    CHECK(after == doctest::Approx(before).epsilon(1e-9));
  }
}

TEST_CASE("distance invariant under joint rigid motion") {
  auto rng = make_rng(37);
  for (int t = 0; t < 200; ++t) {
    const auto a = random_alignment(rng);
    const auto l = random_line(rng);
    const auto p = random_point(rng);
    const double before = point_line_distance(p, l, 2.0);
    const double after = point_line_distance(a.apply(p), transform_line(a, l), 2.0);
    CHECK(after == doctest::Approx(before).epsilon(1e-9));
  }
}

TEST_CASE("perp_nonneg_x convention") {
  CHECK(perp_nonneg_x(Vec2(0, 1)).x() >= 0.0);
  CHECK(perp_nonneg_x(Vec2(0, -1)).x() >= 0.0);
  const Vec2 w = perp_nonneg_x(Vec2(1, 0));  // perp has x == 0, so y >= 0 picked
  CHECK(w.x() == 0.0);
  CHECK(w.y() >= 0.0);
  auto rng = make_rng(41);
  for (int t = 0; t < 50; ++t) {
    const Vec2 v = random_unit(rng);
    CHECK(std::abs(perp_nonneg_x(v).dot(v)) < 1e-15);
  }
}
