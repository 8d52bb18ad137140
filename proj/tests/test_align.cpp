#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "ptl/align.hpp"

using namespace ptl;
using ptl::testing::make_planted;
using ptl::testing::make_rng;
using ptl::testing::random_alignment;
using ptl::testing::random_line;
using ptl::testing::random_pairs;
using ptl::testing::random_point;
using ptl::testing::random_unit;

TEST_CASE("z_configs worked example") {
  const Vec2 v(0, 1), p(1, 0), q(0, 2), z(1, 2);
  const int side = triangle_side(p, q, z);
  CHECK(side == -1);
  const auto cfg = z_configs(v, p, q, z, side);
  const Vec2 x(2.0 / std::sqrt(5.0), 1.0 / std::sqrt(5.0));
  CHECK((cfg.P * x - p).norm() < 1e-12);
  CHECK((cfg.Q * x - q).norm() < 1e-12);
  CHECK((cfg.Z * x - z).norm() < 1e-12);
}

TEST_CASE("z_configs structural invariants") {
  auto rng = make_rng(401);
  for (int t = 0; t < 100; ++t) {
    Vec2 v = random_unit(rng);
    if (std::abs(v.y()) < 1e-6) continue;
    const Vec2 p = random_point(rng, 10.0), q = random_point(rng, 10.0), z = random_point(rng, 10.0);
    if ((p - q).norm() < 1e-9) continue;
    const auto cfg = z_configs(v, p, q, z, triangle_side(p, q, z));
    CHECK(cfg.P.row(1).norm() == doctest::Approx(0.0));
    CHECK((cfg.Q - cfg.P.transpose()).norm() == doctest::Approx(0.0));
    const double r1 = (p - q).norm();
    for (int s = 0; s < 8; ++s) {
      const Vec2 x = random_unit(rng);
      CHECK(std::abs(perp_ccw(v).dot(cfg.Q * x)) < 1e-9 * (1.0 + r1));
      CHECK((cfg.P * x - cfg.Q * x).norm() == doctest::Approx(r1).epsilon(1e-9));
      CHECK(std::abs((cfg.P * x).y()) < 1e-12);
    }
  }
}

TEST_CASE("z_configs covers every feasible placement") {
  // Lemma-5-style completeness: any placement with p' on the x-axis and q'
  // on span{v} at distance r1 equals (Px, Qx) for some unit x.
  auto rng = make_rng(409);
  for (int t = 0; t < 200; ++t) {
    Vec2 v = random_unit(rng);
    if (std::abs(v.y()) < 1e-3) continue;
    const Vec2 p = random_point(rng, 10.0), q = random_point(rng, 10.0), z = random_point(rng, 10.0);
    const double r1 = (p - q).norm();
    if (r1 < 1e-6) continue;
    const auto cfg = z_configs(v, p, q, z, triangle_side(p, q, z));

    std::uniform_real_distribution<double> alpha_pick(-0.99, 0.99);
    const double alpha = alpha_pick(rng) * r1 / std::abs(v.y());
    const double disc = r1 * r1 - alpha * alpha * v.y() * v.y();
    REQUIRE(disc >= 0.0);
    const double tq = alpha * v.x() + (rng() % 2 ? 1.0 : -1.0) * std::sqrt(disc);
    const Vec2 p_placed(alpha, 0.0);
    const Vec2 q_placed = tq * v;
    REQUIRE((p_placed - q_placed).norm() == doctest::Approx(r1).epsilon(1e-9));

    const double x1 = tq * v.y() / r1;
    const double x2 = alpha / r1 - (v.x() / v.y()) * x1;
    const Vec2 x(x1, x2);
    CHECK(x.norm() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK((cfg.P * x - p_placed).norm() < 1e-9);
    CHECK((cfg.Q * x - q_placed).norm() < 1e-9);
  }
}

TEST_CASE("z_configs degenerate triangle is side independent") {
  const Vec2 v(0.6, 0.8), p(0, 0), q(4, 0), z(1, 0);  // z on segment p-q
  const auto plus = z_configs(v, p, q, z, 1);
  const auto minus = z_configs(v, p, q, z, -1);
  CHECK((plus.Z - minus.Z).norm() < 1e-12);
}

TEST_CASE("z_configs preconditions") {
  CHECK_THROWS_AS(z_configs(Vec2(1, 0), Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), 1), std::invalid_argument);
  CHECK_THROWS_AS(z_configs(Vec2(0, 1), Vec2(1, 1), Vec2(1, 1), Vec2(0, 1), 1), std::invalid_argument);
  CHECK_THROWS_AS(z_configs(Vec2(0, 2), Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), 1), std::invalid_argument);
}

TEST_CASE("line frame round trip") {
  auto rng = make_rng(419);
  for (int t = 0; t < 100; ++t) {
    const auto lj = random_line(rng), lk = random_line(rng);
    if (std::abs(lj.normal.dot(lk.normal)) > 1.0 - 1e-6) continue;
    const auto f = LineFrame::from_lines(lj, lk);
    const Vec2 p = random_point(rng);
    CHECK((f.from_frame(f.to_frame(p)) - p).norm() < 1e-10);
    // l_j becomes the x-axis, l_k passes through the origin
    const auto ljf = f.line_to_frame(lj);
    CHECK(std::abs(std::abs(ljf.normal.y()) - 1.0) < 1e-12);
    CHECK(std::abs(ljf.offset) < 1e-9);
    CHECK(std::abs(f.line_to_frame(lk).offset) < 1e-9);
  }
}

TEST_CASE("exact recovery on zero-residual instances") {
  auto rng = make_rng(431);
  const auto spec = CostSpec::make(2.0, LipSpec::power(1.0), OuterSpec::sum());
  for (int t = 0; t < 20; ++t) {
    const auto planted = make_planted(rng, 6);
    const double scale = instance_scale(planted.pairs);
    const auto C = align_candidates(planted.pairs);
    const auto [a, cost] = best_candidate(planted.pairs, C, spec);
    CHECK(cost <= 1e-8 * scale);
  }
}

TEST_CASE("candidate count bound and on-line postconditions") {
  auto rng = make_rng(433);
  const auto A = random_pairs(rng, 10);
  const auto C = align_candidates(A);
  CHECK(C.size() <= candidate_count_bound(A.size()));
  CHECK(C.size() == count_candidates(A));
  const double tol = 1e-8 * instance_scale(A);

  bool saw_plus = false, saw_minus = false;
  for (std::size_t i = 0; i < C.size(); ++i) {
    const auto& a = C.alignments[i];
    const auto& info = C.provenance[i];
    CHECK(a.is_valid(1e-9));
    const std::size_t j = static_cast<std::size_t>(info.j), k = static_cast<std::size_t>(info.k);
    CHECK(point_line_distance(a.apply(A.points[j]), A.lines[j], 2.0) <= tol);
    if (info.branch == Branch::NonParallel) {
      CHECK(point_line_distance(a.apply(A.points[k]), A.lines[k], 2.0) <= tol);
      saw_plus |= info.side == 1;
      saw_minus |= info.side == -1;
    }
  }
  CHECK(saw_plus);
  CHECK(saw_minus);
}

TEST_CASE("parallel branch matches 1-D rotation brute force") {
  auto rng = make_rng(439);
  // all lines share a normal; points sit on their lines, then translate along
  // the common direction plus a lateral offset
  const Vec2 normal = random_unit(rng);
  PairSet A;
  std::uniform_real_distribution<double> off(0.0, 10.0);
  std::uniform_real_distribution<double> along(-50.0, 50.0);
  for (int i = 0; i < 5; ++i) {
    const auto l = PlanarLine::from(normal, off(rng));
    A.push_back(l.point_on() + along(rng) * l.direction(), l);
  }
  const Vec2 shift = 7.0 * perp_ccw(normal) + 2.5 * normal;
  for (auto& p : A.points) p += shift;

  const auto C = align_candidates(A);
  int parallel_seen = 0;
  for (std::size_t i = 0; i < C.size(); ++i) {
    const auto& info = C.provenance[i];
    if (info.branch != Branch::Parallel) continue;
    ++parallel_seen;
    const auto& a = C.alignments[i];
    const std::size_t j = static_cast<std::size_t>(info.j), k = static_cast<std::size_t>(info.k);
    CHECK(point_line_distance(a.apply(A.points[j]), A.lines[j], 2.0) < 1e-9 * instance_scale(A));

    // brute force over the rotation about the projection of p_j
    const Vec2 center = A.lines[j].project(A.points[j]);
    double best = std::numeric_limits<double>::infinity();
    for (int g = 0; g < 200000; ++g) {
      const double th = 2.0 * M_PI * g / 200000;
      const Vec2 img = Alignment::from_angle(th).apply(A.points[k] - A.points[j]) + center;
      best = std::min(best, point_line_distance(img, A.lines[k], 2.0));
    }
    const double got = point_line_distance(a.apply(A.points[k]), A.lines[k], 2.0);
    CHECK(got <= best + 1e-6 * instance_scale(A));
  }
  CHECK(parallel_seen == static_cast<int>(A.size() * (A.size() - 1)));
}

TEST_CASE("coincident point pairs still produce covering candidates") {
  auto rng = make_rng(443);
  PairSet A;
  const Vec2 shared = random_point(rng);
  A.push_back(shared, random_line(rng));
  A.push_back(shared, random_line(rng));  // duplicate point, different line
  A.push_back(random_point(rng), random_line(rng));
  const auto C = align_candidates(A);
  CHECK(C.size() > 0);
  bool coincident_seen = false;
  for (const auto& info : C.provenance) coincident_seen |= info.branch == Branch::CoincidentPoints;
  CHECK(coincident_seen);
}

TEST_CASE("best_candidate basics") {
  auto rng = make_rng(449);
  const auto A = random_pairs(rng, 5);
  const auto spec = CostSpec::make(2.0, LipSpec::power(1.0), OuterSpec::sum());
  CandidateSet single;
  single.alignments.push_back(Alignment{});
  single.provenance.push_back({});
  const auto [a, cost] = best_candidate(A, single, spec);
  CHECK((a.rotation - Mat2::Identity()).norm() == doctest::Approx(0.0));
  CHECK(cost == doctest::Approx(evaluate_cost(A, Alignment{}, spec)));
  CHECK_THROWS_AS(best_candidate(A, CandidateSet{}, spec), std::invalid_argument);
}

TEST_CASE("theorem cost bound against planted references") {
  auto rng = make_rng(457);
  const CostSpec specs[] = {CostSpec::make(2.0, LipSpec::power(1.0), OuterSpec::sum()),
                            CostSpec::make(2.0, LipSpec::power(2.0), OuterSpec::sum()),
                            CostSpec::make(1.0, LipSpec::power(1.0), OuterSpec::sum())};
  for (int t = 0; t < 100; ++t) {
    const auto planted = make_planted(rng, 8, 0.5);
    const auto C = align_candidates(planted.pairs);
    for (const auto& spec : specs) {
      const double best = best_candidate(planted.pairs, C, spec).second;
      const double reference = evaluate_cost(planted.pairs, planted.solution, spec);
      CHECK(best <= approx_factor(spec) * reference * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("per-pair factor-16 guarantee") {
  auto rng = make_rng(461);
  for (int inst = 0; inst < 25; ++inst) {
    const auto A = random_pairs(rng, 10);
    const auto C = align_candidates(A);
    for (int ref = 0; ref < 8; ++ref) {
      const auto target = random_alignment(rng);
      std::vector<double> budget(A.size());
      for (std::size_t i = 0; i < A.size(); ++i)
        budget[i] = 16.0 * point_line_distance(target.apply(A.points[i]), A.lines[i], 2.0) + 1e-9;
      bool covered = false;
      for (const auto& a : C.alignments) {
        bool ok = true;
        for (std::size_t i = 0; i < A.size() && ok; ++i)
          ok = point_line_distance(a.apply(A.points[i]), A.lines[i], 2.0) <= budget[i];
        if (ok) {
          covered = true;
          break;
        }
      }
      CHECK(covered);
    }
  }
}

TEST_CASE("solve_aligned matches materialized best and is thread stable") {
  auto rng = make_rng(463);
  const auto A = random_pairs(rng, 12);
  const auto spec = CostSpec::make(2.0, LipSpec::threshold(10.0), OuterSpec::sum());
  const auto C = align_candidates(A);
  const auto [ba, bc] = best_candidate(A, C, spec);
  const auto s1 = solve_aligned(A, spec, 1);
  const auto s2 = solve_aligned(A, spec, 2);
  CHECK(s1.candidates == C.size());
  CHECK(s1.cost == doctest::Approx(bc).epsilon(1e-12));
  CHECK(s2.cost == doctest::Approx(bc).epsilon(1e-12));
  CHECK((s1.alignment.rotation - ba.rotation).norm() < 1e-12);

  // threaded enumeration concatenates in j order: identical contents
  const auto C2 = align_candidates(A, 2);
  REQUIRE(C2.size() == C.size());
  for (std::size_t i = 0; i < C.size(); ++i) {
    CHECK(C2.alignments[i].rotation == C.alignments[i].rotation);
    CHECK(C2.alignments[i].translation == C.alignments[i].translation);
    CHECK(C2.provenance[i].j == C.provenance[i].j);
    CHECK(C2.provenance[i].l == C.provenance[i].l);
  }
  CHECK_THROWS_AS(solve_aligned(PairSet{}, spec), std::invalid_argument);
}
