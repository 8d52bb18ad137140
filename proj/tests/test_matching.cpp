#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "helpers.hpp"
#include "ptl/matching.hpp"

using namespace ptl;
using ptl::testing::make_planted;
using ptl::testing::make_rng;
using ptl::testing::random_alignment;
using ptl::testing::random_pairs;

namespace {

double assignment_total(const Eigen::MatrixXd& m, const Permutation& pi) {
  double t = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i)
    t += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(pi[i]));
  return t;
}

// exhaustive assignment oracle
double brute_force_best(const Eigen::MatrixXd& m, Permutation* arg = nullptr) {
  Permutation pi(static_cast<std::size_t>(m.rows()));
  std::iota(pi.begin(), pi.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    const double t = assignment_total(m, pi);
    if (t < best) {
      best = t;
      if (arg) *arg = pi;
    }
  } while (std::next_permutation(pi.begin(), pi.end()));
  return best;
}

}  // namespace

TEST_CASE("hungarian simple cases") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 2, 1;
  auto pi = hungarian(m);
  CHECK(pi == Permutation{0, 1});
  CHECK(assignment_total(m, pi) == doctest::Approx(2.0));

  m << 0, 1, 0, 2;
  pi = hungarian(m);
  CHECK(pi == Permutation{1, 0});
  CHECK(assignment_total(m, pi) == doctest::Approx(1.0));

  Eigen::MatrixXd bad(2, 3);
  bad.setZero();
  CHECK_THROWS_AS(hungarian(bad), std::invalid_argument);
  Eigen::MatrixXd nonfinite(2, 2);
  nonfinite << 0, 1, std::numeric_limits<double>::infinity(), 2;
  CHECK_THROWS_AS(hungarian(nonfinite), std::invalid_argument);
}

TEST_CASE("hungarian equals brute force") {
  auto rng = make_rng(503);
  std::uniform_real_distribution<double> entry(0.0, 10.0);
  for (int t = 0; t < 250; ++t) {
    const int n = 2 + static_cast<int>(rng() % 6);  // up to 7
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = entry(rng);
    const auto pi = hungarian(m);
    CHECK(is_permutation(pi));
    CHECK(assignment_total(m, pi) == doctest::Approx(brute_force_best(m)).epsilon(1e-12));
  }
}

TEST_CASE("optimal_matching behaviour") {
  const auto spec = CostSpec::make(2.0, LipSpec::power(1.0), OuterSpec::sum());

  // points already nearest their own lines with large margins
  PairSet A;
  A.push_back(Vec2(10, 0.1), PlanarLine::from(Vec2(0, 1), 0.0));
  A.push_back(Vec2(0.1, 50), PlanarLine::from(Vec2(1, 0), 0.0));
  CHECK(optimal_matching(A, Alignment{}, spec) == Permutation{0, 1});

  // two points with swapped lines
  PairSet B;
  B.push_back(Vec2(0.1, 50), PlanarLine::from(Vec2(0, 1), 0.0));
  B.push_back(Vec2(10, 0.1), PlanarLine::from(Vec2(1, 0), 0.0));
  CHECK(optimal_matching(B, Alignment{}, spec) == Permutation{1, 0});

  CHECK_THROWS_AS(
      optimal_matching(A, Alignment{}, CostSpec::make(2.0, LipSpec::power(1.0), OuterSpec::max())),
      std::invalid_argument);

  // n = 5 random, against the exhaustive oracle
  auto rng = make_rng(509);
  for (int t = 0; t < 40; ++t) {
    const auto C = random_pairs(rng, 5);
    const auto a = random_alignment(rng);
    const auto pi = optimal_matching(C, a, spec);
    Eigen::MatrixXd m(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        m(i, j) = point_line_distance(a.apply(C.points[static_cast<std::size_t>(i)]),
                                      C.lines[static_cast<std::size_t>(j)], 2.0);
    CHECK(assignment_total(m, pi) == doctest::Approx(brute_force_best(m)).epsilon(1e-12));
  }
}

TEST_CASE("rematching never hurts") {
  auto rng = make_rng(521);
  const auto spec = CostSpec::make(2.0, LipSpec::power(1.0), OuterSpec::sum());
  for (int t = 0; t < 60; ++t) {
    const auto A = random_pairs(rng, 6);
    const auto a = random_alignment(rng);
    const auto best_pi = optimal_matching(A, a, spec);
    const double best_cost = evaluate_cost(permuted(A, best_pi), a, spec);
    Permutation pi(A.size());
    std::iota(pi.begin(), pi.end(), 0);
    std::shuffle(pi.begin(), pi.end(), rng);
    CHECK(best_cost <= evaluate_cost(permuted(A, pi), a, spec) + 1e-9);
  }
}

namespace {

struct ShuffledPlanted {
  PairSet pairs;
  Alignment solution;
  Permutation truth;
};

ShuffledPlanted make_shuffled(std::mt19937_64& rng, std::size_t n, double noise) {
  const auto planted = make_planted(rng, n, noise);
  ShuffledPlanted out;
  out.solution = planted.solution;
  out.pairs.points = planted.pairs.points;
  Permutation sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::shuffle(sigma.begin(), sigma.end(), rng);
  out.pairs.lines.resize(n);
  out.truth.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.pairs.lines[j] = planted.pairs.lines[static_cast<std::size_t>(sigma[j])];
    out.truth[static_cast<std::size_t>(sigma[j])] = static_cast<int>(j);
  }
  return out;
}

}  // namespace

TEST_CASE("align_and_match recovers zero-residual instances") {
  auto rng = make_rng(523);
  const auto spec = CostSpec::make(2.0, LipSpec::power(1.0), OuterSpec::sum());

  // n=3 identity planted, identity matching
  {
    auto planted = make_planted(rng, 3);
    for (auto& p : planted.pairs.points) p = planted.solution.apply(p);  // undo the motion
    const auto res = align_and_match(planted.pairs, spec, MatchOptions{});
    CHECK(res.cost <= 1e-8 * instance_scale(planted.pairs));
  }

  // n=4 with a planted permutation and rigid motion
  for (int t = 0; t < 5; ++t) {
    const auto inst = make_shuffled(rng, 4, 0.0);
    const auto res = align_and_match(inst.pairs, spec, MatchOptions{});
    CHECK(res.cost <= 1e-7 * instance_scale(inst.pairs));
    CHECK(res.permutation == inst.truth);
    CHECK(res.mode == MatchMode::Exact);
  }
}

TEST_CASE("align_and_match exact equals sampled with full budget") {
  auto rng = make_rng(541);
  const auto spec = CostSpec::make(2.0, LipSpec::power(1.0), OuterSpec::sum());
  const auto inst = make_shuffled(rng, 4, 0.3);
  const auto exact = align_and_match(inst.pairs, spec, MatchOptions{MatchMode::Exact, 0, 0, 8});
  MatchOptions full_budget{MatchMode::Sampled, 4096, 0, 8};  // 4^6 tuples
  const auto sampled = align_and_match(inst.pairs, spec, full_budget);
  CHECK(exact.cost == doctest::Approx(sampled.cost).epsilon(1e-12));
  CHECK(exact.permutation == sampled.permutation);
  CHECK((exact.alignment.rotation - sampled.alignment.rotation).norm() < 1e-12);
  CHECK(sampled.mode == MatchMode::Exact);
}

TEST_CASE("align_and_match theorem bound on noisy instances") {
  auto rng = make_rng(547);
  const auto spec = CostSpec::make(2.0, LipSpec::power(1.0), OuterSpec::sum());
  const double factor = approx_factor(spec);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 4 + (t % 2);
    const auto inst = make_shuffled(rng, n, 0.5);
    const auto res = align_and_match(inst.pairs, spec, MatchOptions{});
    const double planted_cost = evaluate_cost(permuted(inst.pairs, inst.truth), inst.solution, spec);
    CHECK(res.cost <= factor * planted_cost * (1.0 + 1e-9));
    CHECK(evaluate_cost(permuted(inst.pairs, res.permutation), res.alignment, spec) ==
          doctest::Approx(res.cost).epsilon(1e-9));
  }
}

TEST_CASE("align_and_match guards") {
  auto rng = make_rng(557);
  const auto A = random_pairs(rng, 9);
  const auto spec = CostSpec::make(2.0, LipSpec::power(1.0), OuterSpec::sum());
  CHECK_THROWS_AS(align_and_match(A, spec, MatchOptions{}), std::invalid_argument);  // over cap
  const auto small = random_pairs(rng, 2);
  CHECK_THROWS_AS(align_and_match(small, spec, MatchOptions{}), std::invalid_argument);
  CHECK_THROWS_AS(
      align_and_match(random_pairs(rng, 4),
                      CostSpec::make(2.0, LipSpec::power(1.0), OuterSpec::max()), MatchOptions{}),
      std::invalid_argument);
}
