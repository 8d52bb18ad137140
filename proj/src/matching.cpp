#include "ptl/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace ptl {

bool is_permutation(const Permutation& pi) {
  std::vector<char> seen(pi.size(), 0);
  for (int x : pi) {
    if (x < 0 || x >= static_cast<int>(pi.size()) || seen[static_cast<std::size_t>(x)]) return false;
    seen[static_cast<std::size_t>(x)] = 1;
  }
  return true;
}

PairSet permuted(const PairSet& A, const Permutation& pi) {
  if (pi.size() != A.size() || !is_permutation(pi)) throw std::invalid_argument("permuted: invalid permutation");
  PairSet out;
  out.points = A.points;
  out.lines.resize(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) out.lines[i] = A.lines[static_cast<std::size_t>(pi[i])];
  return out;
}

Permutation hungarian(const Eigen::MatrixXd& cost) {
  if (cost.rows() == 0 || cost.rows() != cost.cols())
    throw std::invalid_argument("hungarian: matrix must be square and non-empty");
  if (!cost.allFinite()) throw std::invalid_argument("hungarian: matrix entries must be finite");
  const int n = static_cast<int>(cost.rows());
  constexpr double inf = std::numeric_limits<double>::infinity();

  // Shortest-augmenting-path formulation with row/column potentials.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  Permutation pi(static_cast<std::size_t>(n), 0);
  for (int j = 1; j <= n; ++j) pi[static_cast<std::size_t>(p[j] - 1)] = j - 1;
  return pi;
}

namespace {

Eigen::MatrixXd assignment_matrix(const PairSet& A, const Alignment& a, const CostSpec& spec) {
  const int n = static_cast<int>(A.size());
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    const Vec2 q = a.apply(A.points[static_cast<std::size_t>(i)]);
    for (int j = 0; j < n; ++j)
      m(i, j) = spec.lip(point_line_distance(q, A.lines[static_cast<std::size_t>(j)], spec.z));
  }
  return m;
}

void require_sum_outer(const CostSpec& spec, const char* who) {
  if (spec.outer.kind != OuterSpec::Kind::Sum)
    throw std::invalid_argument(std::string(who) + ": matching requires outer == Sum");
}

struct AlignmentKey {
  std::int64_t theta, tx, ty;
  bool operator==(const AlignmentKey&) const = default;
};

struct AlignmentKeyHash {
  std::size_t operator()(const AlignmentKey& k) const {
    std::size_t h = std::hash<std::int64_t>()(k.theta);
    h ^= std::hash<std::int64_t>()(k.tx) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::int64_t>()(k.ty) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

AlignmentKey quantize(const Alignment& a) {
  constexpr double q = 1e10;  // 1e-10 resolution
  return {static_cast<std::int64_t>(std::llround(a.angle() * q)),
          static_cast<std::int64_t>(std::llround(a.translation.x() * q)),
          static_cast<std::int64_t>(std::llround(a.translation.y() * q))};
}

}  // namespace

Permutation optimal_matching(const PairSet& A, const Alignment& a, const CostSpec& spec) {
  if (A.empty()) throw std::invalid_argument("optimal_matching: empty pair set");
  spec.validate();
  require_sum_outer(spec, "optimal_matching");
  return hungarian(assignment_matrix(A, a, spec));
}

MatchResult align_and_match(const PairSet& A, const CostSpec& spec, const MatchOptions& opt) {
  const std::size_t n = A.size();
  if (n < 3) throw std::invalid_argument("align_and_match: need at least 3 pairs");
  spec.validate();
  require_sum_outer(spec, "align_and_match");

  const std::size_t cells = n * n;  // one cell per (point, line) pairing
  double tuple_space = std::pow(static_cast<double>(n), 6.0);
  const bool exact = opt.mode == MatchMode::Exact ||
                     (opt.budget > 0 && static_cast<double>(opt.budget) >= tuple_space);
  if (opt.mode == MatchMode::Exact && static_cast<int>(n) > opt.exact_cap)
    throw std::invalid_argument("align_and_match: n exceeds the exact-mode cap (raise exact_cap to override)");
  if (!exact && opt.budget == 0)
    throw std::invalid_argument("align_and_match: sampled mode needs a positive budget");

  std::unordered_set<AlignmentKey, AlignmentKeyHash> seen;
  std::vector<Alignment> pool;
  PairSet triple;
  triple.points.resize(3);
  triple.lines.resize(3);

  const auto collect = [&](std::size_t c1, std::size_t c2, std::size_t c3) {
    const std::size_t cs[3] = {c1, c2, c3};
    for (int t = 0; t < 3; ++t) {
      triple.points[static_cast<std::size_t>(t)] = A.points[cs[t] / n];
      triple.lines[static_cast<std::size_t>(t)] = A.lines[cs[t] % n];
    }
    enumerate_alignments(triple, [&](const Alignment& a, const CandidateInfo&) {
      if (seen.insert(quantize(a)).second) pool.push_back(a);
    });
  };

  if (exact) {
    // The pooled set over ordered 6-tuples equals the union over unordered
    // triples of (point, line) cells; enumerate those directly.
    for (std::size_t c1 = 0; c1 < cells; ++c1)
      for (std::size_t c2 = c1; c2 < cells; ++c2)
        for (std::size_t c3 = c2; c3 < cells; ++c3) collect(c1, c2, c3);
  } else {
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::size_t> cell(0, cells - 1);
    for (std::uint64_t it = 0; it < opt.budget; ++it) collect(cell(rng), cell(rng), cell(rng));
  }
  if (pool.empty()) throw std::runtime_error("align_and_match: no candidate alignments produced");

  MatchResult best;
  best.cost = std::numeric_limits<double>::infinity();
  best.mode = exact ? MatchMode::Exact : MatchMode::Sampled;
  for (const auto& a : pool) {
    const Permutation pi = optimal_matching(A, a, spec);
    const double c = evaluate_cost(permuted(A, pi), a, spec);
    if (c < best.cost) {
      best.cost = c;
      best.alignment = a;
      best.permutation = pi;
    }
  }
  return best;
}

}  // namespace ptl
