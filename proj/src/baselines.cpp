#include "ptl/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace ptl {

double lms_objective(const PairSet& A, const Alignment& a) {
  double j = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    const double r = A.lines[i].signed_residual(a.apply(A.points[i]));
    j += r * r;
  }
  return j;
}

namespace {

struct LmsProfile {
  const PairSet& A;
  Mat2 pinv;  // pseudo-inverse of sum v v^T (theta-independent)

  explicit LmsProfile(const PairSet& set) : A(set) {
    Mat2 m = Mat2::Zero();
    for (const auto& l : set.lines) m += l.normal * l.normal.transpose();
    Eigen::SelfAdjointEigenSolver<Mat2> es(m);
    const double tol = 1e-12 * std::max(1.0, es.eigenvalues().maxCoeff());
    Mat2 dinv = Mat2::Zero();
    for (int i = 0; i < 2; ++i)
      if (es.eigenvalues()(i) > tol) dinv(i, i) = 1.0 / es.eigenvalues()(i);
    pinv = es.eigenvectors() * dinv * es.eigenvectors().transpose();
  }

  // Value and first two derivatives of the profiled objective at theta.
  struct Eval {
    double j, dj, ddj;
    Vec2 t;
  };

  Eval operator()(double theta) const {
    const double c = std::cos(theta), s = std::sin(theta);
    Mat2 rot, drot;
    rot << c, -s, s, c;
    drot << -s, -c, c, -s;
    const std::size_t n = A.size();
    Vec2 g = Vec2::Zero(), dg = Vec2::Zero(), ddg = Vec2::Zero();
    std::vector<double> cv(n), dcv(n), ddcv(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& v = A.lines[i].normal;
      const Vec2 rp = rot * A.points[i];
      cv[i] = v.dot(rp) - A.lines[i].offset;
      dcv[i] = v.dot(drot * A.points[i]);
      ddcv[i] = -v.dot(rp);
      g += cv[i] * v;
      dg += dcv[i] * v;
      ddg += ddcv[i] * v;
    }
    const Vec2 t = pinv * g, dt = pinv * dg, ddt = pinv * ddg;
    Eval e{0.0, 0.0, 0.0, t};
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& v = A.lines[i].normal;
      const double r = cv[i] - v.dot(t);
      const double dr = dcv[i] - v.dot(dt);
      const double ddr = ddcv[i] - v.dot(ddt);
      e.j += r * r;
      e.dj += 2.0 * r * dr;
      e.ddj += 2.0 * (dr * dr + r * ddr);
    }
    return e;
  }
};

}  // namespace

Alignment lms_align(const PairSet& A) {
  if (A.empty()) throw std::invalid_argument("lms_align: empty pair set");
  const LmsProfile profile(A);

  constexpr int grid = 4096;
  double best_theta = 0.0;
  double best_j = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double theta = 2.0 * M_PI * i / grid;
    const double j = profile(theta).j;
    if (j < best_j) {
      best_j = j;
      best_theta = theta;
    }
  }

  const double scale = instance_scale(A);
  const double dj_tol = 1e-12 * scale * scale;
  const double max_step = 2.0 * M_PI / grid;
  double theta = best_theta;
  for (int it = 0; it < 60; ++it) {
    const auto e = profile(theta);
    if (std::abs(e.dj) <= dj_tol) break;
    double step = (e.ddj > 0.0) ? -e.dj / e.ddj : (e.dj > 0.0 ? -max_step : max_step);
    step = std::clamp(step, -max_step, max_step);
    double next = theta + step;
    // keep the step only if it does not increase the objective
    for (int half = 0; half < 24 && profile(next).j > e.j; ++half) {
      step *= 0.5;
      next = theta + step;
    }
    if (next == theta) break;
    theta = next;
  }

  const auto e = profile(theta);
  Alignment out = Alignment::from_angle(theta);
  out.translation = e.t;
  return out;
}

namespace {

std::vector<int> sample_distinct(std::vector<int>& scratch, int count, std::mt19937_64& rng) {
  const int n = static_cast<int>(scratch.size());
  for (int i = 0; i < count; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(scratch[static_cast<std::size_t>(i)], scratch[static_cast<std::size_t>(pick(rng))]);
  }
  return {scratch.begin(), scratch.begin() + count};
}

int count_inliers(const PairSet& A, const Alignment& a, double th) {
  int c = 0;
  for (std::size_t i = 0; i < A.size(); ++i)
    c += point_line_distance(a.apply(A.points[i]), A.lines[i], 2.0) < th;
  return c;
}

double thresholded_cost(const PairSet& A, const Alignment& a, double th) {
  double c = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i)
    c += std::min(point_line_distance(a.apply(A.points[i]), A.lines[i], 2.0), th);
  return c;
}

}  // namespace

RansacResult adaptive_ransac(const PairSet& A, BaseSolver base, const RansacConfig& cfg) {
  const int n = static_cast<int>(A.size());
  if (n < cfg.sample_size) throw std::invalid_argument("adaptive_ransac: too few pairs");
  if (!(cfg.inlier_threshold > 0.0)) throw std::invalid_argument("adaptive_ransac: threshold must be > 0");
  if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0))
    throw std::invalid_argument("adaptive_ransac: confidence must be in (0,1)");

  std::mt19937_64 rng(cfg.seed);
  std::vector<int> scratch(static_cast<std::size_t>(n));
  std::iota(scratch.begin(), scratch.end(), 0);

  RansacResult best;
  best.inliers = -1;
  double best_cost = std::numeric_limits<double>::infinity();
  int bound = cfg.max_iterations;

  for (int it = 0; it < bound; ++it) {
    best.iterations = it + 1;
    const auto idx = sample_distinct(scratch, cfg.sample_size, rng);
    const PairSet subset = A.subset(idx);

    Alignment fit;
    int fit_inliers = -1;
    try {
      if (base == BaseSolver::Lms) {
        fit = lms_align(subset);
        fit_inliers = count_inliers(A, fit, cfg.inlier_threshold);
      } else {
        // Pick the subset candidate with the best consensus on the full set.
        enumerate_alignments(subset, [&](const Alignment& a, const CandidateInfo&) {
          const int c = count_inliers(A, a, cfg.inlier_threshold);
          if (c > fit_inliers) {
            fit_inliers = c;
            fit = a;
          }
        });
      }
    } catch (const std::exception&) {
      continue;  // degenerate sample; resample (bounded by the iteration cap)
    }
    if (fit_inliers < 0) continue;

    const double cost = thresholded_cost(A, fit, cfg.inlier_threshold);
    if (fit_inliers > best.inliers || (fit_inliers == best.inliers && cost < best_cost)) {
      best.inliers = fit_inliers;
      best.alignment = fit;
      best_cost = cost;
    }

    const double ratio = static_cast<double>(best.inliers) / n;
    if (ratio >= 1.0) break;
    if (ratio > 0.0) {
      const double denom = std::log(1.0 - std::pow(ratio, cfg.sample_size));
      if (denom < 0.0) {
        const double m = std::ceil(std::log(1.0 - cfg.confidence) / denom);
        bound = std::clamp(static_cast<int>(std::min(m, 1e9)), 1, cfg.max_iterations);
      }
    }
  }
  if (best.inliers < 0) throw std::runtime_error("adaptive_ransac: no usable sample found");
  return best;
}

std::size_t fast_approx_sample_count(std::size_t n) {
  const double root = std::cbrt(static_cast<double>(n));
  return std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(root - 1e-9)));
}

CostSpec fast_approx_default_spec() {
  return CostSpec::make(2.0, LipSpec::threshold(10.0), OuterSpec::sum());
}

Alignment fast_approx_align(const PairSet& A, const CostSpec& spec, std::uint64_t seed) {
  if (A.size() < 3) throw std::invalid_argument("fast_approx_align: need at least 3 pairs");
  std::mt19937_64 rng(seed);
  std::vector<int> scratch(A.size());
  std::iota(scratch.begin(), scratch.end(), 0);
  const auto count = std::min(A.size(), fast_approx_sample_count(A.size()));
  auto idx = sample_distinct(scratch, static_cast<int>(count), rng);
  std::sort(idx.begin(), idx.end());
  const CandidateSet C = align_candidates(A.subset(idx));
  return best_candidate(A, C, spec).first;
}

}  // namespace ptl
