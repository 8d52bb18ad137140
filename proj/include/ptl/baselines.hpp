#pragma once

#include "ptl/align.hpp"
#include "ptl/cost.hpp"
#include "ptl/geometry.hpp"

#include <cstdint>

namespace ptl {

// sum_i (v_i . (R p_i - t) - b_i)^2
double lms_objective(const PairSet& A, const Alignment& a);

// Least-mean-squares alignment: for a fixed rotation angle the optimal t
// solves a 2x2 normal-equation system, so the profiled objective is a smooth
// function of the angle alone; it is minimized by a dense grid over [0, 2pi)
// followed by Newton refinement. When every line is parallel the normal
// matrix is singular; the pseudo-inverse leaves the translation component
// along the common line direction at zero.
Alignment lms_align(const PairSet& A);

struct RansacConfig {
  double inlier_threshold = 10.0;
  double confidence = 0.99;
  int max_iterations = 10000;
  int sample_size = 3;
  std::uint64_t seed = 0;
};

enum class BaseSolver { Lms, AlignCandidates };

struct RansacResult {
  Alignment alignment;
  int inliers = 0;
  int iterations = 0;
};

// Sample-consensus loop: fit 3 random pairs with the base solver, count
// inliers at the threshold, and adapt the iteration bound
// log(1-confidence)/log(1-ratio^3). Best inlier count wins; ties go to the
// lower thresholded cost. Deterministic under the seed.
RansacResult adaptive_ransac(const PairSet& A, BaseSolver base, const RansacConfig& cfg);

// max(3, ceil(n^(1/3)))
std::size_t fast_approx_sample_count(std::size_t n);

// The experiment cost: z = 2, lip = min{x, 10}, outer = Sum.
CostSpec fast_approx_default_spec();

// Runs the candidate enumeration on a uniform sample of ~n^(1/3) pairs and
// returns the candidate that is best on the FULL set under spec.
Alignment fast_approx_align(const PairSet& A, const CostSpec& spec, std::uint64_t seed = 0);

}  // namespace ptl
