#pragma once

#include "ptl/geometry.hpp"
#include "ptl/matching.hpp"

#include <cstdint>
#include <vector>

namespace ptl {

struct NoiseModel {
  double mean = 0.5;
  double sigma = 0.5;
};

struct GenConfig {
  int n = 10;
  double outlier_frac = 0.0;      // k
  double outlier_range = 200.0;   // r; outlier noise is N(r/2, r/2) per axis
  NoiseModel noise{};             // per-point noise, N(mean, sigma) per axis
  bool shuffle = false;           // permute lines; records the inverse
  std::uint64_t seed = 0;
  double point_range = 100.0;     // points drawn from [0, point_range]^2
  double offset_range = 10.0;     // line offsets from U(0, offset_range)
  double translation_range = 10.0;
};

struct Instance {
  PairSet pairs;
  Alignment planted;        // motion applied to the on-line points
  Permutation planted_perm; // identity unless shuffled
  std::vector<bool> outlier_mask;
};

// Synthetic pipeline: random lines, random points projected onto them, a
// planted rigid motion, per-point Gaussian noise, heavy noise on the outlier
// subset. Deterministic under the seed.
Instance gen_instance(const GenConfig& cfg);

// The alignment that maps the generated points back onto their lines
// (the inverse of the planted motion).
Alignment planted_solution(const Instance& inst);

}  // namespace ptl
