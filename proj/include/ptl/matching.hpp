#pragma once

#include "ptl/align.hpp"
#include "ptl/cost.hpp"
#include "ptl/geometry.hpp"

#include <cstdint>
#include <vector>

namespace ptl {

// pi[i] is the line index matched to point i; always a bijection on [n].
using Permutation = std::vector<int>;

bool is_permutation(const Permutation& pi);

// A_pi: pair point i with line pi[i].
PairSet permuted(const PairSet& A, const Permutation& pi);

// Exact minimum-cost assignment (O(n^3) shortest augmenting paths).
// Requires a square matrix of finite entries.
Permutation hungarian(const Eigen::MatrixXd& cost);

// Assignment matrix M(i,j) = lip(D_z((p_i, l_j), a)) fed to hungarian, so the
// assignment objective equals the framework cost exactly. Restricted to
// outer == Sum.
Permutation optimal_matching(const PairSet& A, const Alignment& a, const CostSpec& spec);

enum class MatchMode { Exact, Sampled };

struct MatchOptions {
  MatchMode mode = MatchMode::Exact;
  std::uint64_t budget = 0;      // sampled mode: number of random 6-tuples
  std::uint64_t seed = 0;
  int exact_cap = 8;             // guard against the O(n^9) exact loop
};

struct MatchResult {
  Alignment alignment;
  Permutation permutation;
  double cost = 0.0;
  MatchMode mode = MatchMode::Exact;
};

// Simultaneous alignment and matching: pools the candidate alignments of
// every point-triple / line-triple combination, computes the optimal matching
// for each pooled alignment, and returns the best. Sampled mode runs the same
// pipeline over random 6-tuples (no guarantee); a budget covering the whole
// tuple space falls back to the exact enumeration.
MatchResult align_and_match(const PairSet& A, const CostSpec& spec, const MatchOptions& opt);

}  // namespace ptl
