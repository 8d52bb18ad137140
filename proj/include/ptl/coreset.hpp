#pragma once

#include "ptl/geometry.hpp"

#include <cstdint>
#include <vector>

namespace ptl {

struct WeightedPairSet {
  PairSet pairs;
  std::vector<double> weights;

  std::size_t size() const { return pairs.size(); }
  static WeightedPairSet uniform(const PairSet& A);
  void push_back(const PlanarPoint& p, const PlanarLine& l, double w);
};

// sum_i w_i * dist_z(R p_i - t, l_i)
double weighted_sum_distance(const WeightedPairSet& A, const Alignment& a, double z = 2.0);

// For d = 2 a pair lifts to a single 7-vector
//   s = w * (v1*p^T | v2*p^T | v^T | b)
// and an alignment lifts to x = (R_row1 | R_row2 | -t^T | -1), giving the
// exact identity |x . s| = w * dist(Rp - t, l) for every alignment.
using Lift = Eigen::Matrix<double, 7, 1>;

Lift lift_pair(const PlanarPoint& p, const PlanarLine& l, double w);
Eigen::Matrix<double, 7, 1> alignment_lift(const Alignment& a);

// General-dimension forms (d - 1 lifted rows of length d^2 + d + 1 per pair;
// the line is {q : V q = b} with orthonormal rows of V).
Eigen::MatrixXd lift_rows_general(const Eigen::VectorXd& p, const Eigen::MatrixXd& V,
                                  const Eigen::VectorXd& b, double w);
Eigen::VectorXd alignment_lift_general(const Eigen::MatrixXd& R, const Eigen::VectorXd& t);

struct Sensitivities {
  Eigen::VectorXd per_pair;  // s'_i, a valid upper bound on each pair's max cost share
  double total = 0.0;        // t = sum_i s'_i
  int rank = 0;              // rank of the stacked lift matrix
};

// Upper bounds via an orthonormal basis U of the stacked lift matrix:
// row sensitivity rank * |u_row|_1, pair sensitivity sqrt(d) * sum of its
// rows. Throws if every row is zero.
Sensitivities sensitivities(const std::vector<Lift>& rows);
Sensitivities sensitivities_general(const Eigen::MatrixXd& rows, const std::vector<int>& pair_of_row,
                                    int n_pairs, int ambient_dim);

struct CoresetParams {
  double eps = 0.1;
  double delta = 0.1;
  double c = 1.0;   // sampling constant; calibrated empirically
  int d_vc = 7;     // VC parameter (defaults to the lift dimension)
  std::uint64_t seed = 0;
};

// ceil(c * t/eps^2 * (d_vc * log(max(t,2)) + log(1/delta)))
std::size_t coreset_sample_size(double total_sensitivity, double eps, double delta, double c, int d_vc);

struct SparseWeights {
  std::vector<double> u;
  std::size_t draws = 0;
  double total_sensitivity = 0.0;
  std::size_t nonzeros() const;
};

// i.i.d. sampling with replacement, proportional to sensitivity; repeat draws
// accumulate weight t*w_i/(s'_i * m). Deterministic under the seed.
SparseWeights build_coreset(const WeightedPairSet& A, const CoresetParams& params);

// Same sampler with an explicit draw count (used by the streaming reducer).
SparseWeights importance_resample(const WeightedPairSet& A, std::size_t draws, std::uint64_t seed);

// Pairs carrying non-zero coreset weight.
WeightedPairSet compact(const WeightedPairSet& A, const SparseWeights& sw);

// Merge-and-reduce stream: a buffer of raw pairs plus one compressed bucket
// per tree level. A full buffer becomes a level-0 bucket; two buckets on the
// same level merge and re-compress one level up. Resident size stays at
// O(leaf_size * log n).
struct StreamConfig {
  std::size_t leaf_size = 512;   // buffer capacity; buckets are half this
  double eps_level = 0.1;        // per-level accuracy target, for reporting
  double delta_level = 0.1;
  std::uint64_t seed = 0;
};

class StreamState {
 public:
  explicit StreamState(StreamConfig cfg);

  void insert(const PlanarPoint& p, const PlanarLine& l, double w = 1.0);
  WeightedPairSet coreset() const;          // union of buffer and all buckets
  std::size_t resident_pairs() const;
  std::size_t pairs_seen() const { return seen_; }
  int depth() const;                        // number of levels in use
  const StreamConfig& config() const { return cfg_; }

 private:
  void reduce_into_levels(WeightedPairSet bucket, std::size_t level);

  StreamConfig cfg_;
  WeightedPairSet buffer_;
  std::vector<WeightedPairSet> levels_;  // empty set == vacant slot
  std::size_t seen_ = 0;
  std::uint64_t reduce_count_ = 0;
};

StreamState& stream_insert(StreamState& state, const PlanarPoint& p, const PlanarLine& l, double w = 1.0);
WeightedPairSet stream_coreset(const StreamState& state);

}  // namespace ptl
