#include "ptl/coreset.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ptl {

WeightedPairSet WeightedPairSet::uniform(const PairSet& A) {
  return WeightedPairSet{A, std::vector<double>(A.size(), 1.0)};
}

void WeightedPairSet::push_back(const PlanarPoint& p, const PlanarLine& l, double w) {
  pairs.push_back(p, l);
  weights.push_back(w);
}

double weighted_sum_distance(const WeightedPairSet& A, const Alignment& a, double z) {
  double total = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i)
    total += A.weights[i] * point_line_distance(a.apply(A.pairs.points[i]), A.pairs.lines[i], z);
  return total;
}

Lift lift_pair(const PlanarPoint& p, const PlanarLine& l, double w) {
  if (!(w >= 0.0)) throw std::invalid_argument("lift_pair: weight must be >= 0");
  const Vec2 v = l.normal;
  Lift s;
  s << v.x() * p.x(), v.x() * p.y(), v.y() * p.x(), v.y() * p.y(), v.x(), v.y(), l.offset;
  return w * s;
}

Eigen::Matrix<double, 7, 1> alignment_lift(const Alignment& a) {
  Eigen::Matrix<double, 7, 1> x;
  x << a.rotation(0, 0), a.rotation(0, 1), a.rotation(1, 0), a.rotation(1, 1),
      -a.translation.x(), -a.translation.y(), -1.0;
  return x;
}

Eigen::MatrixXd lift_rows_general(const Eigen::VectorXd& p, const Eigen::MatrixXd& V,
                                  const Eigen::VectorXd& b, double w) {
  const auto d = p.size();
  if (V.cols() != d || V.rows() != d - 1 || b.size() != d - 1)
    throw std::invalid_argument("lift_rows_general: inconsistent dimensions");
  const auto width = d * d + d + 1;
  Eigen::MatrixXd rows(d - 1, width);
  for (Eigen::Index k = 0; k < d - 1; ++k) {
    for (Eigen::Index c = 0; c < d; ++c) rows.block(k, c * d, 1, d) = V(k, c) * p.transpose();
    rows.block(k, d * d, 1, d) = V.row(k);
    rows(k, width - 1) = b(k);
  }
  return w * rows;
}

Eigen::VectorXd alignment_lift_general(const Eigen::MatrixXd& R, const Eigen::VectorXd& t) {
  const auto d = t.size();
  if (R.rows() != d || R.cols() != d) throw std::invalid_argument("alignment_lift_general: bad dimensions");
  Eigen::VectorXd x(d * d + d + 1);
  for (Eigen::Index r = 0; r < d; ++r) x.segment(r * d, d) = R.row(r).transpose();
  x.segment(d * d, d) = -t;
  x(d * d + d) = -1.0;
  return x;
}

Sensitivities sensitivities_general(const Eigen::MatrixXd& rows, const std::vector<int>& pair_of_row,
                                    int n_pairs, int ambient_dim) {
  if (rows.rows() == 0 || static_cast<std::size_t>(rows.rows()) != pair_of_row.size())
    throw std::invalid_argument("sensitivities: empty input or mismatched grouping");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(rows);
  const int rank = static_cast<int>(qr.rank());
  if (rank == 0) throw std::invalid_argument("sensitivities: all rows are zero");
  // Orthonormal basis of the column space: first `rank` columns of Q. It
  // satisfies |z|_inf <= |Uz|_1, which is what the row bound needs.
  const Eigen::MatrixXd U =
      qr.householderQ() * Eigen::MatrixXd::Identity(rows.rows(), rank);

  Sensitivities out;
  out.rank = rank;
  out.per_pair = Eigen::VectorXd::Zero(n_pairs);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const double row_sens = rank * U.row(i).template lpNorm<1>();
    out.per_pair(pair_of_row[static_cast<std::size_t>(i)]) += row_sens;
  }
  out.per_pair *= std::sqrt(static_cast<double>(ambient_dim));
  out.total = out.per_pair.sum();
  return out;
}

Sensitivities sensitivities(const std::vector<Lift>& rows) {
  if (rows.empty()) throw std::invalid_argument("sensitivities: empty input");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), 7);
  std::vector<int> pair_of_row(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    pair_of_row[i] = static_cast<int>(i);
  }
  return sensitivities_general(m, pair_of_row, static_cast<int>(rows.size()), 2);
}

std::size_t coreset_sample_size(double total_sensitivity, double eps, double delta, double c, int d_vc) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("coreset_sample_size: eps must be in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("coreset_sample_size: delta must be in (0,1)");
  if (!(c > 0.0)) throw std::invalid_argument("coreset_sample_size: c must be > 0");
  const double t = std::max(total_sensitivity, 0.0);
  const double m =
      std::ceil(c * t / (eps * eps) * (d_vc * std::log(std::max(t, 2.0)) + std::log(1.0 / delta)));
  return static_cast<std::size_t>(std::max(1.0, m));
}

std::size_t SparseWeights::nonzeros() const {
  std::size_t k = 0;
  for (double x : u) k += (x > 0.0);
  return k;
}

namespace {

// Multinomial draw counts for m i.i.d. samples with the given (unnormalized)
// probabilities. Uses per-draw inversion for small m and a sequential
// binomial decomposition when m is much larger than n.
std::vector<std::size_t> sample_counts(const Eigen::VectorXd& prob, std::size_t m, std::mt19937_64& rng) {
  const std::size_t n = static_cast<std::size_t>(prob.size());
  std::vector<std::size_t> counts(n, 0);
  const double total = prob.sum();
  if (!(total > 0.0)) throw std::invalid_argument("sample_counts: zero total probability");

  if (m <= 4 * n) {
    std::vector<double> cum(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += prob(static_cast<Eigen::Index>(i));
      cum[i] = acc;
    }
    std::uniform_real_distribution<double> uni(0.0, acc);
    for (std::size_t d = 0; d < m; ++d) {
      const auto it = std::upper_bound(cum.begin(), cum.end(), uni(rng));
      counts[std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), n - 1)]++;
    }
    return counts;
  }

  std::size_t remaining = m;
  double prob_left = total;
  for (std::size_t i = 0; i < n && remaining > 0; ++i) {
    const double p = prob(static_cast<Eigen::Index>(i));
    if (p <= 0.0) continue;
    if (p >= prob_left) {
      counts[i] = remaining;
      remaining = 0;
      break;
    }
    std::binomial_distribution<std::size_t> bin(remaining, p / prob_left);
    counts[i] = bin(rng);
    remaining -= counts[i];
    prob_left -= p;
  }
  return counts;
}

SparseWeights sample_from_sensitivities(const WeightedPairSet& A, const Sensitivities& sens,
                                        std::size_t draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto counts = sample_counts(sens.per_pair, draws, rng);
  SparseWeights out;
  out.draws = draws;
  out.total_sensitivity = sens.total;
  out.u.assign(A.size(), 0.0);
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (counts[i] == 0) continue;
    const double si = sens.per_pair(static_cast<Eigen::Index>(i));
    out.u[i] = static_cast<double>(counts[i]) * sens.total * A.weights[i] /
               (si * static_cast<double>(draws));
  }
  return out;
}

Sensitivities pair_sensitivities(const WeightedPairSet& A) {
  std::vector<Lift> rows(A.size());
  for (std::size_t i = 0; i < A.size(); ++i)
    rows[i] = lift_pair(A.pairs.points[i], A.pairs.lines[i], A.weights[i]);
  return sensitivities(rows);
}

}  // namespace

SparseWeights build_coreset(const WeightedPairSet& A, const CoresetParams& params) {
  if (A.size() == 0) throw std::invalid_argument("build_coreset: empty input");
  const Sensitivities sens = pair_sensitivities(A);
  const std::size_t m = coreset_sample_size(sens.total, params.eps, params.delta, params.c, params.d_vc);
  return sample_from_sensitivities(A, sens, m, params.seed);
}

SparseWeights importance_resample(const WeightedPairSet& A, std::size_t draws, std::uint64_t seed) {
  if (A.size() == 0) throw std::invalid_argument("importance_resample: empty input");
  if (draws == 0) throw std::invalid_argument("importance_resample: zero draws");
  return sample_from_sensitivities(A, pair_sensitivities(A), draws, seed);
}

WeightedPairSet compact(const WeightedPairSet& A, const SparseWeights& sw) {
  if (sw.u.size() != A.size()) throw std::invalid_argument("compact: size mismatch");
  WeightedPairSet out;
  for (std::size_t i = 0; i < A.size(); ++i)
    if (sw.u[i] > 0.0) out.push_back(A.pairs.points[i], A.pairs.lines[i], sw.u[i]);
  return out;
}

StreamState::StreamState(StreamConfig cfg) : cfg_(cfg) {
  if (cfg_.leaf_size < 2) throw std::invalid_argument("StreamState: leaf_size must be >= 2");
  buffer_.pairs.points.reserve(cfg_.leaf_size);
}

void StreamState::insert(const PlanarPoint& p, const PlanarLine& l, double w) {
  if (buffer_.size() == cfg_.leaf_size) {
    WeightedPairSet full;
    std::swap(full, buffer_);
    reduce_into_levels(std::move(full), 0);
  }
  buffer_.push_back(p, l, w);
  ++seen_;
}

void StreamState::reduce_into_levels(WeightedPairSet bucket, std::size_t level) {
  const std::size_t target = std::max<std::size_t>(1, cfg_.leaf_size / 2);
  if (bucket.size() > target) {
    const std::uint64_t seed = cfg_.seed * 0x9e3779b97f4a7c15ULL + (++reduce_count_);
    bucket = compact(bucket, importance_resample(bucket, target, seed));
  }
  if (level >= levels_.size()) {
    levels_.resize(level + 1);
    levels_[level] = std::move(bucket);
    return;
  }
  if (levels_[level].size() == 0) {
    levels_[level] = std::move(bucket);
    return;
  }
  WeightedPairSet merged = std::move(levels_[level]);
  levels_[level] = WeightedPairSet{};
  for (std::size_t i = 0; i < bucket.size(); ++i)
    merged.push_back(bucket.pairs.points[i], bucket.pairs.lines[i], bucket.weights[i]);
  reduce_into_levels(std::move(merged), level + 1);
}

WeightedPairSet StreamState::coreset() const {
  WeightedPairSet out = buffer_;
  for (const auto& level : levels_)
    for (std::size_t i = 0; i < level.size(); ++i)
      out.push_back(level.pairs.points[i], level.pairs.lines[i], level.weights[i]);
  return out;
}

std::size_t StreamState::resident_pairs() const {
  std::size_t total = buffer_.size();
  for (const auto& level : levels_) total += level.size();
  return total;
}

int StreamState::depth() const { return static_cast<int>(levels_.size()); }

StreamState& stream_insert(StreamState& state, const PlanarPoint& p, const PlanarLine& l, double w) {
  state.insert(p, l, w);
  return state;
}

WeightedPairSet stream_coreset(const StreamState& state) { return state.coreset(); }

}  // namespace ptl
