#include "ptl/align.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace ptl {

namespace detail {

EnumContext::EnumContext(const PairSet& set) : n(set.size()), A(&set) {
  dist_sq.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dist_sq[i * n + j] = (set.points[i] - set.points[j]).squaredNorm();
  scale = instance_scale(set);
}

}  // namespace detail

int triangle_side(const Vec2& p, const Vec2& q, const Vec2& z) {
  const double c = (z - p).dot(perp_ccw(q - p));
  return c < 0.0 ? -1 : 1;
}

ZConfig z_configs(const Vec2& v, const Vec2& p, const Vec2& q, const Vec2& z, int side) {
  if (std::abs(v.norm() - 1.0) > 1e-9) throw std::invalid_argument("z_configs: v must be unit");
  if (std::abs(v.y()) <= 1e-12) throw std::invalid_argument("z_configs: v.y must be nonzero");
  if (side != 1 && side != -1) throw std::invalid_argument("z_configs: side must be +1 or -1");
  const double r1 = (p - q).norm();
  if (!(r1 > 0.0)) throw std::invalid_argument("z_configs: p and q coincide");
  const double r2 = (p - z).norm();
  const double r3 = (q - z).norm();
  const double d1 = (r1 * r1 + r2 * r2 - r3 * r3) / (2.0 * r1);
  const double d2 = std::sqrt(std::abs(r2 * r2 - d1 * d1));

  ZConfig out;
  out.P << r1 * v.x() / v.y(), r1, 0.0, 0.0;
  out.Q = out.P.transpose();
  Mat2 r90;
  r90 << 0.0, -1.0, 1.0, 0.0;
  out.Z = out.P + (d1 / r1) * (out.Q - out.P) + side * (d2 / r1) * (r90 * (out.Q - out.P));
  return out;
}

LineFrame LineFrame::from_lines(const PlanarLine& lj, const PlanarLine& lk) {
  const auto s = line_intersection(lj, lk);
  if (!s) throw std::invalid_argument("LineFrame: lines are parallel");
  LineFrame f;
  f.origin = *s;
  f.rot = rotation_to_x_axis(lj.direction());
  return f;
}

PlanarLine LineFrame::line_to_frame(const PlanarLine& l) const {
  return PlanarLine::from(rot * l.normal, l.offset - l.normal.dot(origin));
}

CandidateSet align_candidates(const PairSet& A, int threads) {
  if (A.size() < 3) throw std::invalid_argument("align_candidates: need at least 3 pairs");
  detail::EnumContext ctx(A);
  const std::size_t n = ctx.n;

  const auto run_range = [&](std::size_t j0, std::size_t j1, CandidateSet& out) {
    const auto sink = [&out](const Alignment& a, const CandidateInfo& info) {
      out.alignments.push_back(a);
      out.provenance.push_back(info);
    };
    for (std::size_t j = j0; j < j1; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (j != k) detail::enumerate_pair(ctx, j, k, sink);
  };

  if (threads <= 1 || n < 8) {
    CandidateSet out;
    out.alignments.reserve(candidate_count_bound(n) / 2);
    out.provenance.reserve(candidate_count_bound(n) / 2);
    run_range(0, n, out);
    return out;
  }

  const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<CandidateSet> parts(t);
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (std::size_t i = 0; i < t; ++i) {
    const std::size_t j0 = n * i / t, j1 = n * (i + 1) / t;
    pool.emplace_back([&, i, j0, j1] { run_range(j0, j1, parts[i]); });
  }
  for (auto& th : pool) th.join();
  CandidateSet out;
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  out.alignments.reserve(total);
  out.provenance.reserve(total);
  for (auto& p : parts) {
    out.alignments.insert(out.alignments.end(), p.alignments.begin(), p.alignments.end());
    out.provenance.insert(out.provenance.end(), p.provenance.begin(), p.provenance.end());
  }
  return out;
}

std::size_t count_candidates(const PairSet& A) {
  std::size_t count = 0;
  enumerate_alignments(A, [&count](const Alignment&, const CandidateInfo&) { ++count; });
  return count;
}

namespace {

// Residual-based evaluator: dist_z per pair is |n.(Rp - t) - b| scaled by the
// line's fixed dual-norm factor, so candidates are scored without re-deriving
// the line representation.
class CostEvaluator {
 public:
  CostEvaluator(const PairSet& A, const CostSpec& spec) : A_(A), spec_(spec) {
    spec.validate();
    inv_dual_.resize(A.size());
    for (std::size_t i = 0; i < A.size(); ++i) inv_dual_[i] = 1.0 / dual_norm(A.lines[i].normal, spec.z);
    lipped_.resize(A.size());
  }

  double operator()(const Alignment& a) {
    const std::size_t n = A_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 q = a.rotation * A_.points[i] - a.translation;
      const double d = std::abs(A_.lines[i].normal.dot(q) - A_.lines[i].offset) * inv_dual_[i];
      lipped_[i] = spec_.lip(d);
    }
    switch (spec_.outer.kind) {
      case OuterSpec::Kind::Sum: {
        double t = 0.0;
        for (double x : lipped_) t += x;
        return t;
      }
      case OuterSpec::Kind::Max: {
        double t = 0.0;
        for (double x : lipped_) t = std::max(t, x);
        return t;
      }
      case OuterSpec::Kind::TrimmedSum: {
        const int keep = static_cast<int>(n) - spec_.outer.drop;
        if (keep <= 0) return 0.0;
        scratch_ = lipped_;
        std::nth_element(scratch_.begin(), scratch_.begin() + keep - 1, scratch_.end());
        double t = 0.0;
        for (int i = 0; i < keep; ++i) t += scratch_[static_cast<std::size_t>(i)];
        return t;
      }
    }
    return 0.0;
  }

 private:
  const PairSet& A_;
  CostSpec spec_;
  std::vector<double> inv_dual_;
  std::vector<double> lipped_;
  std::vector<double> scratch_;
};

}  // namespace

std::pair<Alignment, double> best_candidate(const PairSet& A, const CandidateSet& C, const CostSpec& spec) {
  if (C.size() == 0) throw std::invalid_argument("best_candidate: empty candidate set");
  CostEvaluator eval(A, spec);
  std::size_t best = 0;
  double best_cost = eval(C.alignments[0]);
  for (std::size_t i = 1; i < C.size(); ++i) {
    const double c = eval(C.alignments[i]);
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  return {C.alignments[best], best_cost};
}

SolveOutcome solve_aligned(const PairSet& A, const CostSpec& spec, int threads) {
  if (A.size() < 3) throw std::invalid_argument("solve_aligned: need at least 3 pairs");
  detail::EnumContext ctx(A);
  const std::size_t n = ctx.n;

  struct Partial {
    Alignment best;
    double cost = std::numeric_limits<double>::infinity();
    std::size_t count = 0;
  };

  const auto run_range = [&](std::size_t j0, std::size_t j1, Partial& out) {
    CostEvaluator eval(A, spec);
    const auto sink = [&](const Alignment& a, const CandidateInfo&) {
      ++out.count;
      const double c = eval(a);
      if (c < out.cost) {
        out.cost = c;
        out.best = a;
      }
    };
    for (std::size_t j = j0; j < j1; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (j != k) detail::enumerate_pair(ctx, j, k, sink);
  };

  std::vector<Partial> parts;
  if (threads <= 1 || n < 8) {
    parts.resize(1);
    run_range(0, n, parts[0]);
  } else {
    const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    parts.resize(t);
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (std::size_t i = 0; i < t; ++i) {
      const std::size_t j0 = n * i / t, j1 = n * (i + 1) / t;
      pool.emplace_back([&, i, j0, j1] { run_range(j0, j1, parts[i]); });
    }
    for (auto& th : pool) th.join();
  }

  SolveOutcome out;
  bool have = false;
  for (const auto& p : parts) {
    out.candidates += p.count;
    if (p.count == 0) continue;
    if (!have || p.cost < out.cost) {  // earlier j-range wins ties
      out.cost = p.cost;
      out.alignment = p.best;
      have = true;
    }
  }
  if (!have) throw std::runtime_error("solve_aligned: no candidates produced");
  return out;
}

}  // namespace ptl
