#pragma once

#include "ptl/circle_opt.hpp"
#include "ptl/cost.hpp"
#include "ptl/geometry.hpp"

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ptl {

// Output of the triangle-configuration subroutine: matrices P, Q, Z such
// that sweeping a unit vector x sweeps exactly the placements of the input
// triangle (p, q, z) with p on the x-axis and q on span{v}. P x is always on
// the x-axis, Q = P^T keeps Q x on span{v}, and z rides along as Z x.
struct ZConfig {
  Mat2 P, Q, Z;
};

// side selects which of the two circle-circle intersection points z maps to;
// it matches the sign of (z - p) . perp_ccw(q - p) of the input triangle.
// Requires |v| = 1 with v.y != 0, and p != q.
ZConfig z_configs(const Vec2& v, const Vec2& p, const Vec2& q, const Vec2& z, int side);

// Sign of (z - p) . perp_ccw(q - p); returns +1 for degenerate (collinear) z.
int triangle_side(const Vec2& p, const Vec2& q, const Vec2& z);

enum class Branch : std::uint8_t { NonParallel, Parallel, CoincidentPoints };

struct CandidateInfo {
  std::int32_t j = 0, k = 0, l = 0;  // l is -1 for the parallel branch
  Branch branch = Branch::NonParallel;
  std::int8_t side = 0;  // +1 / -1 for the non-parallel branch, else 0
};

struct CandidateSet {
  std::vector<Alignment> alignments;
  std::vector<CandidateInfo> provenance;
  std::size_t size() const { return alignments.size(); }
};

// Upper bound on |C|: up to 2 sides x 2 circle solutions per (j,k,l) plus one
// parallel candidate per (j,k).
inline std::size_t candidate_count_bound(std::size_t n) { return 4 * n * n * (n - 1) + n * n; }

// Working frame for a pair of non-parallel lines: the intersection point
// becomes the origin and the first line becomes the x-axis.
struct LineFrame {
  Mat2 rot = Mat2::Identity();
  Vec2 origin = Vec2::Zero();

  static LineFrame from_lines(const PlanarLine& lj, const PlanarLine& lk);
  Vec2 to_frame(const Vec2& q) const { return rot * (q - origin); }
  Vec2 from_frame(const Vec2& y) const { return rot.transpose() * y + origin; }
  // Line in frame coordinates, re-normalized so its offset is >= 0.
  PlanarLine line_to_frame(const PlanarLine& l) const;
};

namespace detail {

struct EnumContext {
  std::size_t n = 0;
  std::vector<double> dist_sq;  // n x n pairwise squared point distances
  double scale = 1.0;
  const PairSet* A = nullptr;

  explicit EnumContext(const PairSet& set);
  double d2(std::size_t a, std::size_t b) const { return dist_sq[a * n + b]; }
};

// Enumerates the candidates of one (j, k) pair into the sink. The math is
// kept in raw doubles: this loop dominates the O(n^3) solve.
template <typename Sink>
void enumerate_pair(const EnumContext& ctx, std::size_t j, std::size_t k, Sink&& sink) {
  const PairSet& A = *ctx.A;
  const Vec2 pj = A.points[j], pk = A.points[k];
  const Vec2 vj = A.lines[j].normal, vk = A.lines[k].normal;
  const double bj = A.lines[j].offset, bk = A.lines[k].offset;
  const double coincident_tol = 1e-8 * ctx.scale;
  const double degenerate_tol = 1e-12 * ctx.scale;

  const auto emit_rotation_about = [&](const Vec2& center, double cr, double sr, CandidateInfo info) {
    const double h = std::hypot(cr, sr);
    if (h > 0.0) {
      cr /= h;
      sr /= h;
    } else {
      cr = 1.0;
      sr = 0.0;
    }
    Alignment out;
    out.rotation << cr, -sr, sr, cr;
    out.translation = out.rotation * pj - center;
    sink(out, info);
  };

  if (std::abs(vj.dot(vk)) > 1.0 - 1e-12) {
    // Parallel lines: place p_j on l_j, then rotate about it to bring p_k as
    // close as possible to l_k. A single deterministic member of the argmin
    // is emitted (the smaller rotation).
    const Vec2 center = pj - (vj.dot(pj) - bj) * vj;
    const Vec2 u = pk - pj;
    const double nu = u.norm();
    double cr = 1.0, sr = 0.0;
    if (nu > coincident_tol) {
      const CircleConstraint c = CircleConstraint::from(nu * vk, bk - vk.dot(center));
      const CircleMinima m = min_abs_affine_on_circle(c);
      const Vec2 uh = u / nu;
      cr = uh.dot(m.points[0]);
      sr = uh.x() * m.points[0].y() - uh.y() * m.points[0].x();
      if (m.count == 2) {
        const double cr2 = uh.dot(m.points[1]);
        const double sr2 = uh.x() * m.points[1].y() - uh.y() * m.points[1].x();
        if (cr2 > cr || (cr2 == cr && sr2 > sr)) {
          cr = cr2;
          sr = sr2;
        }
      }
    }
    emit_rotation_about(center, cr, sr, {int(j), int(k), -1, Branch::Parallel, 0});
    return;
  }

  // Intersection of l_j and l_k.
  const double det = vj.x() * vk.y() - vj.y() * vk.x();
  const Vec2 s((vk.y() * bj - vj.y() * bk) / det, (vj.x() * bk - vk.x() * bj) / det);

  const double r1sq = ctx.d2(j, k);
  if (r1sq <= coincident_tol * coincident_tol) {
    // p_j and p_k coincide, so both on-line constraints pin the point to s;
    // the remaining freedom is a rotation about s.
    for (std::size_t l = 0; l < ctx.n; ++l) {
      const Vec2 w = A.points[l] - pj;
      const double nw = w.norm();
      if (nw <= coincident_tol) continue;
      const Vec2 vl = A.lines[l].normal;
      const CircleConstraint c = CircleConstraint::from(nw * vl, A.lines[l].offset - vl.dot(s));
      const CircleMinima m = min_abs_affine_on_circle(c);
      const Vec2 wh = w / nw;
      for (int t = 0; t < m.count; ++t) {
        const double cr = wh.dot(m.points[t]);
        const double sr = wh.x() * m.points[t].y() - wh.y() * m.points[t].x();
        emit_rotation_about(s, cr, sr, {int(j), int(k), int(l), Branch::CoincidentPoints, 0});
      }
    }
    return;
  }

  // Frame: s at the origin, l_j along the x-axis.
  const Vec2 dj = perp_ccw(vj);                    // direction of l_j
  const double rx = dj.x(), ry = dj.y();           // rot rows: (rx,ry), (-ry,rx)
  const Vec2 dk = perp_ccw(vk);
  const double ux = rx * dk.x() + ry * dk.y();     // rot * dir(l_k)
  const double uy = -ry * dk.x() + rx * dk.y();
  // uy == sin(angle between the lines); the parallel guard keeps it away
  // from zero.
  const double slope = ux / uy;
  const double r1 = std::sqrt(r1sq);
  const double inv2r1 = 0.5 / r1;
  const Vec2 dp = pk - pj;

  for (std::size_t l = 0; l < ctx.n; ++l) {
    const double r2sq = ctx.d2(j, l);
    const double r3sq = ctx.d2(k, l);
    const double d1 = (r1sq + r2sq - r3sq) * inv2r1;
    const double d2v = std::sqrt(std::abs(r2sq - d1 * d1));

    const Vec2 vl = A.lines[l].normal;
    double vpx = rx * vl.x() + ry * vl.y();        // rot * v_l
    double vpy = -ry * vl.x() + rx * vl.y();
    double cl = A.lines[l].offset - vl.dot(s);
    if (cl < 0.0) {
      vpx = -vpx;
      vpy = -vpy;
      cl = -cl;
    }

    // a(side) = Z(side)^T v' with Z(side) = B - side*d2*I,
    // B = [[r1*slope, r1-d1], [d1, 0]].
    const double bvx = r1 * slope * vpx + d1 * vpy;
    const double bvy = (r1 - d1) * vpx;

    for (int side = 1; side >= -1; side -= 2) {
      const double axv = bvx - side * d2v * vpx;
      const double ayv = bvy - side * d2v * vpy;
      const double nasq = axv * axv + ayv * ayv;
      const double na = std::sqrt(nasq);
      if (na <= degenerate_tol) continue;  // v_l^T Z vanishes; other triples cover this l

      const double beta = cl / na;
      const double ahx = axv / na, ahy = ayv / na;
      double y1x, y1y, y2x = 0.0, y2y = 0.0;
      int nsol;
      if (beta <= 1.0) {
        const double sq = std::sqrt(std::max(0.0, 1.0 - beta * beta));
        y1x = beta * ahx - sq * ahy;
        y1y = beta * ahy + sq * ahx;
        y2x = beta * ahx + sq * ahy;
        y2y = beta * ahy - sq * ahx;
        nsol = (sq == 0.0) ? 1 : 2;
      } else {
        y1x = ahx;
        y1y = ahy;
        nsol = 1;
      }

      for (int tsol = 0; tsol < nsol; ++tsol) {
        const double yx = (tsol == 0) ? y1x : y2x;
        const double yy = (tsol == 0) ? y1y : y2y;
        // Placements in frame: P y on the x-axis, Q y on span{u}.
        const double q1f = r1 * (slope * yx + yy);
        const double q2fx = r1 * slope * yx;
        const double q2fy = r1 * yx;
        // Back to world coordinates (rot^T columns are (rx,-ry),(ry,rx)).
        const double q1x = rx * q1f + s.x();
        const double q1y = ry * q1f + s.y();
        const double q2x = rx * q2fx - ry * q2fy + s.x();
        const double q2y = ry * q2fx + rx * q2fy + s.y();
        // Proper rigid motion taking (p_j, p_k) to (q1, q2).
        const double dqx = q2x - q1x, dqy = q2y - q1y;
        double cr = (dp.x() * dqx + dp.y() * dqy) / r1sq;
        double sr = (dp.x() * dqy - dp.y() * dqx) / r1sq;
        const double h = std::hypot(cr, sr);
        cr /= h;
        sr /= h;
        Alignment out;
        out.rotation << cr, -sr, sr, cr;
        out.translation << cr * pj.x() - sr * pj.y() - q1x, sr * pj.x() + cr * pj.y() - q1y;
        sink(out, CandidateInfo{int(j), int(k), int(l), Branch::NonParallel, std::int8_t(side)});
      }
    }
  }
}

}  // namespace detail

// Visits every candidate alignment of the O(n^3) enumeration in
// deterministic (j, k, l, side, solution) order. Requires n >= 3.
template <typename Sink>
void enumerate_alignments(const PairSet& A, Sink&& sink) {
  if (A.size() < 3) throw std::invalid_argument("enumerate_alignments: need at least 3 pairs");
  detail::EnumContext ctx(A);
  for (std::size_t j = 0; j < ctx.n; ++j)
    for (std::size_t k = 0; k < ctx.n; ++k)
      if (j != k) detail::enumerate_pair(ctx, j, k, sink);
}

// Materialized candidate set (Align). threads > 1 splits the j-range; the
// result is concatenated in j order and does not depend on scheduling.
CandidateSet align_candidates(const PairSet& A, int threads = 1);

std::size_t count_candidates(const PairSet& A);

// argmin of evaluate_cost over the candidate set; ties keep the first.
std::pair<Alignment, double> best_candidate(const PairSet& A, const CandidateSet& C, const CostSpec& spec);

struct SolveOutcome {
  Alignment alignment;
  double cost = 0.0;
  std::size_t candidates = 0;
};

// Enumerates and evaluates in one streaming pass (O(n) memory).
SolveOutcome solve_aligned(const PairSet& A, const CostSpec& spec, int threads = 1);

}  // namespace ptl
