#include "ptl/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ptl/io.hpp"

namespace ptl {

bool is_solver_tag(const std::string& tag) {
  return tag == "lms" || tag == "ransac-lms" || tag == "ransac-approx" || tag == "approx" ||
         tag == "exact";
}

Alignment solve_with_tag(const std::string& tag, const PairSet& A, const CostSpec& spec,
                         std::uint64_t seed, int threads) {
  if (tag == "lms") return lms_align(A);
  if (tag == "approx") return fast_approx_align(A, spec, seed);
  if (tag == "exact") return solve_aligned(A, spec, threads).alignment;
  if (tag == "ransac-lms" || tag == "ransac-approx") {
    RansacConfig cfg;
    cfg.seed = seed;
    if (spec.lip.kind == LipSpec::Kind::Threshold) cfg.inlier_threshold = spec.lip.param;
    return adaptive_ransac(A, tag == "ransac-lms" ? BaseSolver::Lms : BaseSolver::AlignCandidates, cfg)
        .alignment;
  }
  throw std::invalid_argument("unknown solver tag '" + tag + "'");
}

namespace {

std::uint64_t cell_seed(std::uint64_t base, std::size_t solver, int n, double k, int repeat) {
  std::uint64_t h = base + 0x9e3779b97f4a7c15ULL;
  const auto mix = [&h](std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
  };
  mix(solver);
  mix(static_cast<std::uint64_t>(n));
  mix(static_cast<std::uint64_t>(std::llround(k * 1e6)));
  mix(static_cast<std::uint64_t>(repeat));
  return h;
}

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

}  // namespace

std::vector<SweepRow> run_error_sweep(const SweepConfig& cfg) {
  if (cfg.solvers.empty()) throw std::invalid_argument("run_error_sweep: need at least one solver");
  for (const auto& s : cfg.solvers)
    if (!is_solver_tag(s)) throw std::invalid_argument("run_error_sweep: unknown solver '" + s + "'");

  struct Cell {
    std::size_t si;
    int n;
    double k;
    int repeat;
  };
  std::vector<Cell> cells;
  for (std::size_t si = 0; si < cfg.solvers.size(); ++si)
    for (int n : cfg.ns)
      for (double k : cfg.ks)
        for (int rep = 0; rep < cfg.repeats; ++rep) cells.push_back({si, n, k, rep});

  std::vector<SweepRow> rows(cells.size());
  const auto run_cell = [&](std::size_t idx) {
    const Cell& c = cells[idx];
    GenConfig g = cfg.gen;
    g.n = c.n;
    g.outlier_frac = c.k;
    g.seed = cell_seed(cfg.base_seed, 0, c.n, c.k, c.repeat);  // same instance for all solvers
    const Instance inst = gen_instance(g);
    const auto a = solve_with_tag(cfg.solvers[c.si], inst.pairs, cfg.metric,
                                  cell_seed(cfg.base_seed, c.si + 1, c.n, c.k, c.repeat));
    rows[idx] = {cfg.solvers[c.si], c.n, c.k, c.repeat, evaluate_cost(inst.pairs, a, cfg.metric)};
  };

  if (cfg.threads <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    const int t = std::max(1, cfg.threads);
    for (int w = 0; w < t; ++w)
      workers.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) run_cell(i);
      }));
    for (auto& w : workers) w.get();
  }
  return rows;
}

std::vector<SweepRow> run_time_sweep(const SweepConfig& cfg) {
  if (cfg.solvers.empty()) throw std::invalid_argument("run_time_sweep: need at least one solver");
  std::vector<SweepRow> rows;
  for (std::size_t si = 0; si < cfg.solvers.size(); ++si) {
    const auto& tag = cfg.solvers[si];
    const bool enumerate_only = tag == "enumerate";
    if (!enumerate_only && !is_solver_tag(tag))
      throw std::invalid_argument("run_time_sweep: unknown solver '" + tag + "'");
    for (int n : cfg.ns) {
      const double k = cfg.ks.empty() ? 0.0 : cfg.ks.front();
      bool warmed = false;
      for (int rep = 0; rep < cfg.repeats; ++rep) {
        GenConfig g = cfg.gen;
        g.n = n;
        g.outlier_frac = k;
        g.seed = cell_seed(cfg.base_seed, 0, n, k, rep);
        const Instance inst = gen_instance(g);
        const auto timed = [&]() -> double {
          if (enumerate_only) return align_enumeration_seconds(inst.pairs);
          const double t0 = now_seconds();
          solve_with_tag(tag, inst.pairs, cfg.metric,
                         cell_seed(cfg.base_seed, si + 1, n, k, rep), cfg.threads);
          return now_seconds() - t0;
        };
        if (!warmed) {
          timed();  // warm-up discarded
          warmed = true;
        }
        rows.push_back({tag, n, k, rep, timed()});
      }
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "solver,n,k,repeat,value\n";
  for (const auto& r : rows)
    os << r.solver << ',' << r.n << ',' << format_double(r.k) << ',' << r.repeat << ','
       << format_double(r.value) << '\n';
}

std::vector<CellSummary> summarize(const std::vector<SweepRow>& rows) {
  std::vector<CellSummary> out;
  for (const auto& r : rows) {
    const auto it = std::find_if(out.begin(), out.end(), [&](const CellSummary& c) {
      return c.solver == r.solver && c.n == r.n && c.k == r.k;
    });
    if (it == out.end()) out.push_back({r.solver, r.n, r.k, 0.0, 0.0});
  }
  for (auto& c : out) {
    double sum = 0.0, sum2 = 0.0, count = 0.0;
    for (const auto& r : rows)
      if (r.solver == c.solver && r.n == c.n && r.k == c.k) {
        sum += r.value;
        sum2 += r.value * r.value;
        count += 1.0;
      }
    c.mean = sum / count;
    c.stddev = count > 1 ? std::sqrt(std::max(0.0, (sum2 - sum * sum / count) / (count - 1))) : 0.0;
  }
  return out;
}

double loglog_slope(const std::vector<double>& ns, const std::vector<double>& values) {
  if (ns.size() != values.size() || ns.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double x = std::log(ns[i]), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double align_enumeration_seconds(const PairSet& A) {
  const double t0 = now_seconds();
  std::size_t count = 0;
  double sink_sum = 0.0;  // keeps the loop from being optimized away
  enumerate_alignments(A, [&](const Alignment& a, const CandidateInfo&) {
    ++count;
    sink_sum += a.translation.x();
  });
  const double dt = now_seconds() - t0;
  if (count == 0 && sink_sum != 0.0) throw std::runtime_error("unreachable");
  return dt;
}

CoresetPipelineResult coreset_pipeline(const PairSet& A, double eps, double delta, const CostSpec& spec,
                                       double c, std::uint64_t seed, std::size_t solver_cap) {
  spec.validate();
  if (spec.z != 2.0 || spec.lip.kind != LipSpec::Kind::Power || spec.lip.param != 1.0 ||
      spec.outer.kind != OuterSpec::Kind::Sum)
    throw std::invalid_argument("coreset_pipeline: guarantee covers z=2, lip=Power(1), outer=Sum only");

  const WeightedPairSet weighted = WeightedPairSet::uniform(A);
  CoresetParams params{eps, delta, c, 7, seed};
  SparseWeights sw = build_coreset(weighted, params);
  if (solver_cap >= 3 && sw.draws > solver_cap) sw = importance_resample(weighted, solver_cap, seed);
  WeightedPairSet small = compact(weighted, sw);
  if (small.size() < 3) {
    // too aggressive a compression for the solver; fall back to the input
    small = weighted;
  }

  Alignment best;
  double best_cost = std::numeric_limits<double>::infinity();
  enumerate_alignments(small.pairs, [&](const Alignment& a, const CandidateInfo&) {
    const double cost = weighted_sum_distance(small, a, 2.0);
    if (cost < best_cost) {
      best_cost = cost;
      best = a;
    }
  });

  CoresetPipelineResult out;
  out.alignment = best;
  out.full_cost = evaluate_cost(A, best, spec);
  out.coreset_size = small.size();
  return out;
}

}  // namespace ptl
