#pragma once

#include "ptl/baselines.hpp"
#include "ptl/coreset.hpp"
#include "ptl/generator.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ptl {

// Solver tags accepted by the CLI and the sweep drivers:
// lms | ransac-lms | ransac-approx | approx | exact.
bool is_solver_tag(const std::string& tag);
Alignment solve_with_tag(const std::string& tag, const PairSet& A, const CostSpec& spec,
                         std::uint64_t seed, int threads = 1);

struct SweepRow {
  std::string solver;
  int n = 0;
  double k = 0.0;
  int repeat = 0;
  double value = 0.0;  // cost or seconds
};

struct SweepConfig {
  std::vector<std::string> solvers;
  std::vector<int> ns;
  std::vector<double> ks;
  int repeats = 10;
  std::uint64_t base_seed = 0;
  GenConfig gen{};          // template; n/outlier_frac/seed overwritten per cell
  CostSpec metric = fast_approx_default_spec();
  int threads = 1;
};

// Error sweep: per (solver, n, k, repeat) the metric cost of the solved
// alignment on a fresh seeded instance.
std::vector<SweepRow> run_error_sweep(const SweepConfig& cfg);

// Time sweep: wall seconds per solve, monotonic clock, one warm-up run per
// cell discarded. Always runs cells serially.
std::vector<SweepRow> run_time_sweep(const SweepConfig& cfg);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

struct CellSummary {
  std::string solver;
  int n;
  double k;
  double mean;
  double stddev;
};
std::vector<CellSummary> summarize(const std::vector<SweepRow>& rows);

// Least-squares slope of log(value) against log(n).
double loglog_slope(const std::vector<double>& ns, const std::vector<double>& values);

// Wall time of one streamed candidate enumeration (the O(n^3) part of the
// solver, without materializing the set).
double align_enumeration_seconds(const PairSet& A);

// Coreset-accelerated solve: compress, enumerate on the compressed set,
// pick the best candidate under the weighted sum of distances, report the
// chosen alignment's cost on the full set. Requires z=2, lip=Power(1),
// outer=Sum. solver_cap bounds the compressed size fed to the O(m^3)
// enumeration (0 disables the cap).
struct CoresetPipelineResult {
  Alignment alignment;
  double full_cost = 0.0;
  std::size_t coreset_size = 0;
};
CoresetPipelineResult coreset_pipeline(const PairSet& A, double eps, double delta, const CostSpec& spec,
                                       double c = 1e-4, std::uint64_t seed = 0,
                                       std::size_t solver_cap = 64);

}  // namespace ptl
