#pragma once

#include "ptl/geometry.hpp"

#include <span>
#include <string>
#include <vector>

namespace ptl {

// Inner per-pair transform: Power(r) is x -> x^r (r-log-Lipschitz),
// Threshold(th) is the M-estimator x -> min{x, th} (1-log-Lipschitz).
struct LipSpec {
  enum class Kind { Power, Threshold } kind = Kind::Power;
  double param = 1.0;  // exponent r, or threshold th

  static LipSpec power(double r);
  static LipSpec threshold(double th);
  double operator()(double x) const;
  // The log-Lipschitz constant this kind satisfies.
  double log_lipschitz_r() const { return kind == Kind::Power ? param : 1.0; }
};

// Aggregation over the n transformed distances. TrimmedSum(k) sums the n-k
// smallest entries; all three kinds are non-decreasing and 1-log-Lipschitz.
struct OuterSpec {
  enum class Kind { Sum, Max, TrimmedSum } kind = Kind::Sum;
  int drop = 0;  // k, for TrimmedSum

  static OuterSpec sum() { return {Kind::Sum, 0}; }
  static OuterSpec max() { return {Kind::Max, 0}; }
  static OuterSpec trimmed_sum(int k);
  double operator()(std::span<const double> v) const;
};

// The tuple (z, lip, f) defining cost(A,(R,t)) = f(lip(D_z(pair_i,(R,t)))_i),
// together with the declared constants r (from lip) and s (1 for all built-in
// outers; carried so externally-declared outers keep factors honest).
struct CostSpec {
  double z = 2.0;
  LipSpec lip = LipSpec::power(1.0);
  OuterSpec outer = OuterSpec::sum();
  double r = 1.0;
  double s = 1.0;

  static CostSpec make(double z, LipSpec lip, OuterSpec outer, double s = 1.0);
  void validate() const;
};

// Raw l_z distances of every pair under the alignment.
std::vector<double> pair_distances(const PairSet& A, const Alignment& a, double z);

// outer(lip(d_i)) for precomputed distances.
double combine_cost(std::span<const double> dists, const CostSpec& spec);

double evaluate_cost(const PairSet& A, const Alignment& a, const CostSpec& spec);

// (w * 16)^(r*s) with w = 1 for z == 2 and sqrt(2) otherwise.
double approx_factor(const CostSpec& spec);

// Sampled check of h(c x) <= c^r h(x) over c in [1, 100] and a log-spaced
// grid of x (scalar form for lip, vector form for outer).
bool log_lipschitz_check(const LipSpec& h, double r, int samples);
bool log_lipschitz_check(const OuterSpec& h, double r, int samples);

// JSON round trip:
// {"z": 2, "lip": {"kind": "power", "r": 1}, "outer": {"kind": "sum"}}
std::string cost_spec_to_json(const CostSpec& spec);
CostSpec cost_spec_from_json(const std::string& text);

}  // namespace ptl
