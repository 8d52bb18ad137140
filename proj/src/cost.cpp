#include "ptl/cost.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace ptl {

LipSpec LipSpec::power(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("LipSpec::power: r must be >= 0");
  return LipSpec{Kind::Power, r};
}

LipSpec LipSpec::threshold(double th) {
  if (!(th > 0.0)) throw std::invalid_argument("LipSpec::threshold: th must be > 0");
  return LipSpec{Kind::Threshold, th};
}

double LipSpec::operator()(double x) const {
  return kind == Kind::Power ? std::pow(x, param) : std::min(x, param);
}

OuterSpec OuterSpec::trimmed_sum(int k) {
  if (k < 0) throw std::invalid_argument("OuterSpec::trimmed_sum: k must be >= 0");
  return OuterSpec{Kind::TrimmedSum, k};
}

double OuterSpec::operator()(std::span<const double> v) const {
  switch (kind) {
    case Kind::Sum: {
      double t = 0.0;
      for (double x : v) t += x;
      return t;
    }
    case Kind::Max: {
      double t = 0.0;
      for (double x : v) t = std::max(t, x);
      return t;
    }
    case Kind::TrimmedSum: {
      if (drop >= static_cast<int>(v.size())) return 0.0;
      std::vector<double> scratch(v.begin(), v.end());
      const auto keep = scratch.size() - static_cast<std::size_t>(drop);
      std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(keep) - 1, scratch.end());
      double t = 0.0;
      for (std::size_t i = 0; i < keep; ++i) t += scratch[i];
      return t;
    }
  }
  return 0.0;
}

CostSpec CostSpec::make(double z, LipSpec lip, OuterSpec outer, double s) {
  CostSpec spec{z, lip, outer, lip.log_lipschitz_r(), s};
  spec.validate();
  return spec;
}

void CostSpec::validate() const {
  if (!(z >= 1.0)) throw std::invalid_argument("CostSpec: z must be >= 1");
  if (r != lip.log_lipschitz_r()) throw std::invalid_argument("CostSpec: declared r does not match lip");
  if (!(s >= 1.0)) throw std::invalid_argument("CostSpec: s must be >= 1");
  if (lip.kind == LipSpec::Kind::Threshold && !(lip.param > 0.0))
    throw std::invalid_argument("CostSpec: threshold must be positive");
}

std::vector<double> pair_distances(const PairSet& A, const Alignment& a, double z) {
  std::vector<double> d(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) d[i] = point_line_distance(a.apply(A.points[i]), A.lines[i], z);
  return d;
}

double combine_cost(std::span<const double> dists, const CostSpec& spec) {
  std::vector<double> v(dists.size());
  for (std::size_t i = 0; i < dists.size(); ++i) v[i] = spec.lip(dists[i]);
  return spec.outer(v);
}

double evaluate_cost(const PairSet& A, const Alignment& a, const CostSpec& spec) {
  if (A.empty()) throw std::invalid_argument("evaluate_cost: empty pair set");
  spec.validate();
  const auto d = pair_distances(A, a, spec.z);
  return combine_cost(d, spec);
}

double approx_factor(const CostSpec& spec) {
  const double w = (spec.z == 2.0) ? 1.0 : std::sqrt(2.0);
  return std::pow(16.0 * w, spec.r * spec.s);
}

namespace {

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    g[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, count == 1 ? 0.0 : double(i) / (count - 1));
  return g;
}

}  // namespace

bool log_lipschitz_check(const LipSpec& h, double r, int samples) {
  if (samples < 1) throw std::invalid_argument("log_lipschitz_check: samples must be >= 1");
  const auto cs = log_grid(1.0, 100.0, std::max(2, samples));
  const auto xs = log_grid(1e-6, 1e6, std::max(2, samples));
  for (double c : cs)
    for (double x : xs)
      if (h(c * x) > std::pow(c, r) * h(x) * (1.0 + 1e-9)) return false;
  return true;
}

bool log_lipschitz_check(const OuterSpec& h, double r, int samples) {
  if (samples < 1) throw std::invalid_argument("log_lipschitz_check: samples must be >= 1");
  const auto cs = log_grid(1.0, 100.0, std::max(2, samples));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mag(0.0, 10.0);
  for (int trial = 0; trial < samples; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 8);
    std::vector<double> v(n), cv(n);
    for (auto& x : v) x = mag(rng);
    for (double c : cs) {
      for (std::size_t i = 0; i < n; ++i) cv[i] = c * v[i];
      if (h(cv) > std::pow(c, r) * h(v) * (1.0 + 1e-9)) return false;
    }
  }
  return true;
}

std::string cost_spec_to_json(const CostSpec& spec) {
  nlohmann::json j;
  j["z"] = spec.z;
  if (spec.lip.kind == LipSpec::Kind::Power)
    j["lip"] = {{"kind", "power"}, {"r", spec.lip.param}};
  else
    j["lip"] = {{"kind", "threshold"}, {"th", spec.lip.param}};
  switch (spec.outer.kind) {
    case OuterSpec::Kind::Sum: j["outer"] = {{"kind", "sum"}}; break;
    case OuterSpec::Kind::Max: j["outer"] = {{"kind", "max"}}; break;
    case OuterSpec::Kind::TrimmedSum: j["outer"] = {{"kind", "trimmed"}, {"k", spec.outer.drop}}; break;
  }
  return j.dump();
}

CostSpec cost_spec_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const double z = j.at("z").get<double>();
  LipSpec lip = LipSpec::power(1.0);
  if (j.contains("lip")) {
    const auto& jl = j.at("lip");
    const std::string kind = jl.at("kind").get<std::string>();
    if (kind == "power")
      lip = LipSpec::power(jl.at("r").get<double>());
    else if (kind == "threshold")
      lip = LipSpec::threshold(jl.at("th").get<double>());
    else
      throw std::invalid_argument("cost_spec_from_json: unknown lip kind '" + kind + "'");
  }
  OuterSpec outer = OuterSpec::sum();
  if (j.contains("outer")) {
    const auto& jo = j.at("outer");
    const std::string kind = jo.at("kind").get<std::string>();
    if (kind == "sum")
      outer = OuterSpec::sum();
    else if (kind == "max")
      outer = OuterSpec::max();
    else if (kind == "trimmed")
      outer = OuterSpec::trimmed_sum(jo.at("k").get<int>());
    else
      throw std::invalid_argument("cost_spec_from_json: unknown outer kind '" + kind + "'");
  }
  return CostSpec::make(z, lip, outer);
}

}  // namespace ptl
