#include "ptl/generator.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace ptl {

Instance gen_instance(const GenConfig& cfg) {
  if (cfg.n < 3) throw std::invalid_argument("gen_instance: n must be >= 3");
  if (!(cfg.outlier_frac >= 0.0 && cfg.outlier_frac <= 1.0))
    throw std::invalid_argument("gen_instance: outlier_frac must be in [0,1]");

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> half_normal(0.5, 0.5);
  std::uniform_real_distribution<double> offset(0.0, cfg.offset_range);
  std::uniform_real_distribution<double> coord(0.0, cfg.point_range);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> trans(0.0, cfg.translation_range);

  const std::size_t n = static_cast<std::size_t>(cfg.n);
  Instance inst;
  inst.pairs.points.resize(n);
  inst.pairs.lines.resize(n);
  inst.outlier_mask.assign(n, false);

  for (std::size_t i = 0; i < n; ++i) {
    Vec2 a;
    do {
      a = Vec2(half_normal(rng), half_normal(rng));
    } while (a.norm() < 1e-12);
    inst.pairs.lines[i] = PlanarLine::from(a, offset(rng));
  }

  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p0(coord(rng), coord(rng));
    inst.pairs.points[i] = inst.pairs.lines[i].project(p0);
  }

  inst.planted = Alignment::from_angle(angle(rng), Vec2(trans(rng), trans(rng)));
  for (auto& p : inst.pairs.points) p = inst.planted.apply(p);

  if (cfg.noise.sigma > 0.0 || cfg.noise.mean != 0.0) {
    std::normal_distribution<double> noise(cfg.noise.mean, cfg.noise.sigma);
    for (auto& p : inst.pairs.points) p += Vec2(noise(rng), noise(rng));
  }

  const auto n_out = static_cast<std::size_t>(std::llround(cfg.outlier_frac * cfg.n));
  if (n_out > 0) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < n_out; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(idx[i], idx[pick(rng)]);
    }
    std::normal_distribution<double> heavy(cfg.outlier_range / 2.0, cfg.outlier_range / 2.0);
    for (std::size_t i = 0; i < n_out; ++i) {
      inst.pairs.points[idx[i]] += Vec2(heavy(rng), heavy(rng));
      inst.outlier_mask[idx[i]] = true;
    }
  }

  inst.planted_perm.resize(n);
  std::iota(inst.planted_perm.begin(), inst.planted_perm.end(), 0);
  if (cfg.shuffle) {
    // Reorder lines by sigma; the true matching of point i is then sigma^-1(i).
    Permutation sigma(inst.planted_perm);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(sigma[i], sigma[pick(rng)]);
    }
    std::vector<PlanarLine> shuffled(n);
    for (std::size_t j = 0; j < n; ++j) shuffled[j] = inst.pairs.lines[static_cast<std::size_t>(sigma[j])];
    inst.pairs.lines = std::move(shuffled);
    for (std::size_t j = 0; j < n; ++j)
      inst.planted_perm[static_cast<std::size_t>(sigma[j])] = static_cast<int>(j);
  }

  return inst;
}

Alignment planted_solution(const Instance& inst) { return inst.planted.inverse(); }

}  // namespace ptl
