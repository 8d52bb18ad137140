#pragma once

#include <random>

#include "ptl/geometry.hpp"

namespace ptl::testing {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Vec2 random_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  const double a = angle(rng);
  return Vec2(std::cos(a), std::sin(a));
}

inline Vec2 random_point(std::mt19937_64& rng, double range = 100.0) {
  std::uniform_real_distribution<double> coord(-range, range);
  return Vec2(coord(rng), coord(rng));
}

inline PlanarLine random_line(std::mt19937_64& rng, double offset_range = 10.0) {
  std::uniform_real_distribution<double> off(0.0, offset_range);
  return PlanarLine::from(random_unit(rng), off(rng));
}

inline Alignment random_alignment(std::mt19937_64& rng, double trans_range = 10.0) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> t(-trans_range, trans_range);
  return Alignment::from_angle(angle(rng), Vec2(t(rng), t(rng)));
}

inline PairSet random_pairs(std::mt19937_64& rng, std::size_t n, double point_range = 100.0,
                            double offset_range = 10.0) {
  PairSet A;
  for (std::size_t i = 0; i < n; ++i)
    A.push_back(random_point(rng, point_range), random_line(rng, offset_range));
  return A;
}

struct Planted {
  PairSet pairs;
  Alignment solution;  // maps the points back onto their lines
};

// Points start on their lines, then a random rigid motion and optional
// Gaussian noise are applied; the recorded solution is the inverse motion.
inline Planted make_planted(std::mt19937_64& rng, std::size_t n, double noise_sigma = 0.0,
                            double point_range = 100.0) {
  Planted out;
  std::uniform_real_distribution<double> coord(0.0, point_range);
  for (std::size_t i = 0; i < n; ++i) {
    const auto l = random_line(rng);
    const Vec2 raw(coord(rng), coord(rng));
    out.pairs.push_back(l.project(raw), l);
  }
  const Alignment motion = random_alignment(rng);
  for (auto& p : out.pairs.points) p = motion.apply(p);
  if (noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (auto& p : out.pairs.points) p += Vec2(noise(rng), noise(rng));
  }
  out.solution = motion.inverse();
  return out;
}

}  // namespace ptl::testing
