#ifndef COVERAGE_LAB_SAMPLING_HPP
#define COVERAGE_LAB_SAMPLING_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "coverage_lab/geometry.hpp"

namespace coverage_lab {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; derives independent stream seeds from (seed, index) pairs.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline Point uniform_in_box(Rng& rng, const Vector& lo, const Vector& hi) {
  Point p(lo.size());
  for (Eigen::Index i = 0; i < lo.size(); ++i) p[i] = lo[i] + (hi[i] - lo[i]) * uniform01(rng);
  return p;
}

inline Vector uniform_direction(Rng& rng, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(n));
  double len = 0.0;
  do {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
    len = v.norm();
  } while (!(len > 1e-300));
  return v / len;
}

/// Uniform point in the open ball.
inline Point uniform_in_ball(Rng& rng, const Ball& b) {
  const auto n = static_cast<double>(b.dim());
  const Vector u = uniform_direction(rng, b.dim());
  const double t = std::pow(uniform01(rng), 1.0 / n);
  return b.center + (b.radius * t) * u;
}

/// Uniform point on the sphere of radius (1 - 1e-9) * r, i.e. just inside the open ball.
/// Violations of ball containment first appear at the surface, so these samples catch thin excursions.
inline Point near_surface_of_ball(Rng& rng, const Ball& b) {
  const Vector u = uniform_direction(rng, b.dim());
  return b.center + (b.radius * (1.0 - 1e-9)) * u;
}

}  // namespace coverage_lab

#endif  // COVERAGE_LAB_SAMPLING_HPP
