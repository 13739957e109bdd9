#include "cone_mapper/physics/detector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "cone_mapper/core/error.hpp"
#include "cone_mapper/core/rng.hpp"

namespace cone_mapper::physics {

void DetectorGeometry::validate() const {
  if (!(size_x > 0.0) || !(size_y > 0.0) || !(size_z > 0.0)) {
    throw ConfigError("detector dimensions must be > 0");
  }
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw ConfigError("detector kappa must be > 0");
  }
}

double DetectorGeometry::projected_area(const Vec3& u) const {
  return std::abs(u.x) * size_y * size_z + std::abs(u.y) * size_x * size_z +
         std::abs(u.z) * size_x * size_y;
}

double DetectorGeometry::chord_length(const Vec3& p, const Vec3& u) const {
  const std::array<double, 3> half{0.5 * size_x, 0.5 * size_y, 0.5 * size_z};
  const std::array<double, 3> o{p.x, p.y, p.z};
  const std::array<double, 3> d{u.x, u.y, u.z};
  double t_lo = -std::numeric_limits<double>::infinity();
  double t_hi = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) {
      if (std::abs(o[a]) > half[a]) return 0.0;
      continue;
    }
    double t0 = (-half[a] - o[a]) / d[a];
    double t1 = (half[a] - o[a]) / d[a];
    if (t0 > t1) std::swap(t0, t1);
    t_lo = std::max(t_lo, t0);
    t_hi = std::min(t_hi, t1);
  }
  return t_hi > t_lo ? (t_hi - t_lo) * norm(u) : 0.0;
}

Vec3 direction_from_polar(double phi, double theta) {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

namespace {

void check_args(const DetectorGeometry& geometry, std::size_t n_phi, std::size_t n_theta,
                std::size_t samples_per_bin) {
  geometry.validate();
  if (n_phi < 1 || n_theta < 1) throw ConfigError("lookup table needs >= 1 bin per axis");
  if (samples_per_bin < 1) throw ConfigError("samples_per_bin must be >= 1");
}

double bin_value(const DetectorGeometry& g, double phi, double theta, std::size_t samples,
                 std::uint64_t seed, std::uint64_t bin) {
  const Vec3 u = direction_from_polar(phi, theta);
  const Vec3 e1 = any_orthogonal(u);
  const Vec3 e2 = cross(u, e1);

  // Bounding rectangle of the silhouette in the (e1, e2) plane.
  double lo1 = std::numeric_limits<double>::infinity(), hi1 = -lo1;
  double lo2 = lo1, hi2 = -lo1;
  for (int c = 0; c < 8; ++c) {
    const Vec3 corner{(c & 1 ? 0.5 : -0.5) * g.size_x, (c & 2 ? 0.5 : -0.5) * g.size_y,
                      (c & 4 ? 0.5 : -0.5) * g.size_z};
    const double a = dot(corner, e1), b = dot(corner, e2);
    lo1 = std::min(lo1, a);
    hi1 = std::max(hi1, a);
    lo2 = std::min(lo2, b);
    hi2 = std::max(hi2, b);
  }

  Rng rng = make_substream({seed, bin});
  std::uniform_real_distribution<double> s1(lo1, hi1), s2(lo2, hi2);
  double absorbed = 0.0;
  std::size_t hits = 0;
  // Silhouette fills at least ~1/6 of its bounding box; the cap is only a guard.
  const std::size_t max_attempts = 1000 * samples + 1000;
  for (std::size_t attempt = 0; hits < samples && attempt < max_attempts; ++attempt) {
    const Vec3 p = s1(rng) * e1 + s2(rng) * e2;
    const double chord = g.chord_length(p, u);
    if (chord > 0.0) {
      absorbed += -std::expm1(-g.kappa * chord);
      ++hits;
    }
  }
  if (hits == 0) return 0.0;
  const double value = absorbed / static_cast<double>(hits) * g.projected_area(u) /
                       g.reference_area();
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace

LookupTable build_chord_lookup(const DetectorGeometry& geometry, std::size_t n_phi,
                               std::size_t n_theta, std::size_t samples_per_bin,
                               std::uint64_t seed) {
  check_args(geometry, n_phi, n_theta, samples_per_bin);
  const LookupTable axes = LookupTable::uniform(0.0, n_phi, n_theta);
  const long n_bins = static_cast<long>(n_phi * n_theta);
  std::vector<double> values(static_cast<std::size_t>(n_bins));
#pragma omp parallel for schedule(dynamic, 4)
  for (long b = 0; b < n_bins; ++b) {
    const auto bin = static_cast<std::size_t>(b);
    values[bin] = bin_value(geometry, axes.phi_center(bin % n_phi),
                            axes.theta_center(bin / n_phi), samples_per_bin, seed, bin);
  }
  return LookupTable(n_phi, n_theta, std::move(values));
}

LookupTable build_chord_lookup_serial(const DetectorGeometry& geometry, std::size_t n_phi,
                                      std::size_t n_theta, std::size_t samples_per_bin,
                                      std::uint64_t seed) {
  check_args(geometry, n_phi, n_theta, samples_per_bin);
  const LookupTable axes = LookupTable::uniform(0.0, n_phi, n_theta);
  std::vector<double> values(n_phi * n_theta);
  for (std::size_t bin = 0; bin < values.size(); ++bin) {
    values[bin] = bin_value(geometry, axes.phi_center(bin % n_phi),
                            axes.theta_center(bin / n_phi), samples_per_bin, seed, bin);
  }
  return LookupTable(n_phi, n_theta, std::move(values));
}

}  // namespace cone_mapper::physics
