#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "cone_mapper/core/geometry.hpp"

namespace cone_mapper::physics {

/// Probability of a Compton measurement per particle emitted towards the
/// detector, tabulated over detector-frame directions.
///
/// phi bins tile [-pi, pi) with centers -pi + (k + 1/2) dphi; theta bins
/// tile [0, pi] with centers (m + 1/2) dtheta. Values are stored theta-outer:
/// value(k, m) = values[m * n_phi + k]. Queries return the nearest bin with no
/// interpolation; exact ties resolve to the lower index.
class LookupTable {
 public:
  LookupTable(std::size_t n_phi, std::size_t n_theta, std::vector<double> values);

  static LookupTable uniform(double value, std::size_t n_phi = 36, std::size_t n_theta = 18);

  std::size_t n_phi() const { return n_phi_; }
  std::size_t n_theta() const { return n_theta_; }
  const std::vector<double>& values() const { return values_; }

  double at(std::size_t phi_bin, std::size_t theta_bin) const {
    return values_[theta_bin * n_phi_ + phi_bin];
  }

  double lookup(double phi, double theta) const;
  double lookup(const PolarAngles& a) const { return lookup(a.phi, a.theta); }

  std::size_t phi_bin(double phi) const;
  std::size_t theta_bin(double theta) const;
  double phi_center(std::size_t k) const;
  double theta_center(std::size_t m) const;

  double mean() const;
  double min() const;
  double max() const;

  // Plain-text form: "nphi <int> ntheta <int>" then the values, theta-outer.
  void write(std::ostream& os) const;
  static LookupTable read(std::istream& is);
  void save(const std::string& path) const;
  static LookupTable load(const std::string& path);

  friend bool operator==(const LookupTable&, const LookupTable&) = default;

 private:
  std::size_t n_phi_;
  std::size_t n_theta_;
  std::vector<double> values_;
  double dphi_;
  double dtheta_;
};

}  // namespace cone_mapper::physics
