#include "cone_mapper/physics/lookup_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "cone_mapper/core/error.hpp"

namespace cone_mapper::physics {

namespace {
constexpr double kPi = std::numbers::pi;
}

LookupTable::LookupTable(std::size_t n_phi, std::size_t n_theta, std::vector<double> values)
    : n_phi_(n_phi),
      n_theta_(n_theta),
      values_(std::move(values)),
      dphi_(n_phi ? 2.0 * kPi / static_cast<double>(n_phi) : 0.0),
      dtheta_(n_theta ? kPi / static_cast<double>(n_theta) : 0.0) {
  if (n_phi_ < 1 || n_theta_ < 1) {
    throw ConfigError("lookup table needs at least one bin per axis");
  }
  if (values_.size() != n_phi_ * n_theta_) {
    throw ConfigError("lookup table expects " + std::to_string(n_phi_ * n_theta_) +
                      " values, got " + std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError("lookup table entries must lie in [0, 1]");
    }
  }
}

LookupTable LookupTable::uniform(double value, std::size_t n_phi, std::size_t n_theta) {
  return LookupTable(n_phi, n_theta, std::vector<double>(n_phi * n_theta, value));
}

std::size_t LookupTable::phi_bin(double phi) const {
  const double w = wrap_angle(phi);
  // +-pi is the seam between the last bin and bin 0: a tie, so bin 0.
  if (std::abs(w) == kPi) return 0;
  // Center k sits at x = k; ceil(x - 1/2) picks the nearest, lower on ties.
  const double x = (w + kPi) / dphi_ - 0.5;
  const long k = static_cast<long>(std::ceil(x - 0.5));
  const long n = static_cast<long>(n_phi_);
  return static_cast<std::size_t>(std::clamp(k, 0L, n - 1));
}

std::size_t LookupTable::theta_bin(double theta) const {
  const double x = theta / dtheta_ - 0.5;
  const double k = std::ceil(x - 0.5);
  if (!(k > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(k), n_theta_ - 1);
}

double LookupTable::lookup(double phi, double theta) const {
  return at(phi_bin(phi), theta_bin(theta));
}

double LookupTable::phi_center(std::size_t k) const {
  return -kPi + (static_cast<double>(k) + 0.5) * dphi_;
}

double LookupTable::theta_center(std::size_t m) const {
  return (static_cast<double>(m) + 0.5) * dtheta_;
}

double LookupTable::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) /
         static_cast<double>(values_.size());
}

double LookupTable::min() const { return *std::min_element(values_.begin(), values_.end()); }

double LookupTable::max() const { return *std::max_element(values_.begin(), values_.end()); }

void LookupTable::write(std::ostream& os) const {
  os << "nphi " << n_phi_ << " ntheta " << n_theta_ << '\n';
  char buf[32];
  for (std::size_t m = 0; m < n_theta_; ++m) {
    for (std::size_t k = 0; k < n_phi_; ++k) {
      auto res = std::to_chars(buf, buf + sizeof buf, at(k, m), std::chars_format::general, 17);
      os.write(buf, res.ptr - buf);
      os << (k + 1 == n_phi_ ? '\n' : ' ');
    }
  }
}

LookupTable LookupTable::read(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  long n_phi = 0, n_theta = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string kw1, kw2;
    if (!(ls >> kw1)) continue;
    if (!(ls >> n_phi >> kw2 >> n_theta) || kw1 != "nphi" || kw2 != "ntheta") {
      throw ParseError("lookup table header must be 'nphi <int> ntheta <int>'", line_no);
    }
    break;
  }
  if (n_phi < 1 || n_theta < 1) {
    throw ParseError("lookup table bin counts must be >= 1", line_no);
  }
  const auto expected = static_cast<std::size_t>(n_phi * n_theta);
  std::vector<double> values;
  values.reserve(expected);
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string token;
    while (ls >> token) {
      double v = 0.0;
      auto res = std::from_chars(token.data(), token.data() + token.size(), v);
      if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw ParseError("lookup table value '" + token + "' is not a number", line_no);
      }
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ParseError("lookup table value '" + token + "' outside [0, 1]", line_no);
      }
      values.push_back(v);
    }
  }
  if (values.size() != expected) {
    throw ParseError("lookup table expects " + std::to_string(expected) + " values, found " +
                         std::to_string(values.size()),
                     line_no);
  }
  return LookupTable(static_cast<std::size_t>(n_phi), static_cast<std::size_t>(n_theta),
                     std::move(values));
}

void LookupTable::save(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write(os);
}

LookupTable LookupTable::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open lookup table '" + path + "'");
  return read(is);
}

}  // namespace cone_mapper::physics
