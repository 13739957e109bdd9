#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cone_mapper {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or construction parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Degenerate geometry (zero-length directions, empty volumes, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Energies inconsistent with Compton scattering.
class KinematicsError : public Error {
 public:
  using Error::Error;
};

// Viewpoints delivered out of timestamp order.
class OrderingError : public Error {
 public:
  using Error::Error;
};

// Malformed input file; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cone_mapper
