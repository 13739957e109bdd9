#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cone_mapper/core/measurement.hpp"

namespace cone_mapper::sim {

// Column headers of the two measurement logs. Each file starts with a
// "# <schema>" comment line, then the header line, then one row per record.
inline constexpr const char* kConeLogSchema = "cone_mapper/cones v1";
inline constexpr const char* kConeLogHeader =
    "t,agent,apex_x,apex_y,apex_z,roll,pitch,yaw,axis_x,axis_y,axis_z,beta";
inline constexpr const char* kViewpointLogSchema = "cone_mapper/viewpoints v1";
inline constexpr const char* kViewpointLogHeader = "t,agent,x,y,z,roll,pitch,yaw";

/// Streaming writers; values use 17 significant digits so a log read back
/// yields the exact doubles that were written.
class ConeLogWriter {
 public:
  explicit ConeLogWriter(std::ostream& os);
  void write(const ComptonCone& cone);
  void write(std::span<const ComptonCone> cones) {
    for (const auto& c : cones) write(c);
  }

 private:
  std::ostream& os_;
};

class ViewpointLogWriter {
 public:
  explicit ViewpointLogWriter(std::ostream& os);
  void write(const Viewpoint& vp);
  void write(std::span<const Viewpoint> vps) {
    for (const auto& v : vps) write(v);
  }

 private:
  std::ostream& os_;
};

/// Readers skip '#' comment lines and blank lines, require the exact header,
/// and throw ParseError naming the offending line.
std::vector<ComptonCone> read_cone_log(std::istream& is);
std::vector<ComptonCone> read_cone_log(const std::string& path);
std::vector<Viewpoint> read_viewpoint_log(std::istream& is);
std::vector<Viewpoint> read_viewpoint_log(const std::string& path);

}  // namespace cone_mapper::sim
