#include "cone_mapper/sim/logs.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "cone_mapper/core/error.hpp"
#include "cone_mapper/core/text.hpp"

namespace cone_mapper::sim {

namespace {

void write_pose(std::ostream& os, const SensorPose& p) {
  os << format_double(p.position().x) << ',' << format_double(p.position().y) << ','
     << format_double(p.position().z) << ',' << format_double(p.roll()) << ','
     << format_double(p.pitch()) << ',' << format_double(p.yaw());
}

template <std::size_t N>
std::array<double, N> parse_row(std::string_view line, std::size_t line_no) {
  const auto fields = split(line, ',');
  if (fields.size() != N) {
    throw ParseError("expected " + std::to_string(N) + " columns, found " +
                         std::to_string(fields.size()),
                     line_no);
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    const auto v = parse_double(fields[i]);
    if (!v) {
      throw ParseError("column " + std::to_string(i + 1) + " ('" + std::string(fields[i]) +
                           "') is not a number",
                       line_no);
    }
    out[i] = *v;
  }
  return out;
}

AgentId agent_field(double v, std::size_t line_no) {
  if (v != std::floor(v) || v < 0 || v > 1e9) throw ParseError("agent id must be an integer", line_no);
  return static_cast<AgentId>(v);
}

// Calls row(line, line_no) for each data row after checking the header.
template <class RowFn>
void for_each_row(std::istream& is, const char* header, RowFn&& row) {
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!seen_header) {
      if (t != header) throw ParseError("expected header '" + std::string(header) + "'", line_no);
      seen_header = true;
      continue;
    }
    row(t, line_no);
  }
  if (!seen_header) throw ParseError("missing header '" + std::string(header) + "'", line_no);
}

}  // namespace

ConeLogWriter::ConeLogWriter(std::ostream& os) : os_(os) {
  os_ << "# " << kConeLogSchema << '\n' << kConeLogHeader << '\n';
}

void ConeLogWriter::write(const ComptonCone& c) {
  os_ << format_double(c.timestamp()) << ',' << c.agent_id() << ',';
  write_pose(os_, c.apex_pose());
  os_ << ',' << format_double(c.axis().x) << ',' << format_double(c.axis().y) << ','
      << format_double(c.axis().z) << ',' << format_double(c.opening_angle()) << '\n';
}

ViewpointLogWriter::ViewpointLogWriter(std::ostream& os) : os_(os) {
  os_ << "# " << kViewpointLogSchema << '\n' << kViewpointLogHeader << '\n';
}

void ViewpointLogWriter::write(const Viewpoint& vp) {
  os_ << format_double(vp.timestamp) << ',' << vp.agent_id << ',';
  write_pose(os_, vp.pose);
  os_ << '\n';
}

std::vector<ComptonCone> read_cone_log(std::istream& is) {
  std::vector<ComptonCone> cones;
  for_each_row(is, kConeLogHeader, [&](std::string_view line, std::size_t line_no) {
    const auto f = parse_row<12>(line, line_no);
    try {
      const SensorPose pose({f[2], f[3], f[4]}, f[5], f[6], f[7]);
      cones.emplace_back(pose, Vec3{f[8], f[9], f[10]}, f[11], f[0],
                         agent_field(f[1], line_no));
    } catch (const GeometryError& e) {
      throw ParseError(e.what(), line_no);
    }
  });
  return cones;
}

std::vector<Viewpoint> read_viewpoint_log(std::istream& is) {
  std::vector<Viewpoint> vps;
  for_each_row(is, kViewpointLogHeader, [&](std::string_view line, std::size_t line_no) {
    const auto f = parse_row<8>(line, line_no);
    try {
      if (!(f[0] >= 0.0)) throw GeometryError("viewpoint timestamp must be >= 0");
      vps.push_back({SensorPose({f[2], f[3], f[4]}, f[5], f[6], f[7]), f[0],
                     agent_field(f[1], line_no)});
    } catch (const GeometryError& e) {
      throw ParseError(e.what(), line_no);
    }
  });
  return vps;
}

std::vector<ComptonCone> read_cone_log(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open cone log '" + path + "'");
  return read_cone_log(is);
}

std::vector<Viewpoint> read_viewpoint_log(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open viewpoint log '" + path + "'");
  return read_viewpoint_log(is);
}

}  // namespace cone_mapper::sim
