#include "cone_mapper/recon/field_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cone_mapper/core/error.hpp"
#include "cone_mapper/core/text.hpp"

namespace cone_mapper::recon {

void write_field(std::ostream& os, const GridMap& grid, const std::vector<double>& values) {
  if (values.size() != grid.size()) throw ConfigError("field size does not match grid");
  os << "grid " << grid.nx() << ' ' << grid.ny() << ' ' << format_double(grid.resolution())
     << ' ' << format_double(grid.origin().x) << ' ' << format_double(grid.origin().y) << '\n';
  for (double v : values) os << format_double(v) << '\n';
}

void write_field(const std::string& path, const GridMap& grid,
                 const std::vector<double>& values) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_field(os, grid, values);
}

FieldDump read_field(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  FieldDump dump;
  if (!std::getline(is, line)) throw ParseError("empty field dump", 1);
  ++line_no;
  {
    std::istringstream hs(line);
    std::string kw, r, ox, oy;
    if (!(hs >> kw >> dump.nx >> dump.ny >> r >> ox >> oy) || kw != "grid") {
      throw ParseError("field header must be 'grid nx ny r ox oy'", line_no);
    }
    auto pr = parse_double(r), px = parse_double(ox), py = parse_double(oy);
    if (!pr || !px || !py) throw ParseError("field header has non-numeric values", line_no);
    dump.resolution = *pr;
    dump.origin_x = *px;
    dump.origin_y = *py;
  }
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto v = parse_double(line);
    if (!v) throw ParseError("field value '" + line + "' is not a number", line_no);
    dump.values.push_back(*v);
  }
  if (dump.values.size() != dump.nx * dump.ny) {
    throw ParseError("field dump holds " + std::to_string(dump.values.size()) +
                         " values, header promises " + std::to_string(dump.nx * dump.ny),
                     line_no);
  }
  return dump;
}

FieldDump read_field(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open '" + path + "'");
  return read_field(is);
}

}  // namespace cone_mapper::recon
