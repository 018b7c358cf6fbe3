#pragma once

#include "qhj/fields/grid.hpp"

#include <json.hpp>

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace qhj::fields {

// %.17g: shortest text that still round-trips any double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One row per grid point: coordinates first, then each named column.
inline void write_csv(std::ostream& os, const Grid& g,
                      const std::vector<std::pair<std::string, const RealField*>>& columns) {
  os << (g.dim == 1 ? "x" : "x,y");
  for (const auto& [name, field] : columns) {
    check_size(g, field->size(), "write_csv");
    os << ',' << name;
  }
  os << '\n';
  for (int ix = 0; ix < g.points[0]; ++ix) {
    for (int iy = 0; iy < (g.dim == 2 ? g.points[1] : 1); ++iy) {
      int idx = g.index(ix, iy);
      os << format_double(g.coord(0, ix));
      if (g.dim == 2) os << ',' << format_double(g.coord(1, iy));
      for (const auto& [name, field] : columns) os << ',' << format_double((*field)[idx]);
      os << '\n';
    }
  }
}

inline nlohmann::ordered_json grid_to_json(const Grid& g) {
  nlohmann::ordered_json j;
  j["dim"] = g.dim;
  j["points"] = std::vector<int>(g.points.begin(), g.points.begin() + g.dim);
  j["extent"] = std::vector<double>(g.extent.begin(), g.extent.begin() + g.dim);
  j["origin"] = std::vector<double>(g.origin.begin(), g.origin.begin() + g.dim);
  return j;
}

// Grid metadata plus the flat row-major value array.
inline nlohmann::ordered_json field_to_json(const Grid& g, const RealField& f) {
  check_size(g, f.size(), "field_to_json");
  nlohmann::ordered_json j;
  j["grid"] = grid_to_json(g);
  j["values"] = f;
  return j;
}

}  // namespace qhj::fields
