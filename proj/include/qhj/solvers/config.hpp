#pragma once

#include "qhj/fields/grid.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhj::solvers {

using fields::ComplexField;
using fields::Constants;
using fields::Grid;
using fields::RealField;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PotentialSpec {
  std::string kind = "free";  // free | harmonic | table
  double omega = 1.0;
  double center = 0.0;
  RealField table;  // sampled values, kind == table
};

struct InitialStateSpec {
  std::string kind;  // free-gaussian | harmonic-ground | harmonic-coherent |
                     // kg-plane-wave | table
  double sigma0 = 1.0;
  double x0 = 0.0;
  double k0 = 0.0;        // carrier wave number (momentum = hbar * k0)
  double omega = 1.0;
  double momentum = 0.5;  // kg-plane-wave
  ComplexField table;     // sampled psi, kind == table
  ComplexField table_dot; // sampled time derivative (kg only)
};

struct SolverSpec {
  std::string kind = "tdse";  // tdse | kg
  double time_step = 0.0;
  int steps = 0;
  int output_stride = 10;
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j,
                                std::initializer_list<const char*> allowed,
                                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
  }
}

template <typename T>
inline T get_or(const nlohmann::json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace detail

struct ScenarioConfig {
  Grid grid;
  Constants constants;
  PotentialSpec potential;
  InitialStateSpec initial_state;
  SolverSpec solver;

  static ScenarioConfig from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;
};

inline ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
  using detail::get_or;
  try {
    detail::reject_unknown_keys(
        j, {"grid", "constants", "potential", "initial_state", "solver"}, "config");
    ScenarioConfig cfg;

    const auto& jg = j.at("grid");
    detail::reject_unknown_keys(jg, {"dim", "points", "extent", "origin"}, "grid");
    cfg.grid.dim = get_or(jg, "dim", 1);
    auto points = jg.at("points").get<std::vector<int>>();
    auto extent = jg.at("extent").get<std::vector<double>>();
    if (static_cast<int>(points.size()) != cfg.grid.dim ||
        static_cast<int>(extent.size()) != cfg.grid.dim)
      throw ConfigError("grid points/extent length must equal dim");
    for (int axis = 0; axis < cfg.grid.dim; ++axis) {
      cfg.grid.points[axis] = points[axis];
      cfg.grid.extent[axis] = extent[axis];
      cfg.grid.origin[axis] = -extent[axis] / 2;
    }
    if (cfg.grid.dim == 1) cfg.grid.points[1] = 1;
    if (jg.contains("origin")) {
      auto origin = jg.at("origin").get<std::vector<double>>();
      if (static_cast<int>(origin.size()) != cfg.grid.dim)
        throw ConfigError("grid origin length must equal dim");
      for (int axis = 0; axis < cfg.grid.dim; ++axis) cfg.grid.origin[axis] = origin[axis];
    }
    cfg.grid.validate();

    if (j.contains("constants")) {
      const auto& jc = j.at("constants");
      detail::reject_unknown_keys(jc, {"hbar", "m", "m0", "c_light"}, "constants");
      cfg.constants.hbar = get_or(jc, "hbar", 1.0);
      cfg.constants.m = get_or(jc, "m", 1.0);
      cfg.constants.m0 = get_or(jc, "m0", 1.0);
      cfg.constants.c_light = get_or(jc, "c_light", 1.0);
      for (double v : {cfg.constants.hbar, cfg.constants.m, cfg.constants.m0,
                       cfg.constants.c_light})
        if (!(v > 0)) throw ConfigError("constants must be positive");
    }

    if (j.contains("potential")) {
      const auto& jp = j.at("potential");
      detail::reject_unknown_keys(jp, {"kind", "omega", "center", "table"}, "potential");
      cfg.potential.kind = jp.at("kind").get<std::string>();
      cfg.potential.omega = get_or(jp, "omega", 1.0);
      cfg.potential.center = get_or(jp, "center", 0.0);
      if (cfg.potential.kind == "table")
        cfg.potential.table = jp.at("table").get<std::vector<double>>();
      else if (cfg.potential.kind != "free" && cfg.potential.kind != "harmonic")
        throw ConfigError("unknown potential kind: " + cfg.potential.kind);
      if (cfg.potential.kind == "harmonic" && !(cfg.potential.omega > 0))
        throw ConfigError("harmonic omega must be positive");
    }

    const auto& js = j.at("initial_state");
    detail::reject_unknown_keys(js,
                                {"kind", "sigma0", "x0", "k0", "omega", "momentum",
                                 "table_re", "table_im", "table_dot_re", "table_dot_im"},
                                "initial_state");
    cfg.initial_state.kind = js.at("kind").get<std::string>();
    cfg.initial_state.sigma0 = get_or(js, "sigma0", 1.0);
    cfg.initial_state.x0 = get_or(js, "x0", 0.0);
    cfg.initial_state.k0 = get_or(js, "k0", 0.0);
    cfg.initial_state.omega = get_or(js, "omega", 1.0);
    cfg.initial_state.momentum = get_or(js, "momentum", 0.5);
    if (cfg.initial_state.kind == "table") {
      auto re = js.at("table_re").get<std::vector<double>>();
      auto im = js.at("table_im").get<std::vector<double>>();
      if (re.size() != im.size()) throw ConfigError("table_re/table_im size mismatch");
      cfg.initial_state.table.resize(re.size());
      for (std::size_t i = 0; i < re.size(); ++i)
        cfg.initial_state.table[i] = {re[i], im[i]};
      if (js.contains("table_dot_re")) {
        auto dre = js.at("table_dot_re").get<std::vector<double>>();
        auto dim_ = js.at("table_dot_im").get<std::vector<double>>();
        if (dre.size() != dim_.size() || dre.size() != re.size())
          throw ConfigError("table_dot size mismatch");
        cfg.initial_state.table_dot.resize(dre.size());
        for (std::size_t i = 0; i < dre.size(); ++i)
          cfg.initial_state.table_dot[i] = {dre[i], dim_[i]};
      }
    }

    const auto& jv = j.at("solver");
    detail::reject_unknown_keys(jv, {"kind", "time_step", "steps", "output_stride"},
                                "solver");
    cfg.solver.kind = jv.at("kind").get<std::string>();
    if (cfg.solver.kind != "tdse" && cfg.solver.kind != "kg")
      throw ConfigError("unknown solver kind: " + cfg.solver.kind);
    cfg.solver.time_step = jv.at("time_step").get<double>();
    cfg.solver.steps = jv.at("steps").get<int>();
    cfg.solver.output_stride = get_or(jv, "output_stride", 10);
    if (!(cfg.solver.time_step > 0)) throw ConfigError("time_step must be positive");
    if (cfg.solver.steps < 1) throw ConfigError("steps must be >= 1");
    if (cfg.solver.output_stride < 1) throw ConfigError("output_stride must be >= 1");
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

inline nlohmann::ordered_json ScenarioConfig::to_json() const {
  nlohmann::ordered_json j;
  j["grid"]["dim"] = grid.dim;
  j["grid"]["points"] = std::vector<int>(grid.points.begin(), grid.points.begin() + grid.dim);
  j["grid"]["extent"] =
      std::vector<double>(grid.extent.begin(), grid.extent.begin() + grid.dim);
  j["grid"]["origin"] =
      std::vector<double>(grid.origin.begin(), grid.origin.begin() + grid.dim);
  j["constants"] = {{"hbar", constants.hbar},
                    {"m", constants.m},
                    {"m0", constants.m0},
                    {"c_light", constants.c_light}};
  j["potential"]["kind"] = potential.kind;
  if (potential.kind == "harmonic") {
    j["potential"]["omega"] = potential.omega;
    j["potential"]["center"] = potential.center;
  }
  j["initial_state"]["kind"] = initial_state.kind;
  if (initial_state.kind == "free-gaussian") {
    j["initial_state"]["sigma0"] = initial_state.sigma0;
    j["initial_state"]["x0"] = initial_state.x0;
    j["initial_state"]["k0"] = initial_state.k0;
  } else if (initial_state.kind == "harmonic-ground") {
    j["initial_state"]["omega"] = initial_state.omega;
  } else if (initial_state.kind == "harmonic-coherent") {
    j["initial_state"]["omega"] = initial_state.omega;
    j["initial_state"]["x0"] = initial_state.x0;
  } else if (initial_state.kind == "kg-plane-wave") {
    j["initial_state"]["momentum"] = initial_state.momentum;
  }
  j["solver"] = {{"kind", solver.kind},
                 {"time_step", solver.time_step},
                 {"steps", solver.steps},
                 {"output_stride", solver.output_stride}};
  return j;
}

// Samples the configured potential on the grid (harmonic is isotropic about
// the center on every axis).
inline RealField potential_field(const Grid& g, const PotentialSpec& spec,
                                 const Constants& constants) {
  RealField v(g.size(), 0.0);
  if (spec.kind == "free") return v;
  if (spec.kind == "table") {
    fields::check_size(g, spec.table.size(), "potential table");
    return spec.table;
  }
  const double k = 0.5 * constants.m * spec.omega * spec.omega;
  for (int ix = 0; ix < g.points[0]; ++ix) {
    for (int iy = 0; iy < (g.dim == 2 ? g.points[1] : 1); ++iy) {
      double dx = g.coord(0, ix) - spec.center;
      double r2 = dx * dx;
      if (g.dim == 2) {
        double dy = g.coord(1, iy) - spec.center;
        r2 += dy * dy;
      }
      v[g.index(ix, iy)] = k * r2;
    }
  }
  return v;
}

}  // namespace qhj::solvers
