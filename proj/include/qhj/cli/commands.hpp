#pragma once

#include "qhj/derive/pipelines.hpp"
#include "qhj/fields/io.hpp"
#include "qhj/solvers/kg.hpp"
#include "qhj/solvers/tdse.hpp"
#include "qhj/traj/trajectories.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace qhj::cli {

using nlohmann::ordered_json;

// Exit codes: 0 all requested checks passed, 1 a named check failed,
// 2 usage or configuration error.
enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_usage = 2 };

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& body) {
  std::filesystem::create_directories(path.parent_path().empty()
                                          ? std::filesystem::path(".")
                                          : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw solvers::ConfigError("cannot open for writing: " + path.string());
  out << body;
}

inline void write_json(const std::filesystem::path& path, const ordered_json& j) {
  write_file(path, j.dump(2) + "\n");
}

inline ordered_json load_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw solvers::ConfigError("cannot read config file: " + path.string());
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw solvers::ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
}

inline solvers::EvolutionRecord run_scenario(const solvers::ScenarioConfig& cfg) {
  if (cfg.solver.kind == "tdse") return solvers::solve_tdse(cfg);
  return solvers::solve_kg(cfg);
}

inline std::vector<double> slice_norms(const solvers::EvolutionRecord& rec) {
  std::vector<double> norms;
  norms.reserve(rec.slices());
  for (const auto& s : rec.states) norms.push_back(fields::norm_l2(rec.grid, s));
  return norms;
}

inline std::string state_csv(const fields::Grid& g, const fields::ComplexField& psi) {
  std::ostringstream out;
  out << (g.dim == 2 ? "x,y,re,im\n" : "x,re,im\n");
  for (int i = 0; i < g.size(); ++i) {
    out << fields::format_double(g.coord(0, g.dim == 2 ? i / g.points[1] : i));
    if (g.dim == 2) out << ',' << fields::format_double(g.coord(1, i % g.points[1]));
    out << ',' << fields::format_double(psi[i].real()) << ','
        << fields::format_double(psi[i].imag()) << '\n';
  }
  return out.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// derive <pipeline> [--out-dir DIR]

inline int cmd_derive(const std::string& pipeline, const std::string& out_dir,
                      std::ostream& out, std::ostream& err) {
  derive::DerivationReport report;
  try {
    report = derive::run_pipeline(pipeline);
  } catch (const std::invalid_argument& e) {
    err << "derive: " << e.what() << "\n";
    return exit_usage;
  }
  ordered_json j = report.to_json();
  j["artifact"] = "derivation-report";
  std::filesystem::path dir(out_dir);
  detail::write_json(dir / ("derive-" + pipeline + ".json"), j);
  detail::write_file(dir / ("derive-" + pipeline + ".txt"), report.transcript());
  out << report.transcript();
  return report.pass ? exit_ok : exit_check_failed;
}

// ---------------------------------------------------------------------------
// simulate <config.json> [--out-dir DIR] [--dump-states]

inline int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                        bool dump_states, std::ostream& out) {
  auto cfg = solvers::ScenarioConfig::from_json(detail::load_json(config_path));
  auto rec = detail::run_scenario(cfg);

  ordered_json j;
  j["artifact"] = "simulation";
  j["config"] = cfg.to_json();
  j["method"] = rec.method;
  j["info"] = rec.info;
  j["times"] = rec.times;
  j["slice_norms"] = detail::slice_norms(rec);

  std::filesystem::path dir(out_dir);
  detail::write_json(dir / "simulation.json", j);
  detail::write_file(dir / "final_state.csv",
                     detail::state_csv(rec.grid, rec.states.back()));
  if (dump_states) {
    std::ostringstream all;
    all << "slice,t,x,re,im\n";
    for (int k = 0; k < rec.slices(); ++k)
      for (int i = 0; i < rec.grid.size(); ++i)
        all << k << ',' << fields::format_double(rec.times[k]) << ','
            << fields::format_double(rec.grid.coord(0, i)) << ','
            << fields::format_double(rec.states[k][i].real()) << ','
            << fields::format_double(rec.states[k][i].imag()) << '\n';
    detail::write_file(dir / "states.csv", all.str());
  }
  out << "simulate: " << rec.method << ", " << rec.slices() << " slices, t in ["
      << rec.times.front() << ", " << rec.times.back() << "]\n";
  return exit_ok;
}

// ---------------------------------------------------------------------------
// residuals <config.json> --eq a,b,... [--tol T] [--scheme S] [--mask-eps E]

namespace detail {

inline bool is_relativistic_eq(fields::EquationId id) {
  return id == fields::EquationId::kg_real || id == fields::EquationId::kg_final ||
         id == fields::EquationId::kg_continuity;
}

struct SliceEval {
  double time;
  std::map<fields::EquationId, fields::ResidualResult> results;
};

// Evaluates requested equations over a record: midpoint slice pairs for the
// first-order solver, synchronized slices for the second-order one.
inline std::vector<SliceEval> evaluate_record(
    const solvers::ScenarioConfig& cfg, const solvers::EvolutionRecord& rec,
    const std::vector<fields::EquationId>& eqs, const fields::ResidualOptions& opts) {
  std::vector<SliceEval> evals;
  const bool relativistic = cfg.solver.kind == "kg";
  for (auto id : eqs)
    if (is_relativistic_eq(id) != relativistic)
      throw solvers::ConfigError("equation " + fields::equation_name(id) +
                                 " does not apply to solver kind " + cfg.solver.kind);

  if (relativistic) {
    for (int k = 0; k < rec.slices(); ++k) {
      auto kg = solvers::record_kg_fields(rec, k, opts.scheme);
      SliceEval ev{rec.times[k], {}};
      for (auto id : eqs)
        ev.results.emplace(id, fields::kg_residual(rec.grid, id, kg, rec.constants, opts));
      evals.push_back(std::move(ev));
    }
    return evals;
  }

  for (int k = 0; k + 1 < rec.slices(); ++k) {
    auto ph = solvers::record_midpoint_fields(rec, k, opts.scheme);
    SliceEval ev{ph.time, {}};
    std::optional<fields::RealField> potential;
    auto potential_now = [&]() -> const fields::RealField& {
      if (!potential)
        potential = solvers::potential_field(rec.grid, cfg.potential, rec.constants);
      return *potential;
    };
    for (auto id : eqs) {
      switch (id) {
        case fields::EquationId::bohm_hj:
        case fields::EquationId::general_hj:
          ev.results.emplace(id, fields::hj_residual(rec.grid, id, ph, potential_now(),
                                                     {}, rec.constants, opts));
          break;
        case fields::EquationId::generalized: {
          // identity coefficients: a = R^2, b = 0, c = R^2 V
          fields::CoefficientFields coeff;
          coeff.c.resize(rec.grid.size());
          const auto& v = potential_now();
          for (int i = 0; i < rec.grid.size(); ++i)
            coeff.c[i] = ph.amplitude[i] * ph.amplitude[i] * v[i];
          ev.results.emplace(
              id, fields::generalized_residual(rec.grid, ph, coeff, rec.constants, opts));
          break;
        }
        case fields::EquationId::continuity:
          ev.results.emplace(
              id, fields::continuity_residual(rec.grid, ph, rec.constants, opts));
          break;
        default:
          throw solvers::ConfigError("unhandled equation");
      }
    }
    evals.push_back(std::move(ev));
  }
  return evals;
}

}  // namespace detail

inline int cmd_residuals(const std::string& config_path, const std::string& eq_list,
                         double tol, const std::string& scheme_name, double mask_eps,
                         const std::string& out_dir, std::ostream& out,
                         std::ostream& err) {
  auto cfg = solvers::ScenarioConfig::from_json(detail::load_json(config_path));

  std::vector<fields::EquationId> eqs;
  {
    std::stringstream ss(eq_list);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) eqs.push_back(fields::parse_equation_id(item));
  }
  if (eqs.empty()) throw solvers::ConfigError("no equations requested");

  fields::ResidualOptions opts;
  opts.scheme = fields::parse_scheme(scheme_name);
  opts.mask_eps = mask_eps;

  auto rec = detail::run_scenario(cfg);
  auto evals = detail::evaluate_record(cfg, rec, eqs, opts);

  ordered_json j;
  j["artifact"] = "residuals";
  j["config"] = cfg.to_json();
  j["scheme"] = scheme_name;
  j["mask_eps"] = mask_eps;
  j["tolerance"] = tol;

  std::filesystem::path dir(out_dir);
  bool all_pass = true;
  ordered_json checks = ordered_json::array();
  for (auto id : eqs) {
    const std::string name = fields::equation_name(id);
    double worst = 0;
    std::ostringstream csv;
    csv << "time,max_norm,weighted_l2,mask_fraction\n";
    ordered_json slices = ordered_json::array();
    for (const auto& ev : evals) {
      const auto& rep = ev.results.at(id).report;
      worst = std::max(worst, rep.max_norm);
      slices.push_back(rep.to_json());
      csv << fields::format_double(rep.time) << ','
          << fields::format_double(rep.max_norm) << ','
          << fields::format_double(rep.l2) << ','
          << fields::format_double(rep.mask_fraction) << '\n';
    }
    bool pass = worst <= tol;
    all_pass = all_pass && pass;
    ordered_json check;
    check["equation"] = name;
    check["worst_max_norm"] = worst;
    check["pass"] = pass;
    check["slices"] = std::move(slices);
    checks.push_back(std::move(check));
    detail::write_file(dir / ("residual-" + name + ".csv"), csv.str());

    // final evaluated residual field for external plotting
    const auto& last = evals.back().results.at(id);
    std::ostringstream fcsv;
    fields::write_csv(fcsv, rec.grid, {{"residual", &last.residual}});
    detail::write_file(dir / ("residual-" + name + "-final.csv"), fcsv.str());

    out << "residuals: " << name << " worst masked max " << worst
        << (pass ? " <= " : " > ") << tol << (pass ? " ok" : " FAIL") << "\n";
    if (!pass) err << "check failed: " << name << "\n";
  }
  j["checks"] = std::move(checks);
  j["pass"] = all_pass;
  detail::write_json(dir / "residuals.json", j);
  return all_pass ? exit_ok : exit_check_failed;
}

// ---------------------------------------------------------------------------
// trajectories <config.json> --seeds <file|stratified:N|random:N> [--seed U]

namespace detail {

inline std::vector<double> resolve_seeds(const std::string& spec,
                                         const solvers::EvolutionRecord& rec,
                                         std::uint64_t rng_seed) {
  auto density0 = [&]() {
    fields::RealField rho(rec.states[0].size());
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::norm(rec.states[0][i]);
    return rho;
  };
  if (spec.rfind("stratified:", 0) == 0)
    return traj::stratified_seeds(rec.grid, density0(), std::stoi(spec.substr(11)));
  if (spec.rfind("random:", 0) == 0)
    return traj::random_seeds(rec.grid, density0(), std::stoi(spec.substr(7)), rng_seed);
  std::ifstream in(spec);
  if (!in) throw solvers::ConfigError("cannot read seeds file: " + spec);
  std::vector<double> seeds;
  double x;
  while (in >> x) seeds.push_back(x);
  if (seeds.empty()) throw solvers::ConfigError("seeds file is empty: " + spec);
  return seeds;
}

}  // namespace detail

inline int cmd_trajectories(const std::string& config_path, const std::string& seeds_spec,
                            std::uint64_t rng_seed, double dt_traj, double mask_eps,
                            const std::string& out_dir, std::ostream& out) {
  auto cfg = solvers::ScenarioConfig::from_json(detail::load_json(config_path));
  if (cfg.solver.kind != "tdse")
    throw solvers::ConfigError(
        "trajectories require the first-order solver; no relativistic guidance law "
        "is implemented");
  auto rec = detail::run_scenario(cfg);
  auto seeds = detail::resolve_seeds(seeds_spec, rec, rng_seed);

  traj::TrajectoryOptions opts;
  opts.dt = dt_traj;
  opts.mask_eps = mask_eps;
  auto set = traj::integrate_trajectories(rec, seeds, opts);

  std::ostringstream csv;
  csv << "seed_id,t,x,winding\n";
  for (std::size_t s = 0; s < set.seeds.size(); ++s)
    for (std::size_t k = 0; k < set.times.size(); ++k)
      csv << s << ',' << fields::format_double(set.times[k]) << ','
          << fields::format_double(set.positions[s][k]) << ',' << set.windings[s][k]
          << '\n';

  ordered_json j;
  j["artifact"] = "trajectories";
  j["config"] = cfg.to_json();
  j["seeds_spec"] = seeds_spec;
  j["rng_seed"] = rng_seed;
  j["dt"] = set.dt;
  j["interpolation_order"] = set.interpolation_order;
  j["seeds"] = set.seeds;
  ordered_json endpoints = ordered_json::array();
  for (std::size_t s = 0; s < set.seeds.size(); ++s)
    endpoints.push_back(set.unwrapped(s, set.times.size() - 1, rec.grid.extent[0]));
  j["endpoints"] = std::move(endpoints);

  std::filesystem::path dir(out_dir);
  detail::write_json(dir / "trajectories.json", j);
  detail::write_file(dir / "trajectories.csv", csv.str());
  out << "trajectories: " << set.seeds.size() << " paths over " << set.times.size()
      << " stamps\n";
  return exit_ok;
}

// ---------------------------------------------------------------------------
// report <dir>

inline int cmd_report(const std::string& dir_path, const std::string& out_dir,
                      std::ostream& out) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir_path))
    throw solvers::ConfigError("not a directory: " + dir_path);

  ordered_json summary;
  summary["artifact"] = "summary";
  ordered_json derivations = ordered_json::array();
  ordered_json residuals = ordered_json::array();
  ordered_json trajectories = ordered_json::array();
  ordered_json simulations = ordered_json::array();
  bool all_pass = true;

  std::vector<fs::path> paths;
  for (const auto& entry : fs::recursive_directory_iterator(dir_path))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());

  for (const auto& p : paths) {
    ordered_json j;
    try {
      j = detail::load_json(p);
    } catch (const solvers::ConfigError&) {
      continue;
    }
    if (!j.contains("artifact")) continue;
    const std::string kind = j["artifact"];
    ordered_json item;
    item["file"] = fs::relative(p, dir_path).string();
    if (kind == "derivation-report") {
      item["pipeline"] = j.value("pipeline", "");
      item["pass"] = j.value("pass", false);
      all_pass = all_pass && j.value("pass", false);
      derivations.push_back(std::move(item));
    } else if (kind == "residuals") {
      item["pass"] = j.value("pass", false);
      ordered_json worst;
      for (const auto& c : j.value("checks", ordered_json::array()))
        worst[c.value("equation", "?")] = c.value("worst_max_norm", 0.0);
      item["worst_max_norm"] = std::move(worst);
      all_pass = all_pass && j.value("pass", false);
      residuals.push_back(std::move(item));
    } else if (kind == "trajectories") {
      item["count"] = j.value("seeds", ordered_json::array()).size();
      trajectories.push_back(std::move(item));
    } else if (kind == "simulation") {
      item["method"] = j.value("method", "");
      simulations.push_back(std::move(item));
    }
  }
  summary["derivations"] = std::move(derivations);
  summary["residuals"] = std::move(residuals);
  summary["simulations"] = std::move(simulations);
  summary["trajectories"] = std::move(trajectories);
  summary["pass"] = all_pass;
  detail::write_json(fs::path(out_dir) / "summary.json", summary);
  out << "report: " << (all_pass ? "all checks passed" : "FAILURES present") << "\n";
  return all_pass ? exit_ok : exit_check_failed;
}

// ---------------------------------------------------------------------------

inline int execute_command(const std::vector<std::string>& args, std::ostream& out,
                           std::ostream& err) {
  CLI::App app{"replay of an operator-ordering derivation with numerical checks"};
  app.require_subcommand(1);

  std::string pipeline, config_path, out_dir = ".", eq_list, seeds_spec, report_dir;
  std::string scheme_name = "spectral";
  double tol = 1e-5, mask_eps = 1e-6, dt_traj = 0;
  std::uint64_t rng_seed = 0;
  bool dump_states = false;

  auto* derive_cmd = app.add_subcommand("derive", "replay a derivation against goldens");
  derive_cmd->add_option("pipeline", pipeline, "one of: nonrel-general, nonrel-bohm, relativistic")
      ->required();
  derive_cmd->add_option("--out-dir", out_dir, "artifact directory");

  auto* simulate_cmd = app.add_subcommand("simulate", "propagate a configured scenario");
  simulate_cmd->add_option("config", config_path, "scenario config JSON")->required();
  simulate_cmd->add_option("--out-dir", out_dir, "artifact directory");
  simulate_cmd->add_flag("--dump-states", dump_states, "write every stored slice as CSV");

  auto* residuals_cmd =
      app.add_subcommand("residuals", "evaluate equation residuals on solver output");
  residuals_cmd->add_option("config", config_path, "scenario config JSON")->required();
  residuals_cmd->add_option("--eq", eq_list, "comma-separated equation ids")->required();
  residuals_cmd->add_option("--tol", tol, "gate on worst masked max-norm");
  residuals_cmd->add_option("--scheme", scheme_name, "spectral or central");
  residuals_cmd->add_option("--mask-eps", mask_eps, "amplitude mask threshold");
  residuals_cmd->add_option("--out-dir", out_dir, "artifact directory");

  auto* traj_cmd = app.add_subcommand("trajectories", "integrate guidance-law paths");
  traj_cmd->add_option("config", config_path, "scenario config JSON")->required();
  traj_cmd->add_option("--seeds", seeds_spec, "seeds file, stratified:N, or random:N")
      ->required();
  traj_cmd->add_option("--seed", rng_seed, "RNG seed for random:N");
  traj_cmd->add_option("--dt", dt_traj, "integrator step (default: slice spacing)");
  traj_cmd->add_option("--mask-eps", mask_eps, "amplitude mask threshold");
  traj_cmd->add_option("--out-dir", out_dir, "artifact directory");

  auto* report_cmd = app.add_subcommand("report", "aggregate artifact JSONs");
  report_cmd->add_option("dir", report_dir, "directory of artifacts")->required();
  report_cmd->add_option("--out-dir", out_dir, "summary directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  }

  try {
    if (derive_cmd->parsed()) return cmd_derive(pipeline, out_dir, out, err);
    if (simulate_cmd->parsed())
      return cmd_simulate(config_path, out_dir, dump_states, out);
    if (residuals_cmd->parsed())
      return cmd_residuals(config_path, eq_list, tol, scheme_name, mask_eps, out_dir,
                           out, err);
    if (traj_cmd->parsed())
      return cmd_trajectories(config_path, seeds_spec, rng_seed, dt_traj, mask_eps,
                              out_dir, out);
    if (report_cmd->parsed()) return cmd_report(report_dir, out_dir, out);
  } catch (const solvers::ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_check_failed;
  }
  return exit_usage;
}

}  // namespace qhj::cli
