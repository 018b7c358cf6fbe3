#pragma once

#include "qhj/fields/polar.hpp"
#include "qhj/fields/residuals.hpp"
#include "qhj/solvers/analytic.hpp"
#include "qhj/solvers/config.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace qhj::solvers {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Stored propagation output: snapshots at output strides (always including the
// initial and final instants). For the second-order wave solver, state_dots
// holds the synchronized time derivative of each snapshot.
struct EvolutionRecord {
  Grid grid;
  Constants constants;
  std::string method;
  std::vector<double> times;
  std::vector<ComplexField> states;
  std::vector<ComplexField> state_dots;  // empty for first-order-in-time methods
  nlohmann::ordered_json info;

  int slices() const { return static_cast<int>(times.size()); }

  void check() const {
    if (times.size() != states.size())
      throw SolverError("record: times/states size mismatch");
    if (!state_dots.empty() && state_dots.size() != states.size())
      throw SolverError("record: state_dots size mismatch");
    for (std::size_t k = 1; k < times.size(); ++k)
      if (!(times[k] > times[k - 1]))
        throw SolverError("record: time stamps must increase");
    for (const auto& s : states) fields::check_size(grid, s.size(), "record slice");
  }
};

// Centered phase/density bundle between stored slices k and k+1.
inline fields::PhaseFields record_midpoint_fields(const EvolutionRecord& rec, int k,
                                                  fields::Scheme scheme) {
  if (k < 0 || k + 1 >= rec.slices())
    throw std::out_of_range("record_midpoint_fields: slice index");
  double dt = rec.times[k + 1] - rec.times[k];
  return fields::phase_fields_midpoint(rec.grid, rec.states[k], rec.states[k + 1],
                                       rec.times[k] + dt / 2, dt, rec.constants,
                                       scheme);
}

// Record built by sampling a closed-form state on uniformly spaced stamps;
// an exactly-known stand-in for a solver run.
inline EvolutionRecord analytic_record(const Grid& g, const Constants& constants,
                                       const AnalyticState& state, double t0,
                                       double t1, int slices) {
  if (slices < 2) throw SolverError("analytic record needs at least two slices");
  EvolutionRecord rec;
  rec.grid = g;
  rec.constants = constants;
  rec.method = "analytic";
  for (int k = 0; k < slices; ++k) {
    double t = t0 + (t1 - t0) * k / (slices - 1);
    rec.times.push_back(t);
    rec.states.push_back(state.sample(g, t));
    rec.state_dots.push_back(state.sample_dot(g, t));
  }
  rec.check();
  return rec;
}

// Synchronized relativistic bundle at stored slice k.
inline fields::KgFields record_kg_fields(const EvolutionRecord& rec, int k,
                                         fields::Scheme scheme) {
  if (k < 0 || k >= rec.slices()) throw std::out_of_range("record_kg_fields: slice index");
  if (rec.state_dots.empty())
    throw SolverError("record has no stored time derivatives");
  return fields::kg_fields(rec.grid, rec.states[k], rec.state_dots[k], rec.times[k],
                           rec.constants, scheme);
}

}  // namespace qhj::solvers
