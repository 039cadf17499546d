#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pfl/dynamics.hpp"
#include "pfl/form_factor.hpp"
#include "pfl/grid.hpp"
#include "pfl/potential.hpp"

namespace pfl {

// One structured config file drives a whole run; command-line flags only
// pick the subcommand and the file. Every field has a default, unknown keys
// are rejected, and the fully resolved config is written next to the
// results so any output can be regenerated from one artifact.
struct RunConfig {
  std::string command;  // soliton | audit | simulate | experiment | convergence

  struct {
    std::string profile = "bump";
    double radius = 1.0;
    std::string normalization = "unit-integral";
  } formfactor;

  struct {
    int n = 64;
    double length = -1.0;  // <= 0 resolves to 16 * radius
  } grid;

  struct {
    std::string kind = "quadratic";  // zero | quadratic | quartic-double-well
    double c = 1.0;
    double b = 1.0;
  } potential;

  struct {
    double dt = 0.02;
    double t_end = 20.0;
    int record_every = 10;
    bool allow_wraparound = false;
    double max_travel = -1.0;
    double velocity_threshold = 0.999;
    double drift_budget = 1e-6;
  } integrator;

  struct {
    // simulate / convergence
    std::string initial = "stationary";  // stationary | soliton | zero-field
    std::array<double, 3> q0{0.0, 0.0, 0.0};
    std::array<double, 3> p0{0.0, 0.0, 0.0};
    // soliton-type scenarios
    std::array<double, 3> v{0.0, 0.0, 0.0};
    std::array<double, 3> a{0.0, 0.0, 0.0};
    // audit
    std::vector<double> speeds{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::array<double, 3> direction{1.0, 0.0, 0.0};
    std::array<double, 3> phase_center{0.0, 0.0, 0.0};
    // experiment
    std::string kind = "part_i";
    std::optional<double> eps;  // part ii amplitude; empty means eps*
    double ball_radius = -1.0;
  } scenario;

  struct {
    std::string directory = "out";
    bool write_fields = true;
  } output;

  std::uint64_t seed = 12345;

  static RunConfig load(const std::string& path, const std::string& command);
  static RunConfig from_json(const nlohmann::json& j, const std::string& command);

  nlohmann::json resolved() const;

  FormFactor make_form_factor() const;
  GridSpec make_grid() const;
  Potential make_potential() const;
  IntegratorConfig make_integrator() const;
  Vec3 scenario_q0() const { return {scenario.q0[0], scenario.q0[1], scenario.q0[2]}; }
  Vec3 scenario_p0() const { return {scenario.p0[0], scenario.p0[1], scenario.p0[2]}; }
  Vec3 scenario_v() const { return {scenario.v[0], scenario.v[1], scenario.v[2]}; }
  Vec3 scenario_a() const { return {scenario.a[0], scenario.a[1], scenario.a[2]}; }
};

}  // namespace pfl
