#include "pfl/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace pfl {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key()))
      throw std::invalid_argument("config: unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

void read_vec(const json& j, const char* key, std::array<double, 3>& target) {
  if (!j.contains(key)) return;
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 3)
    throw std::invalid_argument(std::string("config: '") + key + "' must be a 3-vector");
  for (int i = 0; i < 3; ++i) target[i] = a[i].get<double>();
}

std::set<std::string> scenario_keys(const std::string& command) {
  if (command == "soliton") return {"v", "a"};
  if (command == "audit") return {"speeds", "direction", "phase_center"};
  if (command == "simulate" || command == "convergence")
    return {"initial", "q0", "p0", "v", "a"};
  if (command == "experiment") return {"kind", "p0", "eps", "ball_radius"};
  throw std::invalid_argument("unknown subcommand: " + command);
}

}  // namespace

RunConfig RunConfig::from_json(const json& j, const std::string& command) {
  RunConfig cfg;
  cfg.command = command;
  // "command" is written into resolved configs for the record and ignored
  // on input; the subcommand always comes from the command line.
  reject_unknown(j, {"formfactor", "grid", "potential", "integrator", "scenario", "output",
                     "seed", "command"},
                 "top level");

  if (j.contains("formfactor")) {
    const auto& ff = j.at("formfactor");
    reject_unknown(ff, {"profile", "radius", "normalization"}, "formfactor");
    read(ff, "profile", cfg.formfactor.profile);
    read(ff, "radius", cfg.formfactor.radius);
    read(ff, "normalization", cfg.formfactor.normalization);
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    reject_unknown(g, {"n", "length"}, "grid");
    read(g, "n", cfg.grid.n);
    read(g, "length", cfg.grid.length);
  }
  if (j.contains("potential")) {
    const auto& p = j.at("potential");
    reject_unknown(p, {"kind", "c", "b"}, "potential");
    read(p, "kind", cfg.potential.kind);
    read(p, "c", cfg.potential.c);
    read(p, "b", cfg.potential.b);
  }
  if (j.contains("integrator")) {
    const auto& it = j.at("integrator");
    reject_unknown(it,
                   {"dt", "t_end", "record_every", "allow_wraparound", "max_travel",
                    "velocity_threshold", "drift_budget"},
                   "integrator");
    read(it, "dt", cfg.integrator.dt);
    read(it, "t_end", cfg.integrator.t_end);
    read(it, "record_every", cfg.integrator.record_every);
    read(it, "allow_wraparound", cfg.integrator.allow_wraparound);
    read(it, "max_travel", cfg.integrator.max_travel);
    read(it, "velocity_threshold", cfg.integrator.velocity_threshold);
    read(it, "drift_budget", cfg.integrator.drift_budget);
  }
  if (j.contains("scenario")) {
    const auto& s = j.at("scenario");
    reject_unknown(s, scenario_keys(command), "scenario");
    read(s, "initial", cfg.scenario.initial);
    read_vec(s, "q0", cfg.scenario.q0);
    read_vec(s, "p0", cfg.scenario.p0);
    read_vec(s, "v", cfg.scenario.v);
    read_vec(s, "a", cfg.scenario.a);
    if (s.contains("speeds")) cfg.scenario.speeds = s.at("speeds").get<std::vector<double>>();
    read_vec(s, "direction", cfg.scenario.direction);
    read_vec(s, "phase_center", cfg.scenario.phase_center);
    read(s, "kind", cfg.scenario.kind);
    if (s.contains("eps")) cfg.scenario.eps = s.at("eps").get<double>();
    read(s, "ball_radius", cfg.scenario.ball_radius);
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    reject_unknown(o, {"directory", "write_fields"}, "output");
    read(o, "directory", cfg.output.directory);
    read(o, "write_fields", cfg.output.write_fields);
  }
  read(j, "seed", cfg.seed);

  // Resolve defaults that depend on other fields.
  if (cfg.grid.length <= 0.0) cfg.grid.length = 16.0 * cfg.formfactor.radius;
  if (cfg.scenario.ball_radius <= 0.0) cfg.scenario.ball_radius = 2.0 * cfg.formfactor.radius;
  return cfg;
}

RunConfig RunConfig::load(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config: " + path + ": " + e.what());
  }
  return from_json(j, command);
}

nlohmann::json RunConfig::resolved() const {
  json j;
  j["formfactor"] = {{"profile", formfactor.profile},
                     {"radius", formfactor.radius},
                     {"normalization", formfactor.normalization}};
  j["grid"] = {{"n", grid.n}, {"length", grid.length}};
  j["potential"] = {{"kind", potential.kind}, {"c", potential.c}, {"b", potential.b}};
  j["integrator"] = {{"dt", integrator.dt},
                     {"t_end", integrator.t_end},
                     {"record_every", integrator.record_every},
                     {"allow_wraparound", integrator.allow_wraparound},
                     {"max_travel", integrator.max_travel},
                     {"velocity_threshold", integrator.velocity_threshold},
                     {"drift_budget", integrator.drift_budget}};
  json s;
  if (command == "soliton") {
    s = {{"v", scenario.v}, {"a", scenario.a}};
  } else if (command == "audit") {
    s = {{"speeds", scenario.speeds},
         {"direction", scenario.direction},
         {"phase_center", scenario.phase_center}};
  } else if (command == "experiment") {
    s = {{"kind", scenario.kind}, {"p0", scenario.p0}, {"ball_radius", scenario.ball_radius}};
    if (scenario.eps) s["eps"] = *scenario.eps;
  } else {
    s = {{"initial", scenario.initial},
         {"q0", scenario.q0},
         {"p0", scenario.p0},
         {"v", scenario.v},
         {"a", scenario.a}};
  }
  j["scenario"] = s;
  j["output"] = {{"directory", output.directory}, {"write_fields", output.write_fields}};
  j["seed"] = seed;
  j["command"] = command;
  return j;
}

FormFactor RunConfig::make_form_factor() const {
  return FormFactor(profile_from_string(formfactor.profile), formfactor.radius,
                    normalization_from_string(formfactor.normalization));
}

GridSpec RunConfig::make_grid() const { return GridSpec(grid.n, grid.length); }

Potential RunConfig::make_potential() const {
  if (potential.kind == "zero") return Potential::zero();
  if (potential.kind == "quadratic") return Potential::quadratic(potential.c);
  if (potential.kind == "quartic-double-well" || potential.kind == "double-well")
    return Potential::double_well(potential.c, potential.b);
  throw std::invalid_argument("config: unknown potential kind: " + potential.kind);
}

IntegratorConfig RunConfig::make_integrator() const {
  IntegratorConfig cfg;
  cfg.dt = integrator.dt;
  cfg.t_end = integrator.t_end;
  cfg.record_every = integrator.record_every;
  cfg.allow_wraparound = integrator.allow_wraparound;
  cfg.max_travel = integrator.max_travel;
  cfg.velocity_threshold = integrator.velocity_threshold;
  return cfg;
}

}  // namespace pfl
