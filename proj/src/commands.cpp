#include "pfl/commands.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>

#include "pfl/attraction.hpp"
#include "pfl/csv.hpp"
#include "pfl/state_builders.hpp"

namespace pfl {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path prepare_output(const RunConfig& cfg) {
  fs::path dir(cfg.output.directory);
  fs::create_directories(dir);
  std::ofstream out(dir / "resolved_config.json");
  out << cfg.resolved().dump(2) << '\n';
  return dir;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

// Flat binary snapshot: magic, version, N, L, then psi and pi row-major.
void write_field_binary(const fs::path& path, const FieldState& field) {
  std::ofstream out(path, std::ios::binary);
  const char magic[8] = {'P', 'F', 'L', 'F', 'I', 'E', 'L', 'D'};
  const std::uint32_t version = 1;
  const std::uint32_t n = static_cast<std::uint32_t>(field.grid().n);
  const double length = field.grid().length;
  out.write(magic, sizeof(magic));
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(&length), sizeof(length));
  out.write(reinterpret_cast<const char*>(field.psi().data()),
            static_cast<std::streamsize>(field.psi().size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(field.pi().data()),
            static_cast<std::streamsize>(field.pi().size() * sizeof(double)));
}

// Plane z = const through the given coordinate, as x,y,psi,pi rows.
void write_field_slice(const fs::path& path, const FieldState& field, double z_coord) {
  const GridSpec& grid = field.grid();
  const int n = grid.n;
  int zi = static_cast<int>(std::lround(z_coord / grid.h())) % n;
  if (zi < 0) zi += n;
  CsvWriter csv(path.string());
  csv.header({"x", "y", "psi", "pi"});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::size_t idx = grid.index(i, j, zi);
      csv.row({grid.coordinate(i), grid.coordinate(j), field.psi()[idx], field.pi()[idx]});
    }
}

PhaseState build_initial_state(const RunConfig& cfg, const SpectralFormFactor& sff) {
  const std::string& kind = cfg.scenario.initial;
  if (kind == "stationary") {
    PhaseState y = stationary_state(sff, cfg.scenario_q0());
    y.particle.p = cfg.scenario_p0();
    return y;
  }
  if (kind == "soliton")
    return soliton_state(sff, SolitonParams(cfg.scenario_v(), cfg.scenario_a()));
  if (kind == "zero-field")
    return PhaseState{FieldState::zero(sff.grid()),
                      ParticleState{cfg.scenario_q0(), cfg.scenario_p0()}};
  throw std::invalid_argument("config: unknown initial state: " + kind);
}

void write_trajectory_csv(const fs::path& path, const TrajectoryRecord& record) {
  CsvWriter csv(path.string());
  csv.header({"t", "q1", "q2", "q3", "p1", "p2", "p3", "qdot_norm", "E_kin", "E_pot", "E_pi",
              "E_grad", "E_int", "E_total", "drift"});
  for (const auto& pt : record.points) {
    csv.row({pt.t, pt.q.x, pt.q.y, pt.q.z, pt.p.x, pt.p.y, pt.p.z, pt.qdot_norm,
             pt.energy.kinetic, pt.energy.potential, pt.energy.field_pi, pt.energy.field_grad,
             pt.energy.interaction, pt.energy.total, pt.drift});
  }
}

double max_drift(const TrajectoryRecord& record) {
  double d = 0.0;
  for (const auto& pt : record.points) d = std::max(d, pt.drift);
  return d;
}

}  // namespace

int run_soliton(const RunConfig& cfg) {
  const fs::path dir = prepare_output(cfg);
  const FormFactor f = cfg.make_form_factor();
  const GridSpec grid = cfg.make_grid();
  const SolitonParams params(cfg.scenario_v(), cfg.scenario_a());

  SpectralFormFactor sff(f, grid);
  const PhaseState y = soliton_state(sff, params);
  const AuditReport audit = audit_chain(f, params.v);
  const EnergyBreakdown grid_energy = hamiltonian(y, Potential::zero(), sff);

  json j;
  j["v"] = {params.v.x, params.v.y, params.v.z};
  j["a"] = {params.a.x, params.a.y, params.a.z};
  const Vec3 pv = params.momentum();
  j["p_v"] = {pv.x, pv.y, pv.z};
  j["p_v_norm"] = pv.norm();
  j["speed"] = params.speed();
  j["h_quadrature"] = audit.h_total;
  j["h_grid"] = grid_energy.total;
  j["delta_rho"] = audit.delta_rho;
  j["energy_terms"] = {{"kinetic", audit.kinetic},
                       {"t_pi", audit.t_pi},
                       {"t_grad", audit.t_grad},
                       {"c_cross", audit.c_cross}};
  write_json(dir / "soliton.json", j);

  write_field_slice(dir / "field_slice.csv", y.field, params.a.z);
  if (cfg.output.write_fields) write_field_binary(dir / "field.bin", y.field);
  return 0;
}

int run_audit(const RunConfig& cfg) {
  const fs::path dir = prepare_output(cfg);
  const FormFactor f = cfg.make_form_factor();

  Vec3 dir_v{cfg.scenario.direction[0], cfg.scenario.direction[1], cfg.scenario.direction[2]};
  if (dir_v.norm() == 0.0) throw std::invalid_argument("audit: zero sweep direction");
  dir_v = dir_v / dir_v.norm();

  AuditOptions opts;
  opts.phase_center = Vec3{cfg.scenario.phase_center[0], cfg.scenario.phase_center[1],
                           cfg.scenario.phase_center[2]};

  CsvWriter csv((dir / "audit.csv").string());
  csv.header({"v", "T_pi", "T_grad", "C_cross", "delta_rho", "H", "margin_s1", "margin_s2",
              "margin_s3", "margin_s4", "margin_s5"});

  json rows = json::array();
  double k_max = 0.0, tail = 0.0, quad_err = 0.0;
  for (double s : cfg.scenario.speeds) {
    const AuditReport r = audit_chain(f, s * dir_v, opts);
    csv.row({r.speed, r.t_pi, r.t_grad, r.c_cross, r.delta_rho, r.h_total, r.margin_s1,
             r.margin_s2, r.margin_s3, r.margin_s4, r.margin_s5});
    rows.push_back({{"v", r.speed},
                    {"kinetic", r.kinetic},
                    {"t_pi", r.t_pi},
                    {"t_grad", r.t_grad},
                    {"c_cross", r.c_cross},
                    {"h", r.h_total},
                    {"cross_phase_variant", r.cross_phase_variant},
                    {"margins", {r.margin_s1, r.margin_s2, r.margin_s3, r.margin_s4,
                                 r.margin_s5}}});
    k_max = r.k_max;
    tail = std::max(tail, r.tail_bound);
    quad_err = std::max(quad_err, r.quadrature_error);
  }

  json summary;
  summary["delta_rho"] = delta_rho(f);
  summary["k_max"] = k_max;
  summary["tail_bound"] = tail;
  summary["quadrature_error"] = quad_err;
  summary["mu_nodes"] = opts.mu_nodes;
  summary["phase_center"] = cfg.scenario.phase_center;
  summary["rows"] = rows;
  write_json(dir / "audit.json", summary);
  return 0;
}

int run_simulate(const RunConfig& cfg) {
  const fs::path dir = prepare_output(cfg);
  const FormFactor f = cfg.make_form_factor();
  const GridSpec grid = cfg.make_grid();
  SpectralFormFactor sff(f, grid);

  const PhaseState y0 = build_initial_state(cfg, sff);
  const TrajectoryRecord record = run(y0, cfg.make_potential(), sff, cfg.make_integrator());

  write_trajectory_csv(dir / "trajectory.csv", record);

  const double drift = max_drift(record);
  json summary;
  summary["max_drift"] = drift;
  summary["final_drift"] = record.points.back().drift;
  summary["sup_qdot"] = record.sup_qdot;
  summary["steps"] = record.steps;
  summary["substeps"] = record.substeps;
  summary["velocity_flagged"] = record.velocity_flagged;
  summary["drift_budget"] = cfg.integrator.drift_budget;
  summary["within_budget"] = drift <= cfg.integrator.drift_budget;
  write_json(dir / "summary.json", summary);

  return drift <= cfg.integrator.drift_budget ? 0 : 2;
}

int run_experiment(const RunConfig& cfg) {
  const fs::path dir = prepare_output(cfg);
  const FormFactor f = cfg.make_form_factor();
  const GridSpec grid = cfg.make_grid();

  ExperimentKind kind;
  if (cfg.scenario.kind == "part_i") {
    kind = ExperimentKind::part_i;
    if (cfg.potential.kind != "quadratic")
      throw std::invalid_argument("experiment part_i requires the quadratic potential");
  } else if (cfg.scenario.kind == "part_ii") {
    kind = ExperimentKind::part_ii;
    if (cfg.potential.kind != "zero")
      throw std::invalid_argument("experiment part_ii requires the zero potential");
  } else {
    throw std::invalid_argument("experiment: unknown kind: " + cfg.scenario.kind);
  }

  ExperimentParams params;
  params.p0 = cfg.scenario_p0();
  params.quadratic_c = cfg.potential.c;
  params.eps = cfg.scenario.eps;
  params.ball_radius = cfg.scenario.ball_radius;

  const ExperimentResult result =
      attraction_experiment(kind, f, grid, cfg.make_integrator(), params);

  CsvWriter csv((dir / "experiment.csv").string());
  csv.header({"t", "H_total", "drift", "dist_E", "v_star1", "v_star2", "v_star3", "a_star1",
              "a_star2", "a_star3", "local_seminorm", "floor"});
  for (const auto& row : result.rows) {
    csv.row({row.t, row.h_total, row.drift, row.dist, row.v_star.x, row.v_star.y, row.v_star.z,
             row.a_star.x, row.a_star.y, row.a_star.z, row.local_seminorm, row.floor_value});
  }

  json manifest;
  manifest["config"] = cfg.resolved();
  manifest["kind"] = cfg.scenario.kind;
  manifest["h_initial"] = result.h_initial;
  manifest["h_target"] = result.h_target;
  manifest["floor"] = result.floor_value;
  manifest["min_dist"] = result.min_dist;
  manifest["seminorm_initial"] = result.seminorm_initial;
  manifest["seminorm_final"] = result.seminorm_final;
  manifest["sup_qdot"] = result.sup_qdot;
  if (kind == ExperimentKind::part_ii) manifest["eps"] = result.eps_used;
  write_json(dir / "manifest.json", manifest);
  return 0;
}

int run_convergence(const RunConfig& cfg) {
  const fs::path dir = prepare_output(cfg);
  const FormFactor f = cfg.make_form_factor();
  const GridSpec base_grid = cfg.make_grid();
  const GridSpec fine_grid(2 * base_grid.n, 2.0 * base_grid.length);

  // Time-step study on the configured scenario: halving dt should cut the
  // energy drift by about four.
  auto drift_at = [&](double dt) {
    SpectralFormFactor sff(f, base_grid);
    IntegratorConfig icfg = cfg.make_integrator();
    icfg.dt = dt;
    icfg.record_every = std::max(1, cfg.integrator.record_every);
    const PhaseState y0 = build_initial_state(cfg, sff);
    return max_drift(run(y0, cfg.make_potential(), sff, icfg));
  };
  const double drift_base = drift_at(cfg.integrator.dt);
  const double drift_half = drift_at(0.5 * cfg.integrator.dt);

  // Grid study: doubling N and L together refines the mean-zero gauge
  // offset and the box truncation at fixed resolution.
  const Vec3 v_probe = cfg.scenario_v().norm() > 0.0 ? cfg.scenario_v() : Vec3{0.5, 0.0, 0.0};
  const AuditReport audit = audit_chain(f, v_probe);
  auto grid_mismatch = [&](const GridSpec& g) {
    SpectralFormFactor sff(f, g);
    const PhaseState y = soliton_state(sff, SolitonParams(v_probe, Vec3{}));
    return std::abs(hamiltonian(y, Potential::zero(), sff).total - audit.h_total);
  };
  auto stationary_identity_error = [&](const GridSpec& g) {
    SpectralFormFactor sff(f, g);
    const PhaseState y = stationary_state(sff, Vec3{});
    const double h = hamiltonian(y, Potential::zero(), sff).total;
    const double target = 1.0 - 0.5 * audit.delta_rho;
    return std::abs(h + mean_zero_gauge_energy_shift(f, g) - target);
  };
  const double soliton_base = grid_mismatch(base_grid);
  const double soliton_fine = grid_mismatch(fine_grid);
  const double stationary_base = stationary_identity_error(base_grid);
  const double stationary_fine = stationary_identity_error(fine_grid);

  CsvWriter csv((dir / "convergence.csv").string());
  csv.header({"study", "base", "refined", "ratio"});
  // study ids: 0 = drift vs dt, 1 = soliton H grid vs quadrature,
  //            2 = stationary energy identity
  csv.row({0.0, drift_base, drift_half, drift_base / std::max(drift_half, 1e-300)});
  csv.row({1.0, soliton_base, soliton_fine, soliton_base / std::max(soliton_fine, 1e-300)});
  csv.row({2.0, stationary_base, stationary_fine,
           stationary_base / std::max(stationary_fine, 1e-300)});

  json summary;
  summary["drift"] = {{"dt", cfg.integrator.dt},
                      {"base", drift_base},
                      {"half_dt", drift_half},
                      {"ratio", drift_base / std::max(drift_half, 1e-300)}};
  summary["soliton_grid_vs_quadrature"] = {{"base", soliton_base}, {"refined", soliton_fine}};
  summary["stationary_identity"] = {{"base", stationary_base}, {"refined", stationary_fine}};
  summary["grids"] = {{"base", {base_grid.n, base_grid.length}},
                      {"refined", {fine_grid.n, fine_grid.length}}};
  write_json(dir / "convergence.json", summary);
  return 0;
}

int dispatch(const RunConfig& cfg) {
  if (cfg.command == "soliton") return run_soliton(cfg);
  if (cfg.command == "audit") return run_audit(cfg);
  if (cfg.command == "simulate") return run_simulate(cfg);
  if (cfg.command == "experiment") return run_experiment(cfg);
  if (cfg.command == "convergence") return run_convergence(cfg);
  throw std::invalid_argument("unknown subcommand: " + cfg.command);
}

}  // namespace pfl
