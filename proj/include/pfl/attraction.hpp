#pragma once

#include <optional>
#include <vector>

#include "pfl/dynamics.hpp"
#include "pfl/energy.hpp"
#include "pfl/phase_state.hpp"

namespace pfl {

// Phase-space norm  ||Y||_E = ||grad psi||_L2 + ||pi||_L2 + |q| + |p|.
double energy_norm(const PhaseState& y);

struct DistanceResult {
  double dist = 0.0;
  int stationary_index = -1;  // minimizing entry for set distances
  Vec3 v_star, a_star;        // minimizing soliton parameters
  double seed_value = 0.0;    // objective at the heuristic seed
  int iterations = 0;
  int evaluations = 0;
  bool converged = true;
};

// Distance to the stationary family over an explicit list of critical
// points of V; exact enumeration, no optimization.
DistanceResult dist_to_stationary_set(const PhaseState& y, const std::vector<Vec3>& criticals,
                                      const SpectralFormFactor& sff);
DistanceResult dist_to_stationary_set(const PhaseState& y, const std::vector<Vec3>& criticals,
                                      const FormFactor& f);

struct ManifoldDistanceOptions {
  double tol = 1e-6;         // convergence tolerance on the objective
  int max_iterations = 400;
  bool prescan = true;       // coarse velocity grid around the seed
  std::optional<SolitonParams> seed;  // overrides the (a = q, v from p) heuristic
};

// Distance to the soliton manifold: minimize
//   g(v, a) = ||grad(psi - psi_v(.-a))|| + ||pi - pi_v(.-a)|| + |q - a| + |p - p_v|
// over the six parameters, seeded at a = q, v = p / sqrt(1 + p^2). The
// velocity block is reparameterized as v = tanh(|w|) w-hat, keeping |v|
// below 1 - 1e-6. The reported dist is g at the returned minimizer, an
// upper bound on the true infimum.
DistanceResult dist_to_soliton_manifold(const PhaseState& y, const SpectralFormFactor& sff,
                                        const ManifoldDistanceOptions& opts = {});
DistanceResult dist_to_soliton_manifold(const PhaseState& y, const FormFactor& f,
                                        const ManifoldDistanceOptions& opts = {});

// Ball for local seminorms; geometry is minimum-image on the torus, so the
// radius must stay below L/2.
struct SeminormSpec {
  Vec3 center;
  double radius = 0.0;
};

// ( ∫_B |grad psi|^2 + |pi|^2 )^(1/2) by masked grid quadrature.
double local_energy_seminorm(const PhaseState& y, const SeminormSpec& spec);

// The same seminorm of the deviation from a soliton, without materializing
// the difference state.
double local_deviation_seminorm(const GridSpec& grid, const std::vector<cplx>& psi_hat,
                                const std::vector<cplx>& pi_hat, const SpectralFormFactor& sff,
                                const SolitonParams& target, const SeminormSpec& spec);

// -------------------------------------------------------------------------
// Counterexample experiments.

enum class ExperimentKind { part_i, part_ii };

struct ExperimentParams {
  Vec3 p0{1.0, 0.0, 0.0};     // part i initial momentum
  double quadratic_c = 1.0;   // part i potential strength
  std::optional<double> eps;  // part ii amplitude; defaults to eps*
  double ball_radius = -1.0;  // comoving seminorm ball; < 0 means 2 R_rho
};

struct ExperimentRow {
  double t = 0.0;
  double h_total = 0.0;
  double drift = 0.0;
  double dist = 0.0;
  Vec3 v_star, a_star;
  double local_seminorm = 0.0;
  double floor_value = 0.0;
};

struct ExperimentResult {
  ExperimentKind kind;
  std::vector<ExperimentRow> rows;
  double h_initial = 0.0;      // grid Hamiltonian of Y0
  double h_target = 0.0;       // stationary energy (i) / audited manifold min (ii)
  double floor_value = 0.0;    // max(0, h_initial - h_target)
  double eps_used = 0.0;       // part ii
  double min_dist = 0.0;
  double seminorm_initial = 0.0;
  double seminorm_final = 0.0;
  double sup_qdot = 0.0;
};

// Runs the configured trajectory, attaching per-record distance to the
// relevant attractor set, the comoving-ball seminorm of the deviation from
// the projected attractor element, and the conserved energy-gap floor.
ExperimentResult attraction_experiment(ExperimentKind kind, const FormFactor& f,
                                       const GridSpec& grid, const IntegratorConfig& cfg,
                                       const ExperimentParams& params = {});

}  // namespace pfl
