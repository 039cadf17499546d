#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "pfl/attraction.hpp"
#include "test_util.hpp"

using namespace pfl;
namespace tt = pfl::testing;

namespace {
FormFactor unit_bump() { return FormFactor(Profile::bump, 1.0, Normalization::unit_integral); }
}

TEST_CASE("energy norm basics") {
  GridSpec grid(16, 8.0);
  PhaseState zero{FieldState::zero(grid), ParticleState{}};
  CHECK(energy_norm(zero) == 0.0);

  PhaseState particle_only{FieldState::zero(grid),
                           ParticleState{Vec3{3.0, 4.0, 0.0}, Vec3{}}};
  CHECK(energy_norm(particle_only) == doctest::Approx(5.0).epsilon(1e-15));

  // Doubling psi doubles exactly the gradient summand.
  FormFactor f(Profile::bump, 1.0, Normalization::unit_integral);
  SpectralFormFactor sff(f, grid);
  std::mt19937_64 rng(3);
  FieldState fs = tt::random_smooth_field(sff, rng);
  std::vector<cplx> doubled = fs.psi_hat();
  for (auto& c : doubled) c *= 2.0;
  PhaseState y1{fs, ParticleState{}};
  PhaseState y2{FieldState::from_spectral(grid, std::move(doubled), fs.pi_hat()),
                ParticleState{}};
  const double pi_part = fs.pi_l2_grid();
  CHECK(energy_norm(y2) - energy_norm(y1) ==
        doctest::Approx(energy_norm(y1) - pi_part).epsilon(1e-12));
}

TEST_CASE("distance to the stationary set") {
  FormFactor f = unit_bump();
  GridSpec grid(24, 12.0);
  SpectralFormFactor sff(f, grid);
  const std::vector<Vec3> criticals = {Vec3{}};

  SUBCASE("a member has zero distance") {
    PhaseState y = stationary_state(sff, Vec3{});
    const DistanceResult d = dist_to_stationary_set(y, criticals, sff);
    CHECK(d.dist < 1e-12);
    CHECK(d.stationary_index == 0);
  }

  SUBCASE("a kicked member differs only in the momentum summand") {
    PhaseState y = stationary_state(sff, Vec3{});
    y.particle.p = Vec3{0.0, 0.7, 0.0};
    const DistanceResult d = dist_to_stationary_set(y, criticals, sff);
    CHECK(d.dist == doctest::Approx(0.7).epsilon(1e-12));
  }

  SUBCASE("several candidates: the nearest wins") {
    PhaseState y = stationary_state(sff, Vec3{1.0, 0.0, 0.0});
    const std::vector<Vec3> many = {Vec3{-1.0, 0.0, 0.0}, Vec3{1.0, 0.0, 0.0}};
    const DistanceResult d = dist_to_stationary_set(y, many, sff);
    CHECK(d.stationary_index == 1);
    CHECK(d.dist < 1e-12);
  }

  SUBCASE("empty candidate list is rejected") {
    PhaseState y = stationary_state(sff, Vec3{});
    CHECK_THROWS_AS(dist_to_stationary_set(y, {}, sff), std::invalid_argument);
  }

  SUBCASE("distance along a short confined run is recorded, not asserted") {
    GridSpec run_grid(24, 16.0);
    SpectralFormFactor run_sff(f, run_grid);
    PhaseState y0 = stationary_state(run_sff, Vec3{0.3, 0.0, 0.0});
    IntegratorConfig cfg;
    cfg.dt = 0.02;
    cfg.t_end = 2.0;
    cfg.record_every = 20;
    cfg.max_travel = 0.7;
    std::vector<double> trend;
    auto observer = [&](const RecordView& view) {
      PhaseState live{FieldState::from_spectral(run_grid, view.psi_hat, view.pi_hat),
                      ParticleState{view.q, view.p}};
      trend.push_back(dist_to_stationary_set(live, criticals, run_sff).dist);
    };
    run(y0, Potential::quadratic(1.0), run_sff, cfg, observer);
    REQUIRE(trend.size() >= 3);
    std::ostringstream oss;
    for (double d : trend) oss << d << ' ';
    INFO("dist_E(Y(t), ST) along the first oscillation: ", oss.str());
    for (double d : trend) CHECK(std::isfinite(d));
  }
}

TEST_CASE("distance to the soliton manifold") {
  FormFactor f = unit_bump();
  GridSpec grid(24, 12.0);
  SpectralFormFactor sff(f, grid);
  const SolitonParams truth(Vec3{0.4, 0.1, 0.0}, Vec3{0.5, -0.3, 0.2});

  SUBCASE("a member is recovered") {
    PhaseState y = soliton_state(sff, truth);
    const DistanceResult d = dist_to_soliton_manifold(y, sff);
    CHECK(d.dist < 1e-6);
    CHECK((d.v_star - truth.v).norm() < 1e-4);
    CHECK((d.a_star - truth.a).norm() < 1e-4);
    // The (a = q, v from p) heuristic is already optimal for members.
    CHECK(d.seed_value < 1e-6);
  }

  SUBCASE("reported dist equals the objective at the minimizer") {
    PhaseState y = soliton_state(sff, truth);
    y.particle.p += Vec3{0.05, 0.0, 0.0};
    ManifoldDistanceOptions opts;
    const DistanceResult d = dist_to_soliton_manifold(y, sff, opts);
    // Re-evaluate through the same public surface, seeded at the reported
    // minimizer with optimization disabled.
    ManifoldDistanceOptions probe;
    probe.seed = SolitonParams(d.v_star, d.a_star);
    probe.prescan = false;
    probe.max_iterations = 0;
    const DistanceResult again = dist_to_soliton_manifold(y, sff, probe);
    CHECK(again.seed_value == d.dist);
  }

  SUBCASE("a scaled field is off the manifold") {
    PhaseState y = soliton_state(sff, truth);
    std::vector<cplx> scaled = y.field.psi_hat();
    for (auto& c : scaled) c *= 1.1;
    PhaseState off{FieldState::from_spectral(grid, std::move(scaled), y.field.pi_hat()),
                   y.particle};
    const DistanceResult d = dist_to_soliton_manifold(off, sff);
    CHECK(d.dist > 1e-3);
    CHECK(d.v_star.norm() < 1.0);
    CHECK((d.a_star - off.particle.q).norm() < grid.length / 4.0);
  }

  SUBCASE("a far-field bump contributes its own norm") {
    PhaseState y = soliton_state(sff, truth);
    // Additive smooth blob far from the soliton center, built from the
    // same spectral envelope placed at distance 5R.
    std::vector<cplx> psi_hat = y.field.psi_hat();
    PhaseTable far(grid, truth.a + Vec3{5.0, 0.0, 0.0});
    const double amp = 0.02;
    double bump_grad_sq = 0.0;
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j)
        for (int l = 0; l < grid.n; ++l) {
          const int ni = grid.signed_index(i);
          const int nj = grid.signed_index(j);
          const int nl = grid.signed_index(l);
          const int msq = ni * ni + nj * nj + nl * nl;
          if (msq == 0 || grid.is_nyquist(i) || grid.is_nyquist(j) || grid.is_nyquist(l))
            continue;
          const cplx add = amp * sff.at_msq(msq) * far.at(i, j, l);
          psi_hat[grid.index(i, j, l)] += add;
          bump_grad_sq += grid.dk() * grid.dk() * msq * std::norm(add);
        }
    const double bump_norm = std::sqrt(bump_grad_sq * grid.mode_volume());
    PhaseState perturbed{FieldState::from_spectral(grid, std::move(psi_hat), y.field.pi_hat()),
                         y.particle};
    const DistanceResult d = dist_to_soliton_manifold(perturbed, sff);
    CHECK(d.dist == doctest::Approx(bump_norm).epsilon(0.05));
  }
}

TEST_CASE("local energy seminorm") {
  FormFactor f = unit_bump();
  GridSpec grid(32, 16.0);
  SpectralFormFactor sff(f, grid);

  SUBCASE("zero field") {
    PhaseState y{FieldState::zero(grid), ParticleState{}};
    CHECK(local_energy_seminorm(y, SeminormSpec{Vec3{}, 2.0}) == 0.0);
  }

  SUBCASE("pi supported outside the ball contributes nothing") {
    // Opposite-sign pair of far bumps: mean zero, so the gauge projection
    // leaves the samples untouched.
    std::vector<double> psi(grid.size(), 0.0), pi(grid.size(), 0.0);
    const Vec3 far_a{8.0, 8.0, 8.0};
    const Vec3 far_b{8.0, 8.0, 4.0};
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j)
        for (int l = 0; l < grid.n; ++l) {
          auto dist_to = [&](const Vec3& c) {
            const double dx = grid.min_image(grid.coordinate(i), c.x);
            const double dy = grid.min_image(grid.coordinate(j), c.y);
            const double dz = grid.min_image(grid.coordinate(l), c.z);
            return std::sqrt(dx * dx + dy * dy + dz * dz);
          };
          pi[grid.index(i, j, l)] = f.radial(dist_to(far_a)) - f.radial(dist_to(far_b));
        }
    PhaseState y{FieldState::from_grid(grid, psi, pi), ParticleState{}};
    CHECK(local_energy_seminorm(y, SeminormSpec{Vec3{}, 2.0}) < 1e-8);
    CHECK(local_energy_seminorm(y, SeminormSpec{far_a, 2.0}) > 0.1);
  }

  SUBCASE("a ball covering the box reproduces the global field norms") {
    std::mt19937_64 rng(17);
    PhaseState y{tt::random_smooth_field(sff, rng), ParticleState{}};
    const double full =
        local_energy_seminorm(y, SeminormSpec{Vec3{}, grid.length});  // covers everything
    const double grad = energy_norm(y);  // = grad + pi for a particle-free state
    const double pi_norm = y.field.pi_l2_grid();
    const double grad_norm = grad - pi_norm;
    CHECK(full == doctest::Approx(std::sqrt(grad_norm * grad_norm + pi_norm * pi_norm))
                      .epsilon(1e-10));
  }

  SUBCASE("nondecreasing in the radius") {
    std::mt19937_64 rng(23);
    PhaseState y{tt::random_smooth_field(sff, rng), ParticleState{}};
    double prev = 0.0;
    for (double r : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const double s = local_energy_seminorm(y, SeminormSpec{Vec3{1.0, 0.0, 0.0}, r});
      CHECK(s >= prev - 1e-14);
      prev = s;
    }
  }

  SUBCASE("invalid balls are rejected") {
    PhaseState y{FieldState::zero(grid), ParticleState{}};
    CHECK_THROWS_AS(local_energy_seminorm(y, SeminormSpec{Vec3{}, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(local_energy_seminorm(y, SeminormSpec{Vec3{std::nan(""), 0.0, 0.0}, 1.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("part_i experiment: equilibrium start never leaves the set") {
  FormFactor f = unit_bump();
  GridSpec grid(24, 16.0);
  IntegratorConfig cfg;
  cfg.dt = 0.02;
  cfg.t_end = 1.0;
  cfg.record_every = 10;
  cfg.max_travel = 0.5;
  ExperimentParams params;
  params.p0 = Vec3{};
  const ExperimentResult res =
      attraction_experiment(ExperimentKind::part_i, f, grid, cfg, params);
  CHECK(res.floor_value == 0.0);
  for (const auto& row : res.rows) CHECK(row.dist < 1e-9);
}

TEST_CASE("part_i experiment: kicked start keeps the energy gap") {
  FormFactor f = unit_bump();
  GridSpec grid(24, 16.0);
  IntegratorConfig cfg;
  cfg.dt = 0.02;
  cfg.t_end = 2.0;
  cfg.record_every = 20;
  cfg.max_travel = 0.8;
  ExperimentParams params;
  params.p0 = Vec3{1.0, 0.0, 0.0};
  const ExperimentResult res =
      attraction_experiment(ExperimentKind::part_i, f, grid, cfg, params);
  CHECK(res.floor_value == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-9));
  CHECK(res.rows.front().dist == doctest::Approx(1.0).epsilon(1e-9));  // only |p| differs
  for (const auto& row : res.rows) {
    CHECK(std::abs((row.h_total - res.h_target) - res.floor_value) < 1e-4);
    CHECK(row.dist > 0.1 * res.floor_value);
  }
}

TEST_CASE("part_ii experiment: radial data stays radial and relaxes locally") {
  FormFactor f = unit_bump();
  GridSpec grid(32, 16.0);
  IntegratorConfig cfg;
  cfg.dt = 0.02;
  cfg.t_end = 4.0;
  cfg.record_every = 50;
  cfg.max_travel = 0.2;
  ExperimentParams params;
  const ExperimentResult res =
      attraction_experiment(ExperimentKind::part_ii, f, grid, cfg, params);
  CHECK(res.eps_used == doctest::Approx(counterexample_eps_star(f)).epsilon(1e-12));
  CHECK(res.floor_value > 0.0);
  for (const auto& row : res.rows) {
    CHECK(row.drift < 1e-9);           // symmetric data: every substep is exact
    CHECK(row.a_star.norm() < 1e-3);   // projection stays at the origin
    CHECK(row.v_star.norm() < 1e-3);
    CHECK(std::isfinite(row.local_seminorm));
    CHECK(std::isfinite(row.dist));
  }
  CHECK(res.seminorm_final < res.seminorm_initial);
}
