#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pfl/attraction.hpp"
#include "pfl/dynamics.hpp"
#include "test_util.hpp"

using namespace pfl;
namespace tt = pfl::testing;

namespace {
FormFactor unit_bump() { return FormFactor(Profile::bump, 1.0, Normalization::unit_integral); }

PhaseState negate_momenta(const PhaseState& y) {
  std::vector<cplx> pi_hat = y.field.pi_hat();
  for (auto& c : pi_hat) c = -c;
  return PhaseState{FieldState::from_spectral(y.field.grid(), y.field.psi_hat(), std::move(pi_hat)),
                    ParticleState{y.particle.q, -y.particle.p}};
}
}  // namespace

TEST_CASE("potential kinds") {
  CHECK(Potential::zero().value(Vec3{5.0, 0.0, 0.0}) == 0.0);
  CHECK(Potential::zero().gradient(Vec3{5.0, 0.0, 0.0}).norm() == 0.0);

  const Potential quad = Potential::quadratic(2.0);
  CHECK(quad.value(Vec3{1.0, 2.0, 0.0}) == doctest::Approx(10.0));
  CHECK((quad.gradient(Vec3{1.0, 2.0, 0.0}) - Vec3{4.0, 8.0, 0.0}).norm() < 1e-15);

  const Potential well = Potential::double_well(0.5, 1.0);
  CHECK(well.value(Vec3{1.0, 0.0, 0.0}) == 0.0);  // on the |q| = b sphere
  CHECK(well.value(Vec3{}) == doctest::Approx(0.5));
  CHECK(well.gradient(Vec3{}).norm() == 0.0);
  CHECK(well.gradient(Vec3{1.0, 0.0, 0.0}).norm() < 1e-15);
  // Confining: grows along any ray.
  CHECK(well.value(Vec3{3.0, 0.0, 0.0}) > well.value(Vec3{2.0, 0.0, 0.0}));
  CHECK(well.value(Vec3{0.0, 0.0, 9.0}) > well.value(Vec3{0.0, 0.0, 3.0}));
  // Gradient is continuous across the well bottom.
  const double eps = 1e-6;
  CHECK((well.gradient(Vec3{1.0 + eps, 0.0, 0.0}) - well.gradient(Vec3{1.0 - eps, 0.0, 0.0}))
            .norm() < 1e-4);

  CHECK_THROWS_AS(Potential::quadratic(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Potential::double_well(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("force vanishes in the symmetric configuration") {
  FormFactor f = unit_bump();
  GridSpec grid(32, 16.0);
  SpectralFormFactor sff(f, grid);
  const Vec3 q{0.75, -0.25, 0.5};
  PhaseState y = stationary_state(sff, q);
  CHECK(force(sff, y.field.psi_hat(), q).norm() < 1e-10);
}

TEST_CASE("force is antisymmetric in the displacement") {
  FormFactor f = unit_bump();
  GridSpec grid(32, 16.0);
  SpectralFormFactor sff(f, grid);
  PhaseState y = stationary_state(sff, Vec3{});
  const Vec3 d{0.15, -0.1, 0.05};
  const Vec3 fp = force(sff, y.field.psi_hat(), d);
  const Vec3 fm = force(sff, y.field.psi_hat(), -d);
  CHECK((fp + fm).norm() < 1e-10);
}

TEST_CASE("force equals minus the gradient of the interaction energy") {
  FormFactor f = unit_bump();
  GridSpec grid(32, 16.0);
  SpectralFormFactor sff(f, grid);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  const Potential v0 = Potential::zero();
  const double delta = 1e-5;

  auto interaction = [&](const FieldState& fs, const Vec3& q) {
    return spectral_energy(sff, fs.psi_hat(), fs.pi_hat(), q, Vec3{}, v0).interaction;
  };

  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    FieldState fs = tt::random_smooth_field(sff, rng);
    const Vec3 q{uni(rng), uni(rng), uni(rng)};
    const Vec3 fr = force(sff, fs.psi_hat(), q);
    for (int axis = 0; axis < 3; ++axis) {
      Vec3 e{axis == 0 ? 1.0 : 0.0, axis == 1 ? 1.0 : 0.0, axis == 2 ? 1.0 : 0.0};
      const double grad =
          (interaction(fs, q + delta * e) - interaction(fs, q - delta * e)) / (2.0 * delta);
      worst = std::max(worst, std::abs(fr[axis] + grad));
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("stationary state is a fixed point of the step") {
  FormFactor f = unit_bump();
  GridSpec grid(32, 16.0);
  SpectralFormFactor sff(f, grid);
  const Vec3 q_star{};  // critical point of the quadratic potential
  PhaseState y = stationary_state(sff, q_star);
  PhaseState y1 = step(y, Potential::quadratic(1.0), sff, 0.02);
  CHECK(tt::state_distance(y1, y) < 1e-10);
}

TEST_CASE("free soliton travels at its velocity") {
  FormFactor f = unit_bump();
  GridSpec grid(48, 16.0);
  SpectralFormFactor sff(f, grid);
  SolitonParams s(Vec3{0.5, 0.0, 0.0}, Vec3{-1.0, 0.0, 0.0});
  PhaseState y = soliton_state(sff, s);
  IntegratorConfig cfg;
  cfg.dt = 0.02;
  cfg.t_end = 4.0;
  cfg.record_every = 50;
  cfg.allow_wraparound = true;

  std::vector<cplx> psi_final, pi_final;
  auto capture = [&](const RecordView& view) {
    psi_final = view.psi_hat;
    pi_final = view.pi_hat;
  };
  TrajectoryRecord rec = run(y, Potential::zero(), sff, cfg, capture);
  const Vec3 expect = s.a + cfg.t_end * s.v;
  CHECK((rec.points.back().q - expect).norm() < 1e-3 * cfg.t_end);
  CHECK((rec.points.back().p - s.momentum()).norm() < 1e-4);

  // Field agrees with the translated soliton in the local energy seminorm
  // around the particle, relative to the soliton's own local content.
  SolitonParams translated(s.v, expect);
  const double mismatch = local_deviation_seminorm(grid, psi_final, pi_final, sff, translated,
                                                   SeminormSpec{expect, 2.0});
  PhaseState ref = soliton_state(sff, translated);
  const double scale = local_energy_seminorm(ref, SeminormSpec{expect, 2.0});
  CHECK(mismatch < 1e-2 * scale);
}

TEST_CASE("Strang step converges at second order") {
  FormFactor f = unit_bump();
  GridSpec grid(24, 16.0);
  SpectralFormFactor sff(f, grid);
  // Coupled oscillation: stationary field, particle displaced in the well.
  PhaseState y0 = stationary_state(sff, Vec3{0.4, 0.0, 0.0});
  const Potential v = Potential::quadratic(1.0);
  const double horizon = 0.8;

  auto advance = [&](double dt) {
    PhaseState y = y0;
    const long n = std::lround(horizon / dt);
    for (long i = 0; i < n; ++i) y = step(y, v, sff, dt);
    return y;
  };
  PhaseState ref = advance(0.005);
  const double e1 = tt::state_distance(advance(0.08), ref);
  const double e2 = tt::state_distance(advance(0.04), ref);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.125));  // ratio in [3.5, 4.5]
}

TEST_CASE("time reversal returns the initial state") {
  FormFactor f = unit_bump();
  GridSpec grid(24, 16.0);
  SpectralFormFactor sff(f, grid);
  PhaseState y0 = stationary_state(sff, Vec3{0.3, 0.1, 0.0});
  y0.particle.p = Vec3{-0.2, 0.05, 0.1};
  const Potential v = Potential::quadratic(1.0);

  PhaseState y = y0;
  for (int i = 0; i < 50; ++i) y = step(y, v, sff, 0.02);
  y = negate_momenta(y);
  for (int i = 0; i < 50; ++i) y = step(y, v, sff, 0.02);
  y = negate_momenta(y);
  CHECK(tt::state_distance(y, y0) < 1e-8);
}

TEST_CASE("relaxation run conserves energy") {
  // Zero field, resting particle, V = 0: the field relaxes outward from
  // rho while q stays put.
  FormFactor f = unit_bump();
  GridSpec grid(32, 16.0);
  SpectralFormFactor sff(f, grid);
  PhaseState y0{FieldState::zero(grid), ParticleState{}};
  IntegratorConfig cfg;
  cfg.dt = 0.02;
  cfg.t_end = 20.0;
  cfg.record_every = 100;
  cfg.allow_wraparound = true;
  TrajectoryRecord rec = run(y0, Potential::zero(), sff, cfg);
  for (const auto& pt : rec.points) {
    CHECK(pt.drift < 1e-6);
    CHECK(pt.q.norm() < 1e-12);
  }
  // The field actually moved.
  CHECK(rec.points.back().energy.field_pi > 1e-4);
}

TEST_CASE("equilibrium run keeps every record at the initial state") {
  FormFactor f = unit_bump();
  GridSpec grid(32, 16.0);
  SpectralFormFactor sff(f, grid);
  PhaseState y0 = stationary_state(sff, Vec3{});
  IntegratorConfig cfg;
  cfg.dt = 0.02;
  cfg.t_end = 2.0;
  cfg.record_every = 10;
  cfg.max_travel = 0.1;
  TrajectoryRecord rec = run(y0, Potential::quadratic(1.0), sff, cfg);
  for (const auto& pt : rec.points) {
    CHECK((pt.q - y0.particle.q).norm() < 1e-9);
    CHECK((pt.p - y0.particle.p).norm() < 1e-9);
    CHECK(pt.drift < 1e-12);
  }
}

TEST_CASE("velocity stays below one and matches the momentum map") {
  FormFactor f = unit_bump();
  GridSpec grid(24, 16.0);
  SpectralFormFactor sff(f, grid);
  PhaseState y0 = stationary_state(sff, Vec3{});
  y0.particle.p = Vec3{3.0, 0.0, 0.0};
  IntegratorConfig cfg;
  cfg.dt = 0.02;
  cfg.t_end = 1.0;
  cfg.record_every = 5;
  cfg.allow_wraparound = true;
  TrajectoryRecord rec = run(y0, Potential::zero(), sff, cfg);
  CHECK(rec.sup_qdot < 1.0);
  for (const auto& pt : rec.points) {
    CHECK(pt.qdot_norm < 1.0);
    CHECK(pt.qdot_norm == velocity_of_momentum(pt.p).norm());
  }
}

TEST_CASE("extreme momentum triggers sub-stepping and stays stable") {
  FormFactor f = unit_bump();
  GridSpec grid(16, 16.0);
  SpectralFormFactor sff(f, grid);
  PhaseState y0{FieldState::zero(grid), ParticleState{Vec3{}, Vec3{40.0, 0.0, 0.0}}};
  IntegratorConfig cfg;
  cfg.dt = 0.02;
  cfg.t_end = 0.2;
  cfg.record_every = 10;
  cfg.allow_wraparound = true;
  TrajectoryRecord rec = run(y0, Potential::zero(), sff, cfg);
  CHECK(rec.velocity_flagged);
  CHECK(rec.substeps > rec.steps);
  CHECK(rec.sup_qdot < 1.0);
  CHECK(rec.points.back().drift < 1e-6);
}

TEST_CASE("horizon and travel guards") {
  FormFactor f = unit_bump();
  GridSpec grid(16, 16.0);
  SpectralFormFactor sff(f, grid);
  PhaseState y0 = stationary_state(sff, Vec3{});
  IntegratorConfig cfg;
  cfg.dt = 0.02;
  cfg.record_every = 10;

  SUBCASE("long horizons are rejected without the override") {
    cfg.t_end = 10.0;  // t_end + travel + 2R = 22 > L/2
    CHECK_THROWS_AS(run(y0, Potential::zero(), sff, cfg), std::invalid_argument);
    cfg.allow_wraparound = true;
    CHECK_NOTHROW(run(y0, Potential::zero(), sff, cfg));
  }

  SUBCASE("a declared travel bound is enforced along the run") {
    cfg.t_end = 2.0;
    cfg.max_travel = 1e-4;
    PhaseState kicked = y0;
    kicked.particle.p = Vec3{0.5, 0.0, 0.0};
    CHECK_THROWS_AS(run(kicked, Potential::zero(), sff, cfg), std::runtime_error);
  }

  SUBCASE("t_end must be a whole number of steps") {
    cfg.t_end = 0.03;
    CHECK_THROWS_AS(run(y0, Potential::zero(), sff, cfg), std::invalid_argument);
  }
}

TEST_CASE("non-finite states abort with a diagnostic") {
  FormFactor f = unit_bump();
  GridSpec grid(16, 16.0);
  SpectralFormFactor sff(f, grid);
  PhaseState y0{FieldState::zero(grid),
                ParticleState{Vec3{}, Vec3{std::nan(""), 0.0, 0.0}}};
  IntegratorConfig cfg;
  cfg.dt = 0.02;
  cfg.t_end = 0.1;
  cfg.max_travel = 1.0;
  CHECK_THROWS_AS(run(y0, Potential::zero(), sff, cfg), std::runtime_error);
}

TEST_CASE("halving dt cuts the drift by about four") {
  FormFactor f = unit_bump();
  GridSpec grid(24, 16.0);
  SpectralFormFactor sff(f, grid);
  PhaseState y0 = stationary_state(sff, Vec3{0.2, 0.0, 0.0});
  const Potential v = Potential::quadratic(1.0);
  auto drift_at = [&](double dt) {
    IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 4.0;
    cfg.record_every = 5;
    cfg.max_travel = 0.5;
    double worst = 0.0;
    for (const auto& pt : run(y0, v, sff, cfg).points) worst = std::max(worst, pt.drift);
    return worst;
  };
  const double d1 = drift_at(0.02);
  const double d2 = drift_at(0.01);
  CHECK(d1 / d2 > 3.0);
  CHECK(d1 / d2 < 5.0);
}
