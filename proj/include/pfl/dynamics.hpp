#pragma once

#include <functional>
#include <vector>

#include "pfl/energy.hpp"
#include "pfl/phase_state.hpp"
#include "pfl/potential.hpp"
#include "pfl/state_builders.hpp"

namespace pfl {

struct IntegratorConfig {
  double dt = 0.02;
  double t_end = 20.0;
  int record_every = 10;

  // Horizons are capped so that radiated waves cannot wrap around and
  // re-enter the coupling region:  t_end + travel + 2 R_rho < L / 2.
  // The travel allowance defaults to t_end (|qdot| < 1); confining runs can
  // pass a tighter bound, which is then enforced along the trajectory.
  bool allow_wraparound = false;
  double max_travel = -1.0;  // < 0: use t_end

  // Above this speed the step is subdivided in proportion to 1 - |qdot|.
  double velocity_threshold = 0.999;
};

struct TrajectoryPoint {
  double t = 0.0;
  Vec3 q, p;
  double qdot_norm = 0.0;
  EnergyBreakdown energy;
  double drift = 0.0;  // |H(t) - H(0)| / |H(0)|
};

struct TrajectoryRecord {
  std::vector<TrajectoryPoint> points;
  double sup_qdot = 0.0;
  long steps = 0;
  long substeps = 0;          // total, counting velocity-cap subdivisions
  bool velocity_flagged = false;
};

// Live view handed to observers at record times; the spectral arrays alias
// integrator state and must not be retained.
struct RecordView {
  double t;
  const std::vector<cplx>& psi_hat;
  const std::vector<cplx>& pi_hat;
  Vec3 q, p;
  EnergyBreakdown energy;
  double drift;
};
using RecordObserver = std::function<void(const RecordView&)>;

// Self-force of the field on the particle,  F = ∫ psi grad rho(. - q),
// as a sum over nonzero modes of psi_hat conj(i k rho_hat e^{-i k q});
// equals -grad_q of the interaction energy.
Vec3 force(const SpectralFormFactor& sff, const std::vector<cplx>& psi_hat, const Vec3& q);
Vec3 force(const FieldState& fs, const FormFactor& f, const Vec3& q);

// One Strang step: half kick on p, exact field rotation about the
// stationary profile frozen at the midpoint position while q drifts,
// half kick. Preserves equilibria exactly and is time-reversible.
PhaseState step(const PhaseState& y, const Potential& v, const FormFactor& f, double dt);
PhaseState step(const PhaseState& y, const Potential& v, const SpectralFormFactor& sff,
                double dt);

TrajectoryRecord run(const PhaseState& y0, const Potential& v, const SpectralFormFactor& sff,
                     const IntegratorConfig& cfg, const RecordObserver& observer = {});
TrajectoryRecord run(const PhaseState& y0, const Potential& v, const FormFactor& f,
                     const IntegratorConfig& cfg, const RecordObserver& observer = {});

}  // namespace pfl
