#include "pfl/dynamics.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace pfl {

namespace {

struct ForceInteraction {
  Vec3 force;
  double interaction = 0.0;
};

// Force and interaction energy in one pass. Conjugate mode pairs make both
// sums real term by term, so no imaginary residue survives.
ForceInteraction force_and_interaction(const SpectralFormFactor& sff,
                                       const std::vector<cplx>& psi_hat, const Vec3& q) {
  const GridSpec& grid = sff.grid();
  const int n = grid.n;
  const double dk = grid.dk();
  PhaseTable phase(grid, q);
  double fx = 0.0, fy = 0.0, fz = 0.0, inter = 0.0;
  for (int i = 0; i < n; ++i) {
    if (grid.is_nyquist(i)) continue;
    const int ni = grid.signed_index(i);
    for (int j = 0; j < n; ++j) {
      if (grid.is_nyquist(j)) continue;
      const int nj = grid.signed_index(j);
      const cplx pxy = phase.x[i] * phase.y[j];
      const std::size_t row = grid.index(i, j, 0);
      for (int l = 0; l < n; ++l) {
        if (grid.is_nyquist(l)) continue;
        const int nl = grid.signed_index(l);
        const int msq = ni * ni + nj * nj + nl * nl;
        if (msq == 0) continue;
        const cplx ph = pxy * phase.z[l];
        const double rh = sff.at_msq(msq);
        // psi_hat conj(rho_hat e^{-ikq}); Re -> interaction, Im -> force.
        const cplx core = psi_hat[row + l] * std::conj(ph) * rh;
        inter += core.real();
        const double im = core.imag();
        fx += dk * ni * im;
        fy += dk * nj * im;
        fz += dk * nl * im;
      }
    }
  }
  const double w = grid.mode_volume();
  return {Vec3{fx * w, fy * w, fz * w}, inter * w};
}

// cos(|k| dt), sin(|k| dt)/|k| and |k| sin(|k| dt) per mode-magnitude class.
struct RotationTable {
  std::vector<double> cosv, sin_over_k, k_sin;
  RotationTable(const GridSpec& grid, double dt) {
    const int half = grid.n / 2;
    const int max_msq = 3 * half * half;
    cosv.resize(max_msq + 1);
    sin_over_k.resize(max_msq + 1);
    k_sin.resize(max_msq + 1);
    const double dk = grid.dk();
    for (int m = 1; m <= max_msq; ++m) {
      const double k = dk * std::sqrt(double(m));
      cosv[m] = std::cos(k * dt);
      const double s = std::sin(k * dt);
      sin_over_k[m] = s / k;
      k_sin[m] = k * s;
    }
  }
};

class Propagator {
 public:
  explicit Propagator(const SpectralFormFactor& sff) : sff_(sff) {}

  // Full Strang step of size dt; `fi` carries the force/interaction of the
  // current state on entry and of the new state on exit.
  void step_once(std::vector<cplx>& psi_hat, std::vector<cplx>& pi_hat, Vec3& q, Vec3& p,
                 const Potential& v, double dt, ForceInteraction& fi) const {
    p += 0.5 * dt * (fi.force - v.gradient(q));
    const Vec3 qdot = velocity_of_momentum(p);
    const Vec3 q_mid = q + 0.5 * dt * qdot;
    rotate_fields(psi_hat, pi_hat, q_mid, dt);
    q = q_mid + 0.5 * dt * qdot;
    fi = force_and_interaction(sff_, psi_hat, q);
    p += 0.5 * dt * (fi.force - v.gradient(q));
  }

  const RotationTable& table_for(double dt) const {
    auto it = tables_.find(dt);
    if (it == tables_.end()) it = tables_.emplace(dt, RotationTable(sff_.grid(), dt)).first;
    return it->second;
  }

 private:
  // Exact free evolution of the deviation from the stationary profile at
  // the frozen source position: the pair (psi_hat - psi_stat, pi_hat)
  // rotates with frequency |k| on every mode.
  void rotate_fields(std::vector<cplx>& psi_hat, std::vector<cplx>& pi_hat, const Vec3& center,
                     double dt) const {
    const GridSpec& grid = sff_.grid();
    const RotationTable& rot = table_for(dt);
    const int n = grid.n;
    const double dk2 = grid.dk() * grid.dk();
    PhaseTable phase(grid, center);
    for (int i = 0; i < n; ++i) {
      if (grid.is_nyquist(i)) continue;
      const int ni = grid.signed_index(i);
      for (int j = 0; j < n; ++j) {
        if (grid.is_nyquist(j)) continue;
        const int nj = grid.signed_index(j);
        const cplx pxy = phase.x[i] * phase.y[j];
        const std::size_t row = grid.index(i, j, 0);
        for (int l = 0; l < n; ++l) {
          if (grid.is_nyquist(l)) continue;
          const int nl = grid.signed_index(l);
          const int msq = ni * ni + nj * nj + nl * nl;
          if (msq == 0) continue;
          const std::size_t idx = row + l;
          const cplx psi_stat = -(sff_.at_msq(msq) / (dk2 * msq)) * (pxy * phase.z[l]);
          const cplx u = psi_hat[idx] - psi_stat;
          const cplx w = pi_hat[idx];
          psi_hat[idx] = psi_stat + u * rot.cosv[msq] + w * rot.sin_over_k[msq];
          pi_hat[idx] = w * rot.cosv[msq] - u * rot.k_sin[msq];
        }
      }
    }
  }

  const SpectralFormFactor& sff_;
  mutable std::map<double, RotationTable> tables_;
};

void check_particle_finite(const Vec3& q, const Vec3& p, double t) {
  if (!q.finite() || !p.finite())
    throw std::runtime_error("integrator: non-finite particle state at t = " +
                             std::to_string(t));
}

}  // namespace

Vec3 force(const SpectralFormFactor& sff, const std::vector<cplx>& psi_hat, const Vec3& q) {
  require_finite(q, "particle position");
  return force_and_interaction(sff, psi_hat, q).force;
}

Vec3 force(const FieldState& fs, const FormFactor& f, const Vec3& q) {
  SpectralFormFactor sff(f, fs.grid());
  return force(sff, fs.psi_hat(), q);
}

PhaseState step(const PhaseState& y, const Potential& v, const SpectralFormFactor& sff,
                double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  std::vector<cplx> psi_hat = y.field.psi_hat();
  std::vector<cplx> pi_hat = y.field.pi_hat();
  Vec3 q = y.particle.q;
  Vec3 p = y.particle.p;
  Propagator prop(sff);
  ForceInteraction fi = force_and_interaction(sff, psi_hat, q);
  prop.step_once(psi_hat, pi_hat, q, p, v, dt, fi);
  check_particle_finite(q, p, dt);
  return PhaseState{FieldState::from_spectral(y.field.grid(), std::move(psi_hat), std::move(pi_hat)),
                    ParticleState{q, p}};
}

PhaseState step(const PhaseState& y, const Potential& v, const FormFactor& f, double dt) {
  return step(y, v, SpectralFormFactor(f, y.field.grid()), dt);
}

TrajectoryRecord run(const PhaseState& y0, const Potential& v, const SpectralFormFactor& sff,
                     const IntegratorConfig& cfg, const RecordObserver& observer) {
  const GridSpec& grid = y0.field.grid();
  if (!(grid == sff.grid())) throw std::invalid_argument("run: grid mismatch");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("run: dt must be positive");
  if (!(cfg.t_end > 0.0)) throw std::invalid_argument("run: t_end must be positive");
  if (cfg.record_every < 1) throw std::invalid_argument("run: record_every must be >= 1");

  const double r_rho = sff.form_factor().support_radius();
  const double travel = cfg.max_travel >= 0.0 ? cfg.max_travel : cfg.t_end;
  if (!cfg.allow_wraparound &&
      !(cfg.t_end + travel + 2.0 * r_rho < 0.5 * grid.length)) {
    throw std::invalid_argument(
        "run: horizon violates the wrap-around budget "
        "(t_end + travel + 2 R_rho must stay below L/2); "
        "set allow_wraparound to override");
  }

  const long nsteps = std::lround(cfg.t_end / cfg.dt);
  if (nsteps < 1 || std::abs(nsteps * cfg.dt - cfg.t_end) > 1e-9 * std::max(1.0, cfg.t_end))
    throw std::invalid_argument("run: t_end must be an integer multiple of dt");

  std::vector<cplx> psi_hat = y0.field.psi_hat();
  std::vector<cplx> pi_hat = y0.field.pi_hat();
  Vec3 q = y0.particle.q;
  Vec3 p = y0.particle.p;
  const Vec3 q_start = q;

  Propagator prop(sff);
  prop.table_for(cfg.dt);
  ForceInteraction fi = force_and_interaction(sff, psi_hat, q);

  TrajectoryRecord record;
  EnergyBreakdown e0 = spectral_energy(sff, psi_hat, pi_hat, q, p, v);
  const double h0 = e0.total;
  if (!std::isfinite(h0)) throw std::runtime_error("integrator: non-finite initial energy");

  auto emit = [&](double t, const EnergyBreakdown& e) {
    const double drift = std::abs(e.total - h0) / std::abs(h0);
    const double qdot = velocity_of_momentum(p).norm();
    record.points.push_back(TrajectoryPoint{t, q, p, qdot, e, drift});
    if (observer) observer(RecordView{t, psi_hat, pi_hat, q, p, e, drift});
  };

  record.sup_qdot = velocity_of_momentum(p).norm();
  emit(0.0, e0);

  for (long i = 1; i <= nsteps; ++i) {
    // Velocity-cap subdivision: dt shrinks in proportion to 1 - |qdot|.
    const double speed = velocity_of_momentum(p).norm();
    long m = 1;
    if (speed > cfg.velocity_threshold) {
      m = std::min<long>(1024, std::lround(std::ceil((1.0 - cfg.velocity_threshold) /
                                                     std::max(1.0 - speed, 1e-12))));
      record.velocity_flagged = true;
    }
    for (long s = 0; s < m; ++s) {
      prop.step_once(psi_hat, pi_hat, q, p, v, cfg.dt / m, fi);
      record.sup_qdot = std::max(record.sup_qdot, velocity_of_momentum(p).norm());
    }
    record.steps += 1;
    record.substeps += m;
    const double t = i * cfg.dt;
    check_particle_finite(q, p, t);
    if (!cfg.allow_wraparound && (q - q_start).norm() > travel + 1e-9)
      throw std::runtime_error("run: particle exceeded the declared travel bound at t = " +
                               std::to_string(t));
    if (i % cfg.record_every == 0 || i == nsteps) {
      EnergyBreakdown e = spectral_energy(sff, psi_hat, pi_hat, q, p, v);
      if (!std::isfinite(e.total))
        throw std::runtime_error("integrator: non-finite energy at t = " + std::to_string(t));
      emit(t, e);
    }
  }
  return record;
}

TrajectoryRecord run(const PhaseState& y0, const Potential& v, const FormFactor& f,
                     const IntegratorConfig& cfg, const RecordObserver& observer) {
  return run(y0, v, SpectralFormFactor(f, y0.field.grid()), cfg, observer);
}

}  // namespace pfl
