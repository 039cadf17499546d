#include "pfl/attraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pfl/nelder_mead.hpp"

namespace pfl {

namespace {

// ||grad(psi - psi_target)||^2 and ||pi - pi_target||^2 against the
// traveling family (v, a); v = 0 gives the stationary family. Modes the
// family leaves empty (k = 0, Nyquist planes) still contribute the state's
// own content.
struct FieldMismatch {
  double grad_sq = 0.0;
  double pi_sq = 0.0;
};

FieldMismatch family_mismatch(const SpectralFormFactor& sff, const std::vector<cplx>& psi_hat,
                              const std::vector<cplx>& pi_hat, const Vec3& v, const Vec3& a) {
  const GridSpec& grid = sff.grid();
  const int n = grid.n;
  const double dk = grid.dk();
  PhaseTable phase(grid, a);
  double grad_sq = 0.0, pi_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const int ni = grid.signed_index(i);
    const double kx = dk * ni;
    for (int j = 0; j < n; ++j) {
      const int nj = grid.signed_index(j);
      const double ky = dk * nj;
      const std::size_t row = grid.index(i, j, 0);
      const bool populated_ij = !grid.is_nyquist(i) && !grid.is_nyquist(j);
      const cplx pxy = populated_ij ? phase.x[i] * phase.y[j] : cplx(0.0, 0.0);
      for (int l = 0; l < n; ++l) {
        const int nl = grid.signed_index(l);
        const int msq = ni * ni + nj * nj + nl * nl;
        const std::size_t idx = row + l;
        cplx target_psi(0.0, 0.0), target_pi(0.0, 0.0);
        if (populated_ij && !grid.is_nyquist(l) && msq != 0) {
          const double kz = dk * nl;
          const double k2 = dk * dk * msq;
          const double kv = kx * v.x + ky * v.y + kz * v.z;
          const double denom = k2 - kv * kv;
          const cplx ph = pxy * phase.z[l];
          const double rh = sff.at_msq(msq);
          target_psi = -(rh / denom) * ph;
          target_pi = cplx(0.0, kv * rh / denom) * ph;
        }
        grad_sq += dk * dk * msq * std::norm(psi_hat[idx] - target_psi);
        pi_sq += std::norm(pi_hat[idx] - target_pi);
      }
    }
  }
  const double w = grid.mode_volume();
  return {grad_sq * w, pi_sq * w};
}

double family_distance(const SpectralFormFactor& sff, const std::vector<cplx>& psi_hat,
                       const std::vector<cplx>& pi_hat, const Vec3& q, const Vec3& p,
                       const Vec3& v, const Vec3& a) {
  const FieldMismatch fm = family_mismatch(sff, psi_hat, pi_hat, v, a);
  const Vec3 p_v = v / std::sqrt(1.0 - v.norm2());
  return std::sqrt(fm.grad_sq) + std::sqrt(fm.pi_sq) + (q - a).norm() + (p - p_v).norm();
}

constexpr double speed_cap = 1.0 - 1e-6;

// Unbounded chart of the open unit ball: v = tanh(|w|) w-hat.
Vec3 velocity_chart(const Vec3& w) {
  const double wn = w.norm();
  if (wn < 1e-8) return w;  // tanh(x)/x -> 1
  const double t = std::min(std::tanh(wn), speed_cap);
  return (t / wn) * w;
}

Vec3 velocity_chart_inverse(const Vec3& v) {
  const double vn = v.norm();
  if (vn < 1e-8) return v;
  const double capped = std::min(vn, speed_cap);
  return (std::atanh(capped) / vn) * v;
}

}  // namespace

double energy_norm(const PhaseState& y) {
  const GridSpec& grid = y.field.grid();
  const double dk = grid.dk();
  double grad_sq = 0.0;
  const int n = grid.n;
  for (int i = 0; i < n; ++i) {
    const int ni = grid.signed_index(i);
    for (int j = 0; j < n; ++j) {
      const int nj = grid.signed_index(j);
      const std::size_t row = grid.index(i, j, 0);
      for (int l = 0; l < n; ++l) {
        const int nl = grid.signed_index(l);
        grad_sq += dk * dk * (ni * ni + nj * nj + nl * nl) * std::norm(y.field.psi_hat()[row + l]);
      }
    }
  }
  grad_sq *= grid.mode_volume();
  return std::sqrt(grad_sq) + y.field.pi_l2_grid() + y.particle.q.norm() + y.particle.p.norm();
}

DistanceResult dist_to_stationary_set(const PhaseState& y, const std::vector<Vec3>& criticals,
                                      const SpectralFormFactor& sff) {
  if (criticals.empty())
    throw std::invalid_argument("stationary-set distance: empty critical-point list");
  DistanceResult best;
  best.dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < criticals.size(); ++i) {
    const double d = family_distance(sff, y.field.psi_hat(), y.field.pi_hat(), y.particle.q,
                                     y.particle.p, Vec3{}, criticals[i]);
    if (d < best.dist) {
      best.dist = d;
      best.stationary_index = static_cast<int>(i);
      best.a_star = criticals[i];
      best.v_star = Vec3{};
    }
  }
  best.evaluations = static_cast<int>(criticals.size());
  return best;
}

DistanceResult dist_to_stationary_set(const PhaseState& y, const std::vector<Vec3>& criticals,
                                      const FormFactor& f) {
  return dist_to_stationary_set(y, criticals, SpectralFormFactor(f, y.field.grid()));
}

DistanceResult dist_to_soliton_manifold(const PhaseState& y, const SpectralFormFactor& sff,
                                        const ManifoldDistanceOptions& opts) {
  const auto& psi_hat = y.field.psi_hat();
  const auto& pi_hat = y.field.pi_hat();
  const Vec3 q = y.particle.q;
  const Vec3 p = y.particle.p;

  int evaluations = 0;
  auto objective6 = [&](const std::vector<double>& x) {
    ++evaluations;
    const Vec3 v = velocity_chart(Vec3{x[0], x[1], x[2]});
    return family_distance(sff, psi_hat, pi_hat, q, p, v, Vec3{x[3], x[4], x[5]});
  };

  Vec3 v_seed, a_seed;
  if (opts.seed) {
    v_seed = opts.seed->v;
    a_seed = opts.seed->a;
  } else {
    v_seed = velocity_of_momentum(p);
    a_seed = q;
  }
  Vec3 w_seed = velocity_chart_inverse(v_seed);

  DistanceResult result;
  std::vector<double> x0 = {w_seed.x, w_seed.y, w_seed.z, a_seed.x, a_seed.y, a_seed.z};
  // Evaluated at the seed parameters themselves, not through the chart, so
  // callers can reproduce the number exactly.
  result.seed_value = family_distance(sff, psi_hat, pi_hat, q, p, v_seed, a_seed);
  ++evaluations;

  // Coarse velocity grid at the particle-centered a, guarding the seed.
  if (opts.prescan) {
    double best = result.seed_value;
    for (double vx : {-0.8, -0.4, 0.0, 0.4, 0.8})
      for (double vy : {-0.8, -0.4, 0.0, 0.4, 0.8})
        for (double vz : {-0.8, -0.4, 0.0, 0.4, 0.8}) {
          const Vec3 v{vx, vy, vz};
          if (v.norm() >= speed_cap) continue;
          const double d = family_distance(sff, psi_hat, pi_hat, q, p, v, q);
          ++evaluations;
          if (d < best) {
            best = d;
            const Vec3 w = velocity_chart_inverse(v);
            x0 = {w.x, w.y, w.z, q.x, q.y, q.z};
          }
        }
  }

  auto nm = nelder_mead(objective6, x0, 0.05, opts.tol, opts.max_iterations);
  // One polishing restart with a tighter simplex; the objective is a sum of
  // norms and kinks at the minimum.
  auto nm2 = nelder_mead(objective6, nm.x, 0.005, opts.tol, opts.max_iterations);
  const auto& final_nm = nm2.value <= nm.value ? nm2 : nm;

  result.v_star = velocity_chart(Vec3{final_nm.x[0], final_nm.x[1], final_nm.x[2]});
  result.a_star = Vec3{final_nm.x[3], final_nm.x[4], final_nm.x[5]};
  // The report is defined by the returned parameters: re-evaluate g there
  // so dist and minimizer stay consistent to the last bit.
  result.dist = family_distance(sff, psi_hat, pi_hat, q, p, result.v_star, result.a_star);
  result.iterations = nm.iterations + nm2.iterations;
  result.evaluations = evaluations + 1;
  result.converged = nm2.converged || nm.converged;
  if (result.seed_value < result.dist) {  // never worse than the seed
    result.dist = result.seed_value;
    result.v_star = v_seed;
    result.a_star = a_seed;
  }
  return result;
}

DistanceResult dist_to_soliton_manifold(const PhaseState& y, const FormFactor& f,
                                        const ManifoldDistanceOptions& opts) {
  return dist_to_soliton_manifold(y, SpectralFormFactor(f, y.field.grid()), opts);
}

namespace {

double masked_seminorm(const GridSpec& grid, const std::vector<cplx>& psi_hat,
                       const std::vector<cplx>& pi_hat, const SeminormSpec& spec) {
  if (!(spec.radius > 0.0)) throw std::invalid_argument("seminorm: radius must be positive");
  require_finite(spec.center, "seminorm center");

  auto fft = SpectralTransform::get(grid.n);
  const int n = grid.n;
  const double dk = grid.dk();

  // grad psi on the grid, one component at a time. The Nyquist plane has no
  // odd-derivative representative and is dropped, the usual spectral
  // differentiation convention.
  std::vector<cplx> scratch(grid.size());
  std::vector<double> grad_sq(grid.size(), 0.0);
  std::vector<double> component;
  for (int axis = 0; axis < 3; ++axis) {
    for (int i = 0; i < n; ++i) {
      const int ni = grid.is_nyquist(i) ? 0 : grid.signed_index(i);
      for (int j = 0; j < n; ++j) {
        const int nj = grid.is_nyquist(j) ? 0 : grid.signed_index(j);
        const std::size_t row = grid.index(i, j, 0);
        for (int l = 0; l < n; ++l) {
          const int nl = grid.is_nyquist(l) ? 0 : grid.signed_index(l);
          const double k = dk * (axis == 0 ? ni : axis == 1 ? nj : nl);
          scratch[row + l] = cplx(0.0, k) * psi_hat[row + l];
        }
      }
    }
    fft->backward(grid, scratch, component);
    for (std::size_t m = 0; m < grad_sq.size(); ++m) grad_sq[m] += component[m] * component[m];
  }

  std::vector<double> pi_grid;
  fft->backward(grid, pi_hat, pi_grid);

  std::vector<double> dx(n), dy(n), dz(n);
  for (int i = 0; i < n; ++i) {
    dx[i] = grid.min_image(grid.coordinate(i), spec.center.x);
    dy[i] = grid.min_image(grid.coordinate(i), spec.center.y);
    dz[i] = grid.min_image(grid.coordinate(i), spec.center.z);
  }
  const double r2 = spec.radius * spec.radius;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::size_t row = grid.index(i, j, 0);
      const double dxy = dx[i] * dx[i] + dy[j] * dy[j];
      if (dxy > r2) continue;
      for (int l = 0; l < n; ++l) {
        if (dxy + dz[l] * dz[l] > r2) continue;
        sum += grad_sq[row + l] + pi_grid[row + l] * pi_grid[row + l];
      }
    }
  return std::sqrt(sum * grid.cell_volume());
}

}  // namespace

double local_energy_seminorm(const PhaseState& y, const SeminormSpec& spec) {
  return masked_seminorm(y.field.grid(), y.field.psi_hat(), y.field.pi_hat(), spec);
}

double local_deviation_seminorm(const GridSpec& grid, const std::vector<cplx>& psi_hat,
                                const std::vector<cplx>& pi_hat, const SpectralFormFactor& sff,
                                const SolitonParams& target, const SeminormSpec& spec) {
  std::vector<cplx> dev_psi, dev_pi;
  fill_soliton_spectrum(sff, target, dev_psi, dev_pi);
  for (std::size_t i = 0; i < dev_psi.size(); ++i) {
    dev_psi[i] = psi_hat[i] - dev_psi[i];
    dev_pi[i] = pi_hat[i] - dev_pi[i];
  }
  return masked_seminorm(grid, dev_psi, dev_pi, spec);
}

ExperimentResult attraction_experiment(ExperimentKind kind, const FormFactor& f,
                                       const GridSpec& grid, const IntegratorConfig& cfg,
                                       const ExperimentParams& params) {
  SpectralFormFactor sff(f, grid);
  const double ball_radius =
      params.ball_radius > 0.0 ? params.ball_radius : 2.0 * f.support_radius();

  ExperimentResult result;
  result.kind = kind;

  Potential v = Potential::zero();
  PhaseState y0 = [&]() {
    if (kind == ExperimentKind::part_i) {
      v = Potential::quadratic(params.quadratic_c);
      PhaseState s = stationary_state(sff, Vec3{});
      s.particle.p = params.p0;
      return s;
    }
    // part ii: psi_0 = -eps rho, everything else at rest.
    result.eps_used = params.eps ? *params.eps : counterexample_eps_star(f);
    std::vector<cplx> psi_hat(grid.size(), cplx(0.0, 0.0));
    std::vector<cplx> pi_hat(grid.size(), cplx(0.0, 0.0));
    const int n = grid.n;
    for (int i = 0; i < n; ++i) {
      if (grid.is_nyquist(i)) continue;
      const int ni = grid.signed_index(i);
      for (int j = 0; j < n; ++j) {
        if (grid.is_nyquist(j)) continue;
        const int nj = grid.signed_index(j);
        for (int l = 0; l < n; ++l) {
          if (grid.is_nyquist(l)) continue;
          const int nl = grid.signed_index(l);
          const int msq = ni * ni + nj * nj + nl * nl;
          if (msq == 0) continue;
          psi_hat[grid.index(i, j, l)] = -result.eps_used * sff.at_msq(msq);
        }
      }
    }
    return PhaseState{FieldState::from_spectral(grid, std::move(psi_hat), std::move(pi_hat)),
                      ParticleState{}};
  }();

  result.h_initial = hamiltonian(y0, v, sff).total;
  if (kind == ExperimentKind::part_i) {
    result.h_target = hamiltonian(stationary_state(sff, Vec3{}), v, sff).total;
  } else {
    // Audited manifold minimum over the standard speed sweep.
    double h_min = std::numeric_limits<double>::infinity();
    for (double s = 0.0; s < 0.95; s += 0.1)
      h_min = std::min(h_min, soliton_energy(f, Vec3{s, 0.0, 0.0}).h_total);
    result.h_target = h_min;
  }
  result.floor_value = std::max(0.0, result.h_initial - result.h_target);

  const std::vector<Vec3> criticals = {Vec3{}};
  std::optional<SolitonParams> warm_seed;
  result.min_dist = std::numeric_limits<double>::infinity();

  auto observer = [&](const RecordView& view) {
    ExperimentRow row;
    row.t = view.t;
    row.h_total = view.energy.total;
    row.drift = view.drift;
    row.floor_value = result.floor_value;

    SolitonParams target{Vec3{}, criticals[0]};
    if (kind == ExperimentKind::part_i) {
      row.dist = family_distance(sff, view.psi_hat, view.pi_hat, view.q, view.p, Vec3{},
                                 criticals[0]);
      row.v_star = Vec3{};
      row.a_star = criticals[0];
    } else {
      ManifoldDistanceOptions opts;
      opts.prescan = !warm_seed.has_value();
      opts.seed = warm_seed;
      PhaseState live{FieldState::from_spectral(grid, view.psi_hat, view.pi_hat),
                      ParticleState{view.q, view.p}};
      DistanceResult dr = dist_to_soliton_manifold(live, sff, opts);
      row.dist = dr.dist;
      row.v_star = dr.v_star;
      row.a_star = dr.a_star;
      target = SolitonParams{dr.v_star, dr.a_star};
      warm_seed = target;
    }
    row.local_seminorm = local_deviation_seminorm(
        grid, view.psi_hat, view.pi_hat, sff, target,
        SeminormSpec{view.q, ball_radius});

    if (result.rows.empty()) result.seminorm_initial = row.local_seminorm;
    result.seminorm_final = row.local_seminorm;
    result.min_dist = std::min(result.min_dist, row.dist);
    result.rows.push_back(row);
  };

  TrajectoryRecord traj = run(y0, v, sff, cfg, observer);
  result.sup_qdot = traj.sup_qdot;
  return result;
}

}  // namespace pfl
