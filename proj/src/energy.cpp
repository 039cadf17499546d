#include "pfl/energy.hpp"

#include <cmath>
#include <numbers>

#include "pfl/quadrature.hpp"

namespace pfl {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

// Interaction ∫ psi rho(. - q) as a spectral sum; rho enters band-limited.
double interaction_sum(const SpectralFormFactor& sff, const std::vector<cplx>& psi_hat,
                       const Vec3& q) {
  const GridSpec& grid = sff.grid();
  const int n = grid.n;
  PhaseTable phase(grid, q);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (grid.is_nyquist(i)) continue;
    const int ni = grid.signed_index(i);
    for (int j = 0; j < n; ++j) {
      if (grid.is_nyquist(j)) continue;
      const int nj = grid.signed_index(j);
      const cplx pxy = phase.x[i] * phase.y[j];
      for (int l = 0; l < n; ++l) {
        if (grid.is_nyquist(l)) continue;
        const int nl = grid.signed_index(l);
        const int msq = ni * ni + nj * nj + nl * nl;
        if (msq == 0) continue;
        const cplx ph = pxy * phase.z[l];
        // Re(psi_hat * conj(rho_hat e^{-ikq}))
        sum += sff.at_msq(msq) * (psi_hat[grid.index(i, j, l)] * std::conj(ph)).real();
      }
    }
  }
  return sum * grid.mode_volume();
}

double grad_sum(const GridSpec& grid, const std::vector<cplx>& psi_hat) {
  const int n = grid.n;
  const double dk2 = grid.dk() * grid.dk();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const int ni = grid.signed_index(i);
    for (int j = 0; j < n; ++j) {
      const int nj = grid.signed_index(j);
      const std::size_t row = grid.index(i, j, 0);
      for (int l = 0; l < n; ++l) {
        const int nl = grid.signed_index(l);
        sum += dk2 * (ni * ni + nj * nj + nl * nl) * std::norm(psi_hat[row + l]);
      }
    }
  }
  return sum * grid.mode_volume();
}

double spectral_l2sq(const GridSpec& grid, const std::vector<cplx>& a) {
  double sum = 0.0;
  for (const cplx& v : a) sum += std::norm(v);
  return sum * grid.mode_volume();
}

}  // namespace

EnergyBreakdown hamiltonian(const PhaseState& y, const Potential& v,
                            const SpectralFormFactor& sff) {
  const GridSpec& grid = y.field.grid();
  double pi_sq = 0.0;
  for (double w : y.field.pi()) pi_sq += w * w;
  pi_sq *= grid.cell_volume();
  return EnergyBreakdown::assemble(std::sqrt(1.0 + y.particle.p.norm2()),
                                   v.value(y.particle.q), 0.5 * pi_sq,
                                   0.5 * grad_sum(grid, y.field.psi_hat()),
                                   interaction_sum(sff, y.field.psi_hat(), y.particle.q));
}

EnergyBreakdown hamiltonian(const PhaseState& y, const Potential& v, const FormFactor& f) {
  return hamiltonian(y, v, SpectralFormFactor(f, y.field.grid()));
}

EnergyBreakdown spectral_energy(const SpectralFormFactor& sff, const std::vector<cplx>& psi_hat,
                                const std::vector<cplx>& pi_hat, const Vec3& q, const Vec3& p,
                                const Potential& v) {
  const GridSpec& grid = sff.grid();
  return EnergyBreakdown::assemble(std::sqrt(1.0 + p.norm2()), v.value(q),
                                   0.5 * spectral_l2sq(grid, pi_hat),
                                   0.5 * grad_sum(grid, psi_hat),
                                   interaction_sum(sff, psi_hat, q));
}

double mean_zero_gauge_energy_shift(const FormFactor& f, const GridSpec& grid) {
  const double mass = f.total_integral();
  return cubic_torus_madelung * mass * mass / (8.0 * std::numbers::pi * grid.length);
}

namespace {

// Angular factor of the phase-carrying cross term: the azimuthal average of
// e^{i k . a} with polar axis v-hat is cos(k mu a_par) J0(k sqrt(1-mu^2) a_perp).
double phase_factor(double k, double mu, double a_par, double a_perp) {
  if (a_par == 0.0 && a_perp == 0.0) return 1.0;
  const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
  return std::cos(k * mu * a_par) * std::cyl_bessel_j(0.0, k * s * a_perp);
}

}  // namespace

AuditReport soliton_energy(const FormFactor& f, const Vec3& v, const AuditOptions& opts) {
  require_finite(v, "soliton velocity");
  const double speed = v.norm();
  if (speed >= 1.0 - 1e-9)
    throw std::invalid_argument("soliton energy: |v| must be below 1");

  AuditReport report;
  report.v = v;
  report.speed = speed;
  report.kinetic = 1.0 / std::sqrt(1.0 - speed * speed);
  report.mu_nodes = opts.mu_nodes;
  report.phase_center = opts.phase_center;

  // Decompose the probe center along/normal to v; for v = 0 the split is
  // immaterial (the integrand loses its mu dependence) and the center goes
  // on the polar axis.
  double a_par, a_perp;
  if (speed > 0.0) {
    const Vec3 vhat = v / speed;
    a_par = opts.phase_center.dot(vhat);
    a_perp = (opts.phase_center - a_par * vhat).norm();
  } else {
    a_par = opts.phase_center.norm();
    a_perp = 0.0;
  }

  RadialSpectrum rs(f);
  report.k_max = spectral_cutoff(rs, opts.spectral_floor);

  const auto& mu_rule = quad::gauss_legendre(opts.mu_nodes);
  const double v2 = speed * speed;

  // Radial integrand of (t_pi, t_grad, c_cross, phase variant); the mu
  // integration is done per k node so rho_hat is evaluated once per k.
  auto integrand = [&](double k, std::vector<double>& out) {
    const double r = rs(k);
    const double r2 = r * r;
    double s_pi = 0.0, s_grad = 0.0, s_cross = 0.0, s_phase = 0.0;
    for (int m = 0; m < opts.mu_nodes; ++m) {
      const double mu = mu_rule.nodes[m];
      const double w = mu_rule.weights[m];
      const double d = 1.0 - v2 * mu * mu;  // (k^2 - (k.v)^2) / k^2
      s_pi += w * v2 * mu * mu / (d * d);
      s_grad += w / (d * d);
      s_cross += w / d;
      s_phase += w * phase_factor(k, mu, a_par, a_perp) / d;
    }
    out[0] = two_pi * r2 * s_pi;
    out[1] = two_pi * r2 * s_grad;
    out[2] = -two_pi * r2 * s_cross;
    out[3] = -two_pi * r2 * s_phase;
  };

  const auto q = quad::integrate_adaptive_vec(integrand, 4, 0.0, report.k_max,
                                              opts.k_abs_tol, opts.k_rel_tol);
  report.t_pi = q.value[0];
  report.t_grad = q.value[1];
  report.c_cross = q.value[2];
  report.cross_phase_variant = q.value[3];
  report.quadrature_error = q.error_estimate;

  const double edge = rs(report.k_max);
  const double worst = 1.0 / ((1.0 - v2) * (1.0 - v2));
  report.tail_bound = 4.0 * std::numbers::pi * edge * edge * report.k_max * worst;

  report.h_total = report.kinetic + 0.5 * report.t_pi + 0.5 * report.t_grad + report.c_cross;
  return report;
}

AuditReport audit_chain(const FormFactor& f, const Vec3& v, const AuditOptions& opts) {
  AuditReport report = soliton_energy(f, v, opts);
  report.delta_rho = delta_rho(f);
  report.margin_s1 = report.t_pi;
  report.margin_s2 = report.t_grad - report.delta_rho;
  report.margin_s3 = 0.5 * (report.delta_rho + report.t_grad) - std::abs(report.c_cross);
  report.margin_s4 = report.h_total - 1.0;
  report.margin_s5 = report.h_total - (1.0 - 0.5 * report.delta_rho);
  return report;
}

double counterexample_energy_free(const FormFactor& f, double eps) {
  if (!std::isfinite(eps)) throw std::invalid_argument("eps must be finite");
  return 1.0 + 0.5 * eps * eps * f.grad_l2_squared() - eps * f.l2_squared();
}

double counterexample_eps_star(const FormFactor& f) {
  return f.l2_squared() / f.grad_l2_squared();
}

PartIEnergies counterexample_part_i(const FormFactor& f, const Vec3& p0) {
  require_finite(p0, "initial momentum");
  const double dr = delta_rho(f);
  PartIEnergies out;
  out.h_initial = std::sqrt(1.0 + p0.norm2()) - 0.5 * dr;
  out.h_stationary = 1.0 - 0.5 * dr;
  return out;
}

}  // namespace pfl
