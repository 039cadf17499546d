#include "pfl/state_builders.hpp"

#include <cmath>
#include <stdexcept>

namespace pfl {

void require_grid_fits(const GridSpec& grid, const FormFactor& f) {
  if (grid.length <= 4.0 * f.support_radius())
    throw std::invalid_argument("grid too small: box length must exceed 4 * support radius");
}

SpectralFormFactor::SpectralFormFactor(const FormFactor& f, const GridSpec& grid)
    : f_(f), grid_(grid) {
  require_grid_fits(grid, f);
  RadialSpectrum rs(f);
  const int half = grid.n / 2;
  const int max_msq = 3 * half * half;
  table_.resize(max_msq + 1);
  const double dk = grid.dk();
  for (int m = 0; m <= max_msq; ++m) table_[m] = rs(dk * std::sqrt(double(m)));
  rho_hat_zero_ = table_[0];
}

PhaseTable::PhaseTable(const GridSpec& grid, const Vec3& center) {
  const int n = grid.n;
  x.resize(n);
  y.resize(n);
  z.resize(n);
  for (int i = 0; i < n; ++i) {
    const double k = grid.wavenumber(i);
    x[i] = cplx(std::cos(k * center.x), -std::sin(k * center.x));
    y[i] = cplx(std::cos(k * center.y), -std::sin(k * center.y));
    z[i] = cplx(std::cos(k * center.z), -std::sin(k * center.z));
  }
}

namespace {

// Shared mode loop for the two constructed families. The denominator
// k^2 - (k.v)^2 >= k^2 (1 - |v|^2) > 0 on all populated modes.
void fill_family(const SpectralFormFactor& sff, const Vec3& v, const Vec3& center,
                 std::vector<cplx>& psi_hat, std::vector<cplx>& pi_hat) {
  const GridSpec& grid = sff.grid();
  const int n = grid.n;
  const double dk = grid.dk();
  psi_hat.assign(grid.size(), cplx(0.0, 0.0));
  pi_hat.assign(grid.size(), cplx(0.0, 0.0));
  PhaseTable phase(grid, center);
  for (int i = 0; i < n; ++i) {
    if (grid.is_nyquist(i)) continue;
    const int ni = grid.signed_index(i);
    const double kx = dk * ni;
    for (int j = 0; j < n; ++j) {
      if (grid.is_nyquist(j)) continue;
      const int nj = grid.signed_index(j);
      const double ky = dk * nj;
      const cplx pxy = phase.x[i] * phase.y[j];
      for (int l = 0; l < n; ++l) {
        if (grid.is_nyquist(l)) continue;
        const int nl = grid.signed_index(l);
        const int msq = ni * ni + nj * nj + nl * nl;
        if (msq == 0) continue;
        const double kz = dk * nl;
        const double k2 = dk * dk * msq;
        const double kv = kx * v.x + ky * v.y + kz * v.z;
        const double denom = k2 - kv * kv;
        const cplx ph = pxy * phase.z[l];
        const double rh = sff.at_msq(msq);
        const std::size_t idx = grid.index(i, j, l);
        psi_hat[idx] = -(rh / denom) * ph;
        pi_hat[idx] = cplx(0.0, kv * rh / denom) * ph;
      }
    }
  }
}

}  // namespace

void fill_soliton_spectrum(const SpectralFormFactor& sff, const SolitonParams& s,
                           std::vector<cplx>& psi_hat, std::vector<cplx>& pi_hat) {
  fill_family(sff, s.v, s.a, psi_hat, pi_hat);
}

PhaseState stationary_state(const SpectralFormFactor& sff, const Vec3& q_star) {
  require_finite(q_star, "stationary center");
  std::vector<cplx> psi_hat, pi_hat;
  fill_family(sff, Vec3{}, q_star, psi_hat, pi_hat);
  return PhaseState{FieldState::from_spectral(sff.grid(), std::move(psi_hat), std::move(pi_hat)),
                    ParticleState{q_star, Vec3{}}};
}

PhaseState stationary_state(const FormFactor& f, const Vec3& q_star, const GridSpec& grid) {
  return stationary_state(SpectralFormFactor(f, grid), q_star);
}

PhaseState soliton_state(const SpectralFormFactor& sff, const SolitonParams& s) {
  std::vector<cplx> psi_hat, pi_hat;
  fill_soliton_spectrum(sff, s, psi_hat, pi_hat);
  return PhaseState{FieldState::from_spectral(sff.grid(), std::move(psi_hat), std::move(pi_hat)),
                    ParticleState{s.a, s.momentum()}};
}

PhaseState soliton_state(const FormFactor& f, const SolitonParams& s, const GridSpec& grid) {
  return soliton_state(SpectralFormFactor(f, grid), s);
}

}  // namespace pfl
