#pragma once

#include <vector>

#include "pfl/form_factor.hpp"
#include "pfl/grid.hpp"
#include "pfl/phase_state.hpp"

namespace pfl {

// rho_hat tabulated at every mode magnitude of a grid. Because
// |k|^2 = dk^2 (n1^2 + n2^2 + n3^2), one entry per integer square sum covers
// the whole lattice; the table is what the propagator, the constructors and
// every spectral inner product against rho share.
class SpectralFormFactor {
 public:
  SpectralFormFactor(const FormFactor& f, const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  const FormFactor& form_factor() const { return f_; }
  double at_msq(int msq) const { return table_[msq]; }
  double rho_hat_zero() const { return rho_hat_zero_; }

 private:
  FormFactor f_;
  GridSpec grid_;
  std::vector<double> table_;
  double rho_hat_zero_ = 0.0;
};

// Per-axis translation phases e^(-i k_i c) for a center c; the product over
// axes gives e^(-i k . c). Conjugate-symmetric by construction, so fields
// assembled from them are exactly Hermitian.
struct PhaseTable {
  std::vector<cplx> x, y, z;
  PhaseTable(const GridSpec& grid, const Vec3& center);
  cplx at(int i, int j, int l) const { return x[i] * y[j] * z[l]; }
};

// Equilibrium state (psi_q*, 0, q*, 0): psi_hat = -rho_hat e^(-i k q*) / k^2
// on nonzero modes, the unique mean-zero solution of Delta psi = rho(. - q*).
PhaseState stationary_state(const SpectralFormFactor& sff, const Vec3& q_star);
PhaseState stationary_state(const FormFactor& f, const Vec3& q_star, const GridSpec& grid);

// Traveling solution of the free system:
//   psi_hat = -rho_hat e^(-i k a) / (k^2 - (k.v)^2)
//   pi_hat  =  i (k.v) rho_hat e^(-i k a) / (k^2 - (k.v)^2)   ( = -v.grad psi )
//   p       = v / sqrt(1 - v^2)
PhaseState soliton_state(const SpectralFormFactor& sff, const SolitonParams& s);
PhaseState soliton_state(const FormFactor& f, const SolitonParams& s, const GridSpec& grid);

// Spectral coefficients only (no grid synthesis); the cheap path used by
// distance evaluations and the propagator.
void fill_soliton_spectrum(const SpectralFormFactor& sff, const SolitonParams& s,
                           std::vector<cplx>& psi_hat, std::vector<cplx>& pi_hat);

// The box must contain the coupling region with margin.
void require_grid_fits(const GridSpec& grid, const FormFactor& f);

}  // namespace pfl
