#pragma once

#include <vector>

#include "pfl/fft.hpp"
#include "pfl/grid.hpp"
#include "pfl/vec3.hpp"

namespace pfl {

// Scalar field pair (psi, pi) on the periodic grid, kept simultaneously as
// real samples and as their unitary spectral coefficients. States are
// immutable once constructed and safe to share across threads.
//
// Gauge: the k = 0 coefficient carries no dynamics on the torus (a constant
// shift of psi), so both constructors project it out. Hermitian symmetry is
// enforced so the grid arrays are exactly real.
class FieldState {
 public:
  static FieldState zero(const GridSpec& grid);
  static FieldState from_grid(const GridSpec& grid, std::vector<double> psi,
                              std::vector<double> pi);
  static FieldState from_spectral(const GridSpec& grid, std::vector<cplx> psi_hat,
                                  std::vector<cplx> pi_hat);

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& psi() const { return psi_; }
  const std::vector<double>& pi() const { return pi_; }
  const std::vector<cplx>& psi_hat() const { return psi_hat_; }
  const std::vector<cplx>& pi_hat() const { return pi_hat_; }

  // L2 norms over the box; grid and spectral routes agree by Parseval.
  double psi_l2_grid() const;
  double pi_l2_grid() const;

 private:
  FieldState(const GridSpec& grid) : grid_(grid) {}
  GridSpec grid_;
  std::vector<double> psi_, pi_;
  std::vector<cplx> psi_hat_, pi_hat_;
};

// In-place cleanup used by every spectral constructor: zero the mean,
// average conjugate-pair bins so the inverse transform is exactly real.
void enforce_spectral_gauge(const GridSpec& grid, std::vector<cplx>& a);

}  // namespace pfl
