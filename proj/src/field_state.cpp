#include "pfl/field_state.hpp"

#include <cmath>
#include <stdexcept>

namespace pfl {

void enforce_spectral_gauge(const GridSpec& grid, std::vector<cplx>& a) {
  const int n = grid.n;
  a[0] = cplx(0.0, 0.0);
  for (int i = 0; i < n; ++i) {
    const int ii = (n - i) % n;
    for (int j = 0; j < n; ++j) {
      const int jj = (n - j) % n;
      for (int l = 0; l < n; ++l) {
        const int ll = (n - l) % n;
        const std::size_t idx = grid.index(i, j, l);
        const std::size_t partner = grid.index(ii, jj, ll);
        if (partner < idx) continue;
        const cplx mean = 0.5 * (a[idx] + std::conj(a[partner]));
        a[idx] = mean;
        a[partner] = std::conj(mean);
      }
    }
  }
}

FieldState FieldState::zero(const GridSpec& grid) {
  FieldState fs(grid);
  fs.psi_.assign(grid.size(), 0.0);
  fs.pi_.assign(grid.size(), 0.0);
  fs.psi_hat_.assign(grid.size(), cplx(0.0, 0.0));
  fs.pi_hat_.assign(grid.size(), cplx(0.0, 0.0));
  return fs;
}

FieldState FieldState::from_grid(const GridSpec& grid, std::vector<double> psi,
                                 std::vector<double> pi) {
  if (psi.size() != grid.size() || pi.size() != grid.size())
    throw std::invalid_argument("field state: grid array size mismatch");
  FieldState fs(grid);
  auto fft = SpectralTransform::get(grid.n);
  fft->forward(grid, psi, fs.psi_hat_);
  fft->forward(grid, pi, fs.pi_hat_);
  enforce_spectral_gauge(grid, fs.psi_hat_);
  enforce_spectral_gauge(grid, fs.pi_hat_);
  // Re-synthesize so grid and spectral views match after the projection.
  fft->backward(grid, fs.psi_hat_, fs.psi_);
  fft->backward(grid, fs.pi_hat_, fs.pi_);
  return fs;
}

FieldState FieldState::from_spectral(const GridSpec& grid, std::vector<cplx> psi_hat,
                                     std::vector<cplx> pi_hat) {
  if (psi_hat.size() != grid.size() || pi_hat.size() != grid.size())
    throw std::invalid_argument("field state: spectral array size mismatch");
  FieldState fs(grid);
  fs.psi_hat_ = std::move(psi_hat);
  fs.pi_hat_ = std::move(pi_hat);
  enforce_spectral_gauge(grid, fs.psi_hat_);
  enforce_spectral_gauge(grid, fs.pi_hat_);
  auto fft = SpectralTransform::get(grid.n);
  fft->backward(grid, fs.psi_hat_, fs.psi_);
  fft->backward(grid, fs.pi_hat_, fs.pi_);
  return fs;
}

namespace {
double l2_grid(const GridSpec& grid, const std::vector<double>& a) {
  double sum = 0.0;
  for (double v : a) sum += v * v;
  return std::sqrt(sum * grid.cell_volume());
}
}  // namespace

double FieldState::psi_l2_grid() const { return l2_grid(grid_, psi_); }
double FieldState::pi_l2_grid() const { return l2_grid(grid_, pi_); }

}  // namespace pfl
