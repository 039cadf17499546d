#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "pfl/grid.hpp"

namespace pfl {

using cplx = std::complex<double>;

// 3-D transforms between grid samples and unitary-convention spectral
// coefficients:
//   forward:  f_hat(k_n) = (2 pi)^(-3/2) h^3  sum_x f(x) e^(-i k_n . x)
//   backward: f(x)       = (2 pi)^(-3/2) dk^3 sum_n f_hat(k_n) e^(+i k_n . x)
// With this pairing Parseval reads  h^3 sum |f|^2 = dk^3 sum |f_hat|^2.
// Backed by FFTW; instances are cached per grid size.
class SpectralTransform {
 public:
  static std::shared_ptr<const SpectralTransform> get(int n);
  ~SpectralTransform();

  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  void forward(const GridSpec& grid, const std::vector<double>& real_field,
               std::vector<cplx>& spectral) const;

  // Inverse transform of a Hermitian-symmetric spectrum; the imaginary
  // residue is asserted small and dropped.
  void backward(const GridSpec& grid, const std::vector<cplx>& spectral,
                std::vector<double>& real_field) const;

  // Full complex inverse (no realness assumption).
  void backward_complex(const GridSpec& grid, const std::vector<cplx>& spectral,
                        std::vector<cplx>& out) const;

 private:
  explicit SpectralTransform(int n);
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_;
};

}  // namespace pfl
