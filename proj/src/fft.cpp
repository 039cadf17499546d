#include "pfl/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace pfl {

namespace {
std::mutex plan_mutex;  // FFTW planning is not thread-safe
}

struct SpectralTransform::Impl {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  std::size_t size = 0;
  mutable std::mutex exec_mutex;  // plans share the in/out buffers
};

SpectralTransform::SpectralTransform(int n) : impl_(new Impl), n_(n) {
  impl_->size = static_cast<std::size_t>(n) * n * n;
  std::lock_guard<std::mutex> lock(plan_mutex);
  impl_->in = fftw_alloc_complex(impl_->size);
  impl_->out = fftw_alloc_complex(impl_->size);
  if (!impl_->in || !impl_->out) throw std::bad_alloc();
  impl_->fwd = fftw_plan_dft_3d(n, n, n, impl_->in, impl_->out, FFTW_FORWARD, FFTW_ESTIMATE);
  impl_->bwd = fftw_plan_dft_3d(n, n, n, impl_->in, impl_->out, FFTW_BACKWARD, FFTW_ESTIMATE);
}

SpectralTransform::~SpectralTransform() {
  std::lock_guard<std::mutex> lock(plan_mutex);
  fftw_destroy_plan(impl_->fwd);
  fftw_destroy_plan(impl_->bwd);
  fftw_free(impl_->in);
  fftw_free(impl_->out);
}

std::shared_ptr<const SpectralTransform> SpectralTransform::get(int n) {
  static std::map<int, std::weak_ptr<const SpectralTransform>> cache;
  static std::mutex cache_mutex;
  std::lock_guard<std::mutex> lock(cache_mutex);
  if (auto existing = cache[n].lock()) return existing;
  std::shared_ptr<const SpectralTransform> fresh(new SpectralTransform(n));
  cache[n] = fresh;
  return fresh;
}

void SpectralTransform::forward(const GridSpec& grid, const std::vector<double>& real_field,
                                std::vector<cplx>& spectral) const {
  if (grid.n != n_ || real_field.size() != impl_->size)
    throw std::invalid_argument("spectral transform: size mismatch");
  std::lock_guard<std::mutex> lock(impl_->exec_mutex);
  for (std::size_t i = 0; i < impl_->size; ++i) {
    impl_->in[i][0] = real_field[i];
    impl_->in[i][1] = 0.0;
  }
  fftw_execute(impl_->fwd);
  const double scale = std::pow(2.0 * std::numbers::pi, -1.5) * grid.cell_volume();
  spectral.resize(impl_->size);
  for (std::size_t i = 0; i < impl_->size; ++i)
    spectral[i] = cplx(impl_->out[i][0] * scale, impl_->out[i][1] * scale);
}

void SpectralTransform::backward(const GridSpec& grid, const std::vector<cplx>& spectral,
                                 std::vector<double>& real_field) const {
  if (grid.n != n_ || spectral.size() != impl_->size)
    throw std::invalid_argument("spectral transform: size mismatch");
  std::lock_guard<std::mutex> lock(impl_->exec_mutex);
  for (std::size_t i = 0; i < impl_->size; ++i) {
    impl_->in[i][0] = spectral[i].real();
    impl_->in[i][1] = spectral[i].imag();
  }
  fftw_execute(impl_->bwd);
  const double scale = std::pow(2.0 * std::numbers::pi, -1.5) * grid.mode_volume();
  real_field.resize(impl_->size);
  double max_abs = 0.0, max_imag = 0.0;
  for (std::size_t i = 0; i < impl_->size; ++i) {
    real_field[i] = impl_->out[i][0] * scale;
    max_abs = std::max(max_abs, std::abs(real_field[i]));
    max_imag = std::max(max_imag, std::abs(impl_->out[i][1] * scale));
  }
  if (max_imag > 1e-9 * std::max(max_abs, 1e-300) && max_imag > 1e-12)
    throw std::runtime_error("spectral transform: non-Hermitian input to real inverse");
}

void SpectralTransform::backward_complex(const GridSpec& grid, const std::vector<cplx>& spectral,
                                         std::vector<cplx>& out) const {
  if (grid.n != n_ || spectral.size() != impl_->size)
    throw std::invalid_argument("spectral transform: size mismatch");
  std::lock_guard<std::mutex> lock(impl_->exec_mutex);
  for (std::size_t i = 0; i < impl_->size; ++i) {
    impl_->in[i][0] = spectral[i].real();
    impl_->in[i][1] = spectral[i].imag();
  }
  fftw_execute(impl_->bwd);
  const double scale = std::pow(2.0 * std::numbers::pi, -1.5) * grid.mode_volume();
  out.resize(impl_->size);
  for (std::size_t i = 0; i < impl_->size; ++i)
    out[i] = cplx(impl_->out[i][0] * scale, impl_->out[i][1] * scale);
}

}  // namespace pfl
