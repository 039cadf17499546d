#pragma once

#include <cstddef>
#include <numbers>
#include <stdexcept>

namespace pfl {

// Periodic cube [0, L)^3 sampled on N points per axis. Wavenumbers are
// 2*pi*n/L with n in {-N/2, ..., N/2 - 1}; spectral constructors leave the
// n = -N/2 planes empty so that every populated mode has a distinct
// conjugate partner (keeps real fields and translation phases exact).
struct GridSpec {
  int n = 0;
  double length = 0.0;

  GridSpec() = default;
  GridSpec(int n_, double length_) : n(n_), length(length_) {
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("grid: N must be even and >= 4");
    if (!(length > 0.0)) throw std::invalid_argument("grid: box length must be positive");
  }

  double h() const { return length / n; }                       // grid spacing
  double dk() const { return 2.0 * std::numbers::pi / length; } // mode spacing
  std::size_t size() const {
    return static_cast<std::size_t>(n) * n * n;
  }
  double cell_volume() const { return h() * h() * h(); }
  double mode_volume() const { return dk() * dk() * dk(); }

  // Signed mode index for array index i in [0, N).
  int signed_index(int i) const { return i < n / 2 ? i : i - n; }
  bool is_nyquist(int i) const { return i == n / 2; }
  double coordinate(int i) const { return i * h(); }
  double wavenumber(int i) const { return dk() * signed_index(i); }

  std::size_t index(int i, int j, int l) const {
    return (static_cast<std::size_t>(i) * n + j) * n + l;
  }

  // Shortest signed displacement from b to a on the torus.
  double min_image(double a, double b) const {
    double d = a - b;
    d -= length * std::round(d / length);
    return d;
  }

  bool operator==(const GridSpec& o) const { return n == o.n && length == o.length; }
};

}  // namespace pfl
