#include "pfl/form_factor.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pfl/quadrature.hpp"

namespace pfl {

namespace {
constexpr double four_pi = 4.0 * std::numbers::pi;
const double unitary_factor = std::pow(2.0 * std::numbers::pi, -1.5);
}  // namespace

Profile profile_from_string(const std::string& s) {
  if (s == "bump") return Profile::bump;
  if (s == "truncated-poly" || s == "truncated_poly") return Profile::truncated_poly;
  throw std::invalid_argument("unknown form-factor profile: " + s);
}

Normalization normalization_from_string(const std::string& s) {
  if (s == "unit-integral" || s == "unit_integral") return Normalization::unit_integral;
  if (s == "unit-amplitude" || s == "unit_amplitude") return Normalization::unit_amplitude;
  throw std::invalid_argument("unknown normalization rule: " + s);
}

double FormFactor::profile_raw(double r) const {
  const double s = r / radius_;
  if (s >= 1.0) return 0.0;
  switch (profile_) {
    case Profile::bump:
      return std::exp(-1.0 / (1.0 - s * s));
    case Profile::truncated_poly: {
      const double u = 1.0 - s * s;
      return u * u * u;
    }
  }
  return 0.0;
}

double FormFactor::profile_raw_derivative(double r) const {
  const double s = r / radius_;
  if (s >= 1.0) return 0.0;
  const double u = 1.0 - s * s;
  switch (profile_) {
    case Profile::bump:
      return std::exp(-1.0 / u) * (-2.0 * s / (radius_ * u * u));
    case Profile::truncated_poly:
      return -6.0 * s * u * u / radius_;
  }
  return 0.0;
}

FormFactor::FormFactor(Profile profile, double support_radius, Normalization norm)
    : profile_(profile), radius_(support_radius) {
  if (!(support_radius > 0.0) || !std::isfinite(support_radius))
    throw std::invalid_argument("form factor: support radius must be positive");

  const double quad_tol = 1e-14;
  auto radial_integral = [&](auto&& g) {
    return quad::integrate_adaptive(g, 0.0, radius_, quad_tol, 1e-13).value;
  };

  const double raw_mass =
      four_pi * radial_integral([&](double r) { return r * r * profile_raw(r); });
  amplitude_ = (norm == Normalization::unit_integral) ? 1.0 / raw_mass : 1.0;

  total_integral_ = amplitude_ * raw_mass;
  l2sq_ = four_pi * radial_integral([&](double r) {
    const double v = amplitude_ * profile_raw(r);
    return r * r * v * v;
  });
  grad_l2sq_ = four_pi * radial_integral([&](double r) {
    const double d = amplitude_ * profile_raw_derivative(r);
    return r * r * d * d;
  });
  moment2_ = radial_integral([&](double r) { return r * r * radial(r); });
  moment4_ = radial_integral([&](double r) { return r * r * r * r * radial(r); });
}

double FormFactor::radial(double r) const { return amplitude_ * profile_raw(r); }

double FormFactor::radial_derivative(double r) const {
  return amplitude_ * profile_raw_derivative(r);
}

double RadialSpectrum::operator()(double k) const {
  if (k < 0.0) throw std::invalid_argument("rho_hat: wavenumber must be nonnegative");
  const double R = f_.support_radius();
  if (k * R < small_k_threshold) {
    // sin(kr)/(kr) = 1 - (kr)^2/6 + O((kr)^4); the k^4 term is < 1e-17 here.
    return unitary_factor * four_pi * (f_.second_moment() - k * k * f_.fourth_moment() / 6.0);
  }
  // Composite Gauss-Legendre with panels sized to the oscillation of sin(kr).
  const int panels = std::max(4, static_cast<int>(std::ceil(k * R / 3.0)));
  const double dr = R / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    sum += quad::integrate([&](double r) { return r * std::sin(k * r) * f_.radial(r); },
                           p * dr, (p + 1) * dr, 16);
  }
  return unitary_factor * four_pi / k * sum;
}

double spectral_cutoff(const RadialSpectrum& rs, double relative_floor) {
  const double r0 = std::abs(rs(0.0));
  const double R = rs.form_factor().support_radius();
  double k = 8.0 / R;
  // The envelope decays faster than any power; step outward until it is
  // below the floor at two consecutive probes (guards against the zeros of
  // the oscillatory transform).
  for (int i = 0; i < 64; ++i) {
    if (std::abs(rs(k)) < relative_floor * r0 && std::abs(rs(1.05 * k)) < relative_floor * r0)
      return k;
    k *= 1.25;
  }
  return k;
}

DeltaRhoResult delta_rho_detailed(const FormFactor& f) {
  RadialSpectrum rs(f);
  DeltaRhoResult out;
  out.k_max = spectral_cutoff(rs, 1e-10);
  auto integrand = [&](double k) {
    const double v = rs(k);
    return v * v;
  };
  const auto q = quad::integrate_adaptive(integrand, 0.0, out.k_max, 1e-16, 1e-12);
  out.value = four_pi * q.value;
  out.quadrature_error = four_pi * q.error_estimate;
  const double edge = rs(out.k_max);
  out.tail_bound = four_pi * edge * edge * out.k_max;
  return out;
}

double delta_rho(const FormFactor& f) { return delta_rho_detailed(f).value; }

}  // namespace pfl
