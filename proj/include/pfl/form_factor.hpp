#pragma once

#include <string>

#include "pfl/vec3.hpp"

namespace pfl {

enum class Profile { bump, truncated_poly };
enum class Normalization { unit_integral, unit_amplitude };

Profile profile_from_string(const std::string& s);
Normalization normalization_from_string(const std::string& s);

// Coupling density smearing the particle: real, radial, smooth, and exactly
// zero outside the support radius. The bump profile is C^inf across the
// support edge; the truncated polynomial (1 - (r/R)^2)^3 is C^2 there.
class FormFactor {
 public:
  FormFactor(Profile profile, double support_radius, Normalization norm);

  double radial(double r) const;             // rho_1(r)
  double radial_derivative(double r) const;  // d rho_1 / dr
  double operator()(const Vec3& x) const { return radial(x.norm()); }

  Profile profile() const { return profile_; }
  double support_radius() const { return radius_; }
  double amplitude() const { return amplitude_; }

  // Radial moments, by adaptive quadrature at construction.
  double total_integral() const { return total_integral_; }   // ∫ rho dx
  double l2_squared() const { return l2sq_; }                  // ∫ rho^2 dx
  double grad_l2_squared() const { return grad_l2sq_; }        // ∫ |grad rho|^2 dx
  double second_moment() const { return moment2_; }            // ∫_0^R r^2 rho_1 dr
  double fourth_moment() const { return moment4_; }            // ∫_0^R r^4 rho_1 dr

 private:
  double profile_raw(double r) const;
  double profile_raw_derivative(double r) const;

  Profile profile_;
  double radius_;
  double amplitude_ = 1.0;
  double total_integral_ = 0.0;
  double l2sq_ = 0.0;
  double grad_l2sq_ = 0.0;
  double moment2_ = 0.0;
  double moment4_ = 0.0;
};

// Radial profile of the unitary Fourier transform,
//   rho_hat(k) = (2 pi)^(-3/2) (4 pi / k) ∫_0^R r sin(kr) rho_1(r) dr,
// real-valued and even in k. Below k*R = 1e-4 the sinc kernel is replaced
// by its series through k^2, which avoids the 0/0 of the closed form.
class RadialSpectrum {
 public:
  explicit RadialSpectrum(const FormFactor& f) : f_(f) {}

  double operator()(double k) const;

  const FormFactor& form_factor() const { return f_; }
  static constexpr double small_k_threshold = 1e-4;  // on k * R

 private:
  FormFactor f_;
};

// Coulomb-type coupling constant  delta_rho = ∫ dk |rho_hat|^2 / k^2
//                                           = 4 pi ∫_0^inf |rho_hat(k)|^2 dk.
// Adaptive quadrature up to a cutoff chosen from the spectral decay; the
// neglected tail is bounded by |rho_hat(k_max)|^2 * k_max.
struct DeltaRhoResult {
  double value = 0.0;
  double k_max = 0.0;
  double tail_bound = 0.0;
  double quadrature_error = 0.0;
};

DeltaRhoResult delta_rho_detailed(const FormFactor& f);
double delta_rho(const FormFactor& f);

// Cutoff beyond which |rho_hat| has fallen below `relative_floor` of its
// k = 0 value; shared by the audit quadratures.
double spectral_cutoff(const RadialSpectrum& rs, double relative_floor = 1e-10);

}  // namespace pfl
