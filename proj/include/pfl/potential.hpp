#pragma once

#include <stdexcept>

#include "pfl/vec3.hpp"

namespace pfl {

enum class PotentialKind { zero, quadratic, quartic_double_well };

// External potential acting on the particle. The nonzero kinds are
// confining: V -> infinity with |q|.
class Potential {
 public:
  static Potential zero() { return Potential(PotentialKind::zero, 0.0, 0.0); }
  static Potential quadratic(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("quadratic potential: c must be positive");
    return Potential(PotentialKind::quadratic, c, 0.0);
  }
  static Potential double_well(double c, double b) {
    if (!(c > 0.0) || !(b > 0.0))
      throw std::invalid_argument("double-well potential: c and b must be positive");
    return Potential(PotentialKind::quartic_double_well, c, b);
  }

  double value(const Vec3& q) const {
    switch (kind_) {
      case PotentialKind::zero:
        return 0.0;
      case PotentialKind::quadratic:
        return c_ * q.norm2();
      case PotentialKind::quartic_double_well: {
        const double u = q.norm2() - b_ * b_;
        return c_ * u * u;
      }
    }
    return 0.0;
  }

  Vec3 gradient(const Vec3& q) const {
    switch (kind_) {
      case PotentialKind::zero:
        return {};
      case PotentialKind::quadratic:
        return 2.0 * c_ * q;
      case PotentialKind::quartic_double_well:
        return 4.0 * c_ * (q.norm2() - b_ * b_) * q;
    }
    return {};
  }

  PotentialKind kind() const { return kind_; }
  bool confining() const { return kind_ != PotentialKind::zero; }
  double c() const { return c_; }
  double b() const { return b_; }

 private:
  Potential(PotentialKind kind, double c, double b) : kind_(kind), c_(c), b_(b) {}
  PotentialKind kind_;
  double c_;
  double b_;
};

}  // namespace pfl
