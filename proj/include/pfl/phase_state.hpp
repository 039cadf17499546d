#pragma once

#include "pfl/field_state.hpp"
#include "pfl/vec3.hpp"

namespace pfl {

struct ParticleState {
  Vec3 q;  // position
  Vec3 p;  // momentum (unit mass)
};

// Full state Y = (psi, pi, q, p).
struct PhaseState {
  FieldState field;
  ParticleState particle;
};

// Point on the soliton manifold: center a, velocity v with |v| < 1.
struct SolitonParams {
  Vec3 v;
  Vec3 a;

  SolitonParams(const Vec3& v_, const Vec3& a_) : v(v_), a(a_) {
    require_finite(v, "soliton velocity");
    require_finite(a, "soliton center");
    if (v.norm() >= 1.0 - 1e-9)
      throw std::invalid_argument("soliton velocity must satisfy |v| < 1");
  }

  double speed() const { return v.norm(); }
  double lorentz_lambda() const { return std::sqrt(1.0 - v.norm2()); }
  Vec3 momentum() const { return v / lorentz_lambda(); }  // p_v = v / sqrt(1 - v^2)
};

}  // namespace pfl
