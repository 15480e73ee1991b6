#pragma once

#include "barrier_occ/numerics.hpp"

namespace barrier_occ::bridge {

// Brownian bridge of length t from y to z.
struct BridgeSpec {
  double y = 0.0;
  double t = 1.0;
  double z = 0.0;
};

/// Density of the first zero of the bridge at time s in (0, t). It is a
/// proper density exactly when z * y <= 0; otherwise part of the mass sits on
/// the event that the bridge never reaches zero.
double first_hit_density(const BridgeSpec& spec, double s);

/// Integral of first_hit_density over (0, t).
double first_hit_mass(const BridgeSpec& spec, const numerics::QuadratureSpec& quad = {});

/// P(occupation below zero <= u) for a bridge of length t from y to 0, by
/// integrating the first-zero density against the uniform post-zero law.
/// Requires t > 0 and 0 <= u < t.
double q_integral(double y, double t, double u, const numerics::QuadratureSpec& quad = {});

/// Same probability through the normal-distribution closed form. y = 0 is
/// allowed and gives u / t.
double q_closed(double y, double t, double u);

/// q for any t, u >= 0: 1 when u >= t, otherwise the closed form, clamped to
/// [0, 1].
double q(double y, double t, double u);

/// For y < 0 and 0 < u < t: q(y, t, u) * exp(a^2 / 2) with
/// a = |y| sqrt(t - u) / sqrt(t u). Stays representable where q underflows.
double q_tilted(double y, double t, double u);

}  // namespace barrier_occ::bridge
