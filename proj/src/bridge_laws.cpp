#include "barrier_occ/bridge_laws.hpp"

#include <algorithm>
#include <cmath>

#include "barrier_occ/errors.hpp"

namespace barrier_occ::bridge {

using numerics::kSqrt2Pi;

namespace {

void check_tu(double t, double u) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("bridge length t must be positive");
  if (!(u >= 0.0) || !(u < t)) throw DomainError("occupation level u must lie in [0, t)");
}

// exp(y^2/(2t) - y^2/(2x)) for 0 < x <= t, written to avoid overflow.
double hit_exp(double y, double t, double x) { return std::exp(-y * y * (t - x) / (2.0 * t * x)); }


// Density written with both s and w = t - s so callers near either end keep
// full precision.
double hit_density(double y, double t, double z, double s, double w) {
  const double expo = (y - z) * (y - z) / (2.0 * t) - z * z / (2.0 * w) - y * y / (2.0 * s);
  return std::abs(y) * std::sqrt(t) / std::sqrt(2.0 * numerics::kPi * s * s * s * w) *
         std::exp(expo);
}

}  // namespace

double first_hit_density(const BridgeSpec& spec, double s) {
  const auto [y, t, z] = spec;
  if (y == 0.0) throw DomainError("first_hit_density needs y != 0");
  if (!(t > 0.0)) throw DomainError("bridge length t must be positive");
  if (!(s > 0.0 && s < t)) throw DomainError("first_hit_density needs 0 < s < t");
  return hit_density(y, t, z, s, t - s);
}

double first_hit_mass(const BridgeSpec& spec, const numerics::QuadratureSpec& quad) {
  const auto [y, t, z] = spec;
  if (y == 0.0) throw DomainError("first_hit_mass needs y != 0");
  if (!(t > 0.0)) throw DomainError("bridge length t must be positive");
  const double half = 0.5 * t;
  auto f = [=](double s) { return hit_density(y, t, z, s, t - s); };
  // Upper half reflected so the (t - s)^(-1/2) edge sits at the origin.
  auto g = [=](double w) { return hit_density(y, t, z, t - w, w); };
  return numerics::integrate(f, 0.0, half, quad) +
         numerics::integrate(g, 0.0, half, quad, numerics::Endpoint::singular_at_a);
}

double q_integral(double y, double t, double u, const numerics::QuadratureSpec& quad) {
  check_tu(t, u);
  if (y == 0.0) return u / t;
  if (u == 0.0) return 0.0;
  const double ay = std::abs(y);
  const double st = std::sqrt(t);
  if (y < 0.0) {
    auto f = [=](double x) {
      const double d = t - x;
      return st * (u - x) * ay / (kSqrt2Pi * std::sqrt(x * x * x * d * d * d)) * hit_exp(y, t, x);
    };
    return numerics::integrate(f, 0.0, u, quad);
  }
  auto f1 = [=](double x) {
    const double d = t - x;
    return st * u * y / (kSqrt2Pi * std::sqrt(x * x * x * d * d * d)) * hit_exp(y, t, x);
  };
  // Second piece in w = t - x, singular like w^(-1/2) at w = 0.
  auto f2 = [=](double w) {
    const double x = t - w;
    return st * y / (kSqrt2Pi * std::sqrt(x * x * x * w)) * hit_exp(y, t, x);
  };
  return numerics::integrate(f1, 0.0, t - u, quad) +
         numerics::integrate(f2, 0.0, u, quad, numerics::Endpoint::singular_at_a);
}

double q_tilted(double y, double t, double u) {
  if (!(y < 0.0)) throw DomainError("q_tilted needs y < 0");
  check_tu(t, u);
  if (u == 0.0) throw DomainError("q_tilted needs u > 0");
  const double a = -y * std::sqrt((t - u) / (t * u));
  return 2.0 * (u / t) / kSqrt2Pi * numerics::mills_excess(a);
}

double q_closed(double y, double t, double u) {
  check_tu(t, u);
  if (u == 0.0) return 0.0;
  if (y < 0.0) {
    const double a = -y * std::sqrt((t - u) / (t * u));
    return 2.0 * (u / t) * numerics::std_normal_pdf(a) * numerics::mills_excess(a);
  }
  const double b = y * std::sqrt(u / (t * (t - u)));
  const double tail = numerics::std_normal_cdf(-b);
  return std::erf(b / numerics::kSqrt2) + 2.0 * (u / t) * tail +
         2.0 * ((t - u) / t) * b * (numerics::std_normal_pdf(b) - b * tail);
}

double q(double y, double t, double u) {
  if (!(t >= 0.0) || !(u >= 0.0)) throw DomainError("q needs t >= 0 and u >= 0");
  if (u >= t) return 1.0;
  if (y == 0.0) return u / t;
  return std::clamp(q_closed(y, t, u), 0.0, 1.0);
}

}  // namespace barrier_occ::bridge
