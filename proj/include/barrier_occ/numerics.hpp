#pragma once

#include <functional>
#include <limits>

namespace barrier_occ::numerics {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
inline constexpr double kSqrt2Pi = 2.50662827463100050241576528481104525;

using RealFunction = std::function<double(double)>;

// Tolerances for adaptive quadrature. The defaults are the library-wide
// values; identities are checked at 1e-6 so these leave headroom.
struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;

  void validate() const;
};

enum class Endpoint { regular, singular_at_a };

/// Globally adaptive 15-point Gauss-Kronrod integration of f over (a, b).
///
/// b may be +infinity. With Endpoint::singular_at_a the integrand may blow up
/// like (t - a)^(-1/2); the substitution t = a + s^2 removes that before any
/// subdivision. Infinite tails are mapped with t = a + L s/(1 - s), s = 1 - r^2
/// and L = max(1, |a|), which keeps algebraic decay down to t^(-3/2) bounded
/// on the unit interval and tracks the tail's own scale when a is large.
/// The result satisfies |I - exact| <= max(abs_tol, rel_tol * |I|) by the
/// Kronrod error estimate, or NonConvergence is thrown.
double integrate(const RealFunction& f, double a, double b,
                 const QuadratureSpec& spec = {},
                 Endpoint endpoint = Endpoint::regular);

// Same as integrate() but also reports the summed error estimate.
struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};
QuadratureResult integrate_with_error(const RealFunction& f, double a, double b,
                                      const QuadratureSpec& spec = {},
                                      Endpoint endpoint = Endpoint::regular);

/// Scaled complementary error function exp(x^2) * erfc(x), finite for all
/// x >= 0 including where erfc underflows.
double erfcx(double x);

double std_normal_pdf(double x);
double std_normal_cdf(double x);

/// Mills ratio Phi(-a) / phi(a).
double mills_ratio(double a);

/// (1 + a^2) * M(a) - a with M the Mills ratio, for a >= 0. Strictly positive,
/// behaves like 2 / a^3 for large a; evaluated without the cancellation the
/// naive expression suffers there.
double mills_excess(double a);

/// Smallest x in [lo, hi] with F(x) >= p, located by bisection. F must be
/// non-decreasing. Throws OutOfRange unless F(lo) <= p <= F(hi).
double invert_cdf(const RealFunction& cdf, double lo, double hi, double p);

}  // namespace barrier_occ::numerics
