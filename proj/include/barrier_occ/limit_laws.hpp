#pragma once

#include <string>
#include <vector>

#include "barrier_occ/cdf_table.hpp"

namespace barrier_occ::limits {

// Starting point y and occupation budget c > 0.
struct StartSpec {
  double y = 0.0;
  double c = 1.0;
};

struct UnitBudget {
  double y_eff;
  double time_scale;
};

/// Brownian scaling: the last zero and occupation time for budget c are c
/// times those for start y / sqrt(c) and budget 1. Every other function here
/// takes unit budget.
UnitBudget reduce_to_unit_budget(const StartSpec& spec);

/// P(g = 0) = P(Gamma = 0); positive only for y > 0.
double g_atom(double y);

/// P(g <= x) for x >= 0 (x may be +infinity).
double g_cdf(double y, double x);

/// g_cdf at every point of a non-decreasing grid, accumulated piecewise so the
/// result is exactly non-decreasing.
std::vector<double> g_cdf_values(double y, const std::vector<double>& xs);

/// P(Gamma <= u), u in [0, 1].
double gamma_cdf(double y, double u);

/// gamma_cdf on a non-decreasing grid in [0, 1], exactly non-decreasing.
std::vector<double> gamma_cdf_values(double y, const std::vector<double>& us);

/// P(Gamma > u), u in [0, 1]. Computed from the upper tail directly, so it
/// keeps relative accuracy where gamma_cdf is close to 1.
double gamma_survival(double y, double u);

/// P(Gamma <= u | Gamma > 0) for y >= 0; equals sqrt(u).
double gamma_conditional_cdf(double y, double u);

/// P(g / y^2 <= s | g > 0) for y > 0.
std::vector<double> g_conditional_values(double y, const std::vector<double>& ss);

struct IntegralIdentity {
  double lhs;
  double rhs;
};

/// Both sides of the integral identities linking q and the first-zero weight
/// t^(-1/2) exp(-y^2 / 2t). For y < 0 the two sides are the integral of q(t, u)
/// times the weight over (u, inf) and the weight over (0, u); for y > 0 the sum
/// of both and 4 sqrt(u).
IntegralIdentity integral_identity_check(double y, double u);

/// Limit law of y^2 (1 - g) as y -> -infinity.
double gprime_cdf(double u);

/// Law of 1 / N^2 for a standard normal N.
double inv_chisq_cdf(double s);
double inv_chisq_density(double s);

/// Exponential law with rate 1/2.
double exp_half_cdf(double u);

/// Smallest x with g_cdf(y, x) >= p, p in [0, 1). Inside the atom the answer
/// is 0.
double g_quantile(double y, double p);
double gamma_quantile(double y, double p);

struct TailTruncation {
  double point;  // T* with P(g > T*) <= bound
  double bound;
};

/// Analytic bound on P(g > T) from q(t, 1) = O(1/t); T > 1.
double g_tail_bound(double y, double T);

/// Doubles T from 2 until g_tail_bound(y, T) <= eps.
TailTruncation g_tail_truncation(double y, double eps = 1e-10);

enum class LimitLaw { g, gamma, g_conditional, gprime, exp_half, inv_chisq };

std::string to_string(LimitLaw law);

struct LimitLawReport {
  LimitLaw law_name;
  numerics::CdfTable table;
};

/// Tabulates a law on a non-negative increasing grid with linear
/// interpolation. gprime is tabulated on its non-negative half only.
LimitLawReport tabulate(LimitLaw law, double y, const std::vector<double>& grid);

/// n points geometrically spaced from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace barrier_occ::limits
