#include "barrier_occ/limit_laws.hpp"

#include <algorithm>
#include <cmath>

#include "barrier_occ/bridge_laws.hpp"
#include "barrier_occ/errors.hpp"
#include "barrier_occ/numerics.hpp"

namespace barrier_occ::limits {

using numerics::Endpoint;
using numerics::kInf;
using numerics::kSqrt2Pi;

namespace {

// For y < 0 both weights carry an extra factor exp(y^2 / 2) so that nothing
// underflows for large |y|; every caller divides by a quantity scaled alike.

// t^(-1/2) exp(-y^2 / 2t) on (0, 1], where q(t, 1) = 1.
double low_weight(double y, double t) {
  if (y < 0.0) return std::exp(-y * y * (1.0 - t) / (2.0 * t)) / std::sqrt(t);
  return std::exp(-y * y / (2.0 * t)) / std::sqrt(t);
}

// q(t, 1) t^(-1/2) exp(-y^2 / 2t) for t > 1.
double high_weight(double y, double t) {
  if (y <= 0.0) {
    const double a = -y * std::sqrt((t - 1.0) / t);
    return 2.0 / (t * kSqrt2Pi) * numerics::mills_excess(a) / std::sqrt(t);
  }
  return bridge::q(y, t, 1.0) * std::exp(-y * y / (2.0 * t)) / std::sqrt(t);
}

// Integral of the (scaled) weight q(t, 1) t^(-1/2) exp(-y^2 / 2t) over (a, b).
double weight_integral(double y, double a, double b) {
  if (!(b > a)) return 0.0;
  const numerics::QuadratureSpec spec;
  if (a < 1.0 && b > 1.0) return weight_integral(y, a, 1.0) + weight_integral(y, 1.0, b);
  if (b <= 1.0) {
    return numerics::integrate([y](double t) { return low_weight(y, t); }, a, b, spec,
                               a == 0.0 ? Endpoint::singular_at_a : Endpoint::regular);
  }
  auto hi = [y](double t) { return high_weight(y, t); };
  if (a == 1.0) {
    // q(t, 1) depends on sqrt(t - 1) near t = 1
    if (b <= 2.0) return numerics::integrate(hi, 1.0, b, spec, Endpoint::singular_at_a);
    return numerics::integrate(hi, 1.0, 2.0, spec, Endpoint::singular_at_a) +
           weight_integral(y, 2.0, b);
  }
  if (std::isinf(b)) return numerics::integrate(hi, a, kInf, spec);
  if (b > 8.0 * a) {
    return numerics::integrate(hi, a, kInf, spec) - numerics::integrate(hi, b, kInf, spec);
  }
  return numerics::integrate(hi, a, b, spec);
}

double unit_weight(double y) { return weight_integral(y, 0.0, 1.0); }

double g_from_weight(double y, double w, double w1) {
  if (y < 0.0) return std::min(1.0, w / (2.0 * w1));
  const double r = kSqrt2Pi * y;
  return std::min(1.0, (2.0 * r + w) / (2.0 * r + 4.0));
}

double g_cdf_zero(double x) {
  if (x <= 1.0) return std::sqrt(x) / 2.0;
  return 1.0 - 1.0 / (2.0 * std::sqrt(x));
}

void check_grid(const std::vector<double>& xs) {
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!(xs[k] >= 0.0)) throw DomainError("evaluation points must be non-negative");
    if (k > 0 && xs[k] < xs[k - 1]) throw DomainError("evaluation points must be non-decreasing");
  }
}

void check_unit(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("occupation level u must lie in [0, 1]");
}

}  // namespace

UnitBudget reduce_to_unit_budget(const StartSpec& spec) {
  if (!(spec.c > 0.0) || !std::isfinite(spec.c)) throw DomainError("budget c must be positive");
  return {spec.y / std::sqrt(spec.c), spec.c};
}

double g_atom(double y) {
  if (!(y > 0.0)) return 0.0;
  const double r = kSqrt2Pi * y;
  return r / (r + 2.0);
}

double g_cdf(double y, double x) {
  if (!(x >= 0.0)) throw DomainError("g_cdf needs x >= 0");
  if (y == 0.0) return g_cdf_zero(x);
  const double w1 = y < 0.0 ? unit_weight(y) : 1.0;
  return g_from_weight(y, weight_integral(y, 0.0, x), w1);
}

std::vector<double> g_cdf_values(double y, const std::vector<double>& xs) {
  check_grid(xs);
  std::vector<double> out(xs.size());
  if (y == 0.0) {
    std::transform(xs.begin(), xs.end(), out.begin(), g_cdf_zero);
    return out;
  }
  const double w1 = y < 0.0 ? unit_weight(y) : 1.0;
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    acc += weight_integral(y, prev, xs[k]);
    prev = xs[k];
    out[k] = g_from_weight(y, acc, w1);
  }
  return out;
}

double gamma_cdf(double y, double u) {
  check_unit(u);
  if (y >= 0.0) {
    const double r = kSqrt2Pi * y;
    return (r + 2.0 * std::sqrt(u)) / (r + 2.0);
  }
  if (u < 0.5) return weight_integral(y, 0.0, u) / unit_weight(y);
  return 1.0 - gamma_survival(y, u);
}

std::vector<double> gamma_cdf_values(double y, const std::vector<double>& us) {
  check_grid(us);
  std::vector<double> out(us.size());
  if (y >= 0.0) {
    std::transform(us.begin(), us.end(), out.begin(), [y](double u) { return gamma_cdf(y, u); });
    return out;
  }
  const double w1 = unit_weight(y);
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < us.size(); ++k) {
    check_unit(us[k]);
    acc += weight_integral(y, prev, us[k]);
    prev = us[k];
    out[k] = std::min(1.0, acc / w1);
  }
  return out;
}

double gamma_survival(double y, double u) {
  check_unit(u);
  if (y >= 0.0) {
    const double r = kSqrt2Pi * y;
    return 2.0 * (1.0 - std::sqrt(u)) / (r + 2.0);
  }
  if (u < 0.5) return 1.0 - gamma_cdf(y, u);
  return weight_integral(y, u, 1.0) / unit_weight(y);
}

double gamma_conditional_cdf(double y, double u) {
  if (!(y >= 0.0)) throw DomainError("gamma_conditional_cdf needs y >= 0");
  check_unit(u);
  return std::sqrt(u);
}

std::vector<double> g_conditional_values(double y, const std::vector<double>& ss) {
  if (!(y > 0.0)) throw DomainError("the conditional last-zero law needs y > 0");
  check_grid(ss);
  std::vector<double> out(ss.size());
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < ss.size(); ++k) {
    const double x = ss[k] * y * y;
    acc += weight_integral(y, prev, x);
    prev = x;
    // (g_cdf - atom) / (1 - atom) collapses to the weight integral over 4.
    out[k] = std::min(1.0, acc / 4.0);
  }
  return out;
}

IntegralIdentity integral_identity_check(double y, double u) {
  if (y == 0.0) throw DomainError("integral_identity_check needs y != 0");
  if (!(u > 0.0) || !std::isfinite(u)) throw DomainError("integral_identity_check needs u > 0");
  const numerics::QuadratureSpec spec;
  auto weight = [y](double t) { return std::exp(-y * y / (2.0 * t)) / std::sqrt(t); };
  const double head = numerics::integrate(weight, 0.0, u, spec, Endpoint::singular_at_a);
  if (y < 0.0) {
    // q(t, u) exp(-y^2 / 2t) = q_tilted exp(-y^2 / 2u)
    auto tail = [y, u](double t) {
      const double a = -y * std::sqrt((t - u) / (t * u));
      return 2.0 * (u / t) / kSqrt2Pi * numerics::mills_excess(a) / std::sqrt(t);
    };
    const double lhs = std::exp(-y * y / (2.0 * u)) *
                       numerics::integrate(tail, u, kInf, spec, Endpoint::singular_at_a);
    return {lhs, head};
  }
  auto tail = [y, u](double t) { return bridge::q(y, t, u) * std::exp(-y * y / (2.0 * t)) / std::sqrt(t); };
  const double rest = numerics::integrate(tail, u, kInf, spec, Endpoint::singular_at_a);
  return {head + rest, 4.0 * std::sqrt(u)};
}

double gprime_cdf(double u) {
  if (std::isnan(u)) throw DomainError("gprime_cdf argument is NaN");
  if (u >= 0.0) return 1.0 - 0.5 * std::exp(-u / 2.0);
  auto f = [u](double z) {
    return 2.0 * z / std::sqrt(2.0 * numerics::kPi * (2.0 * z - u)) * std::exp(-z);
  };
  return numerics::integrate(f, 0.0, kInf);
}

double inv_chisq_cdf(double s) {
  if (!(s > 0.0)) return 0.0;
  return std::erfc(1.0 / std::sqrt(2.0 * s));
}

double inv_chisq_density(double s) {
  if (!(s > 0.0)) return 0.0;
  return std::exp(-1.0 / (2.0 * s)) / std::sqrt(2.0 * numerics::kPi * s * s * s);
}

double exp_half_cdf(double u) {
  if (!(u > 0.0)) return 0.0;
  return -std::expm1(-u / 2.0);
}

double g_quantile(double y, double p) {
  if (!(p >= 0.0 && p < 1.0)) throw OutOfRange("g_quantile needs p in [0, 1)");
  if (p <= g_atom(y)) return 0.0;
  double hi = 1.0;
  while (g_cdf(y, hi) < p) {
    hi *= 2.0;
    if (hi > 1e300) throw OutOfRange("g_quantile: probability too close to 1");
  }
  return numerics::invert_cdf([y](double x) { return g_cdf(y, x); }, 0.0, hi, p);
}

double gamma_quantile(double y, double p) {
  if (!(p >= 0.0 && p < 1.0)) throw OutOfRange("gamma_quantile needs p in [0, 1)");
  if (y >= 0.0) {
    if (p <= g_atom(y)) return 0.0;
    const double r = kSqrt2Pi * y;
    const double root = (p * (r + 2.0) - r) / 2.0;
    return root * root;
  }
  return numerics::invert_cdf([y](double u) { return gamma_cdf(y, u); }, 0.0, 1.0, p);
}

double g_tail_bound(double y, double T) {
  if (!(T > 1.0)) throw DomainError("g_tail_bound needs T > 1");
  if (y >= 0.0) {
    // q(t, 1) <= (1 + 4 y sqrt(t / (t - 1)) / sqrt(2 pi)) / t
    const double k = 1.0 + 4.0 * y / kSqrt2Pi * std::sqrt(T / (T - 1.0));
    return 2.0 * k / std::sqrt(T) / (2.0 * kSqrt2Pi * y + 4.0);
  }
  // q(t, 1) <= 2 Phi(-|y| sqrt(1 - 1/T)) / t for t >= T; kept in logs since
  // both the bound and the normaliser underflow for large |y|.
  const double a = -y * std::sqrt(1.0 - 1.0 / T);
  const double log_bound = std::log(4.0 * numerics::mills_ratio(a)) + y * y / (2.0 * T) -
                           std::log(kSqrt2Pi * std::sqrt(T)) - std::log(2.0 * unit_weight(y));
  return std::exp(log_bound);
}

TailTruncation g_tail_truncation(double y, double eps) {
  if (!(eps > 0.0)) throw DomainError("tail tolerance must be positive");
  double T = 2.0;
  double bound = g_tail_bound(y, T);
  while (bound > eps) {
    T *= 2.0;
    if (T > 1e250) throw NonConvergence("tail truncation point out of range");
    bound = g_tail_bound(y, T);
  }
  return {T, bound};
}

std::string to_string(LimitLaw law) {
  switch (law) {
    case LimitLaw::g: return "g";
    case LimitLaw::gamma: return "gamma";
    case LimitLaw::g_conditional: return "g_conditional";
    case LimitLaw::gprime: return "gprime";
    case LimitLaw::exp_half: return "exp_half";
    case LimitLaw::inv_chisq: return "inv_chisq";
  }
  return "unknown";
}

LimitLawReport tabulate(LimitLaw law, double y, const std::vector<double>& grid) {
  check_grid(grid);
  numerics::CdfTable table;
  table.grid = grid;
  table.interpolation = numerics::Interpolation::linear;
  switch (law) {
    case LimitLaw::g:
      table.atom_at_zero = g_atom(y);
      table.values = g_cdf_values(y, grid);
      break;
    case LimitLaw::gamma:
    {
      table.atom_at_zero = g_atom(y);
      const auto split = std::upper_bound(grid.begin(), grid.end(), 1.0);
      table.values = gamma_cdf_values(y, std::vector<double>(grid.begin(), split));
      table.values.resize(grid.size(), 1.0);
      break;
    }
    case LimitLaw::g_conditional:
      table.values = g_conditional_values(y, grid);
      break;
    case LimitLaw::gprime:
      for (double u : grid) table.values.push_back(gprime_cdf(u));
      break;
    case LimitLaw::exp_half:
      for (double u : grid) table.values.push_back(exp_half_cdf(u));
      break;
    case LimitLaw::inv_chisq:
      for (double s : grid) table.values.push_back(inv_chisq_cdf(s));
      break;
  }
  table.validate();
  return {law, std::move(table)};
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw DomainError("log_grid needs 0 < lo < hi, n >= 2");
  std::vector<double> out(static_cast<std::size_t>(n));
  const double ratio = std::log(hi / lo);
  for (int k = 0; k < n; ++k) out[k] = lo * std::exp(ratio * k / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace barrier_occ::limits
