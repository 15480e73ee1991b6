#include "barrier_occ/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "barrier_occ/errors.hpp"

namespace barrier_occ::numerics {

namespace {

// 15-point Kronrod nodes on [-1, 1]; the odd-indexed ones are the 7-point
// Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

struct Segment {
  int piece;
  double lo;
  double hi;
  double value;
  double error;
};

struct ByError {
  bool operator()(const Segment& a, const Segment& b) const { return a.error < b.error; }
};

double checked(const RealFunction& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw DomainError("integrand is not finite at t = " + std::to_string(x));
  }
  return v;
}

Segment kronrod15(const RealFunction& f, int piece, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = checked(f, center);
  double res_g = fc * kWg[3];
  double res_k = fc * kWgk[7];
  double res_abs = std::abs(res_k);
  std::array<double, 7> fv1{}, fv2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = checked(f, center - dx);
    const double f2 = checked(f, center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    res_k += kWgk[j] * (f1 + f2);
    res_abs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) res_g += kWg[j / 2] * (f1 + f2);
  }
  const double mean = 0.5 * res_k;
  double res_asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    res_asc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
  }
  const double ah = std::abs(half);
  res_abs *= ah;
  res_asc *= ah;
  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  if (res_abs > kTiny / (50.0 * kEps)) err = std::max(50.0 * kEps * res_abs, err);
  return Segment{piece, lo, hi, res_k * half, err};
}

struct Piece {
  RealFunction g;
  double lo;
  double hi;
};

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw DomainError("quadrature tolerances must be strictly positive");
  }
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be at least 1");
}

QuadratureResult integrate_with_error(const RealFunction& f, double a, double b,
                                      const QuadratureSpec& spec, Endpoint endpoint) {
  spec.validate();
  if (!std::isfinite(a) || std::isnan(b) || b < a) {
    throw DomainError("integration limits must satisfy a <= b with a finite");
  }
  if (a == b) return {};

  std::vector<Piece> pieces;
  const bool singular = endpoint == Endpoint::singular_at_a;
  // t = a + s^2 on [0, sqrt(w)]
  auto add_singular = [&](double w) {
    pieces.push_back({[&f, a](double s) { return 2.0 * s * f(a + s * s); }, 0.0, std::sqrt(w)});
  };
  // t = c + L (1/r^2 - 1) on (0, 1], L = max(1, |c|)
  auto add_tail = [&](double c) {
    const double scale = std::max(1.0, std::abs(c));
    pieces.push_back({[&f, c, scale](double r) {
                        const double r2 = r * r;
                        const double v = f(c + scale * (1.0 - r2) / r2);
                        return v == 0.0 ? 0.0 : v * 2.0 * scale / (r2 * r);
                      },
                      0.0, 1.0});
  };
  if (std::isinf(b)) {
    if (singular) {
      add_singular(1.0);
      add_tail(a + 1.0);
    } else {
      add_tail(a);
    }
  } else if (singular) {
    add_singular(b - a);
  } else {
    pieces.push_back({f, a, b});
  }

  std::priority_queue<Segment, std::vector<Segment>, ByError> queue;
  double total = 0.0;
  double total_err = 0.0;
  for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
    Segment s = kronrod15(pieces[i].g, i, pieces[i].lo, pieces[i].hi);
    total += s.value;
    total_err += s.error;
    queue.push(s);
  }
  int count = static_cast<int>(queue.size());
  while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (count >= spec.max_subdivisions) {
      throw NonConvergence("quadrature budget of " + std::to_string(spec.max_subdivisions) +
                           " subdivisions exhausted; error estimate " +
                           std::to_string(total_err));
    }
    const Segment worst = queue.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi) ||
        (worst.hi - worst.lo) <= 8.0 * kEps * std::max(std::abs(worst.lo), std::abs(worst.hi))) {
      throw NonConvergence("quadrature interval cannot be subdivided further");
    }
    queue.pop();
    const RealFunction& g = pieces[worst.piece].g;
    Segment left = kronrod15(g, worst.piece, worst.lo, mid);
    Segment right = kronrod15(g, worst.piece, mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++count;
  }
  // Re-sum to shed the drift of incremental updates.
  double value = 0.0, err = 0.0;
  while (!queue.empty()) {
    value += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  return {value, err, count};
}

double integrate(const RealFunction& f, double a, double b, const QuadratureSpec& spec,
                 Endpoint endpoint) {
  return integrate_with_error(f, a, b, spec, endpoint).value;
}

double erfcx(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) {
    if (x < -26.7) return std::numeric_limits<double>::infinity();
    const double hi = x * x;
    const double lo = std::fma(x, x, -hi);
    return 2.0 * std::exp(hi) * (1.0 + lo) - erfcx(-x);
  }
  if (x < 25.0) {
    const double hi = x * x;
    const double lo = std::fma(x, x, -hi);
    return std::exp(hi) * (1.0 + lo) * std::erfc(x);
  }
  // Asymptotic series 1/(x sqrt(pi)) * sum (-1)^n (2n-1)!! / (2x^2)^n.
  const double inv = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 12; ++n) {
    term *= -(2.0 * n - 1.0) * inv;
    sum += term;
  }
  return sum / (x * std::sqrt(kPi));
}

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double mills_ratio(double a) { return std::sqrt(kPi / 2.0) * erfcx(a / kSqrt2); }

double mills_excess(double a) {
  if (!(a >= 0.0)) throw DomainError("mills_excess needs a >= 0");
  if (a < 20.0) return (1.0 + a * a) * mills_ratio(a) - a;
  // sum_{j>=1} (-1)^(j+1) (2j) (2j-1)!! a^(-2j-1)
  const double inv2 = 1.0 / (a * a);
  double dfact = 1.0;  // (2j-1)!!
  double power = 1.0 / a;
  double sum = 0.0;
  for (int j = 1; j <= 20; ++j) {
    dfact *= 2.0 * j - 1.0;
    power *= inv2;
    const double term = 2.0 * j * dfact * power;
    sum += (j % 2 == 1) ? term : -term;
  }
  return sum;
}

double invert_cdf(const RealFunction& cdf, double lo, double hi, double p) {
  if (!(lo <= hi) || std::isnan(p)) throw DomainError("invert_cdf needs lo <= hi");
  const double flo = cdf(lo);
  const double fhi = cdf(hi);
  if (p < flo || p > fhi) {
    throw OutOfRange("probability " + std::to_string(p) + " outside [" + std::to_string(flo) +
                     ", " + std::to_string(fhi) + "]");
  }
  if (flo >= p) return lo;
  // Invariant: F(lo) < p <= F(hi).
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (cdf(mid) >= p) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace barrier_occ::numerics
