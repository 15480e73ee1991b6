#include <cmath>
#include <random>
#include <vector>

#include "barrier_occ/cdf_table.hpp"
#include "barrier_occ/errors.hpp"
#include "barrier_occ/numerics.hpp"
#include "doctest.h"

using namespace barrier_occ;
using namespace barrier_occ::numerics;

namespace {

// Maclaurin series of erf in long double; good to ~1e-18 for |x| <= 3.
long double erf_series(long double x) {
  long double term = x;
  long double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    sum += term / (2 * n + 1);
  }
  return 2.0L / std::sqrt(3.14159265358979323846264338327950288L) * sum;
}

double phi_oracle(double x) {
  return static_cast<double>(0.5L * (1.0L + erf_series(x / std::sqrt(2.0L))));
}

// Continued fraction for exp(x^2) erfc(x), x >= 2.
long double erfcx_cf(long double x) {
  long double tail = x;
  for (int k = 400; k >= 1; --k) tail = x + (k / 2.0L) / tail;
  return 1.0L / (std::sqrt(3.14159265358979323846264338327950288L) * tail);
}

double poly_integral(const std::vector<double>& c, double a, double b) {
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    s += c[k] * (std::pow(b, k + 1) - std::pow(a, k + 1)) / static_cast<double>(k + 1);
  }
  return s;
}

double poly_eval(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) s = s * x + c[k];
  return s;
}

}  // namespace

TEST_CASE("integrate handles an inverse square-root endpoint") {
  const double v = integrate([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0, {},
                             Endpoint::singular_at_a);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("integrate over an infinite tail") {
  CHECK(integrate([](double t) { return std::exp(-t); }, 0.0, kInf) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(integrate([](double t) { return std::pow(t, -1.5); }, 1.0, kInf) ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(integrate([](double t) { return std::exp(-t) / std::sqrt(t); }, 0.0, kInf, {},
                  Endpoint::singular_at_a) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-9));
}

TEST_CASE("integrate agrees with a ten-million point midpoint rule") {
  auto f = [](double t) { return std::exp(-1.0 / (2.0 * t)) / std::sqrt(t); };
  const long n = 10'000'000;
  long double sum = 0.0L;
  for (long i = 0; i < n; ++i) sum += f((i + 0.5) / n);
  const double oracle = static_cast<double>(sum / n);
  const double v = integrate(f, 0.0, 1.0, {}, Endpoint::singular_at_a);
  CHECK(std::abs(v - oracle) <= 1e-8);
  // antiderivative form as a second witness
  const double closed = 2.0 * std::exp(-0.5) - kSqrt2Pi * std::erfc(1.0 / kSqrt2);
  CHECK(std::abs(v - closed) <= 1e-10);
}

TEST_CASE("a single Kronrod panel is exact for degree 21 polynomials") {
  std::vector<double> c(22);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = 1.0 / (1.0 + k);
  QuadratureSpec spec;
  spec.max_subdivisions = 1;
  spec.abs_tol = 1.0;  // the estimate itself is pessimistic on one panel
  const auto r = integrate_with_error([&](double x) { return poly_eval(c, x); }, -1.0, 1.0, spec);
  CHECK(r.value == doctest::Approx(poly_integral(c, -1.0, 1.0)).epsilon(1e-14));
}

TEST_CASE("integrate is linear on random polynomials") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  const QuadratureSpec spec;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> p(30), r(30);
    for (auto& v : p) v = coef(gen);
    for (auto& v : r) v = coef(gen);
    const double alpha = coef(gen);
    auto f = [&](double x) { return poly_eval(p, x); };
    auto g = [&](double x) { return poly_eval(r, x); };
    const double lhs = integrate([&](double x) { return alpha * f(x) + g(x); }, 0.0, 1.3, spec);
    const double rhs = alpha * integrate(f, 0.0, 1.3, spec) + integrate(g, 0.0, 1.3, spec);
    CHECK(std::abs(lhs - rhs) <= 3.0 * spec.abs_tol);
  }
}

TEST_CASE("integrate reports budget exhaustion") {
  QuadratureSpec spec;
  spec.max_subdivisions = 3;
  CHECK_THROWS_AS(integrate([](double t) { return std::sin(200.0 * t) / std::sqrt(t); }, 0.0, 1.0,
                            spec),
                  NonConvergence);
}

TEST_CASE("quadrature spec validation") {
  QuadratureSpec spec;
  spec.abs_tol = 0.0;
  CHECK_THROWS_AS(spec.validate(), DomainError);
  spec = {};
  spec.max_subdivisions = 0;
  CHECK_THROWS_AS(spec.validate(), DomainError);
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0), DomainError);
  CHECK(integrate([](double) { return 1.0; }, 1.0, 1.0) == 0.0);
}

TEST_CASE("standard normal cdf") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std_normal_cdf(kInf) == 1.0);
  CHECK(std_normal_cdf(-kInf) == 0.0);
  CHECK(std::abs(std_normal_cdf(1.0) - 0.8413447460685429) <= 1e-15);
  for (double x = -3.0; x <= 3.0; x += 0.125) {
    CHECK(std::abs(std_normal_cdf(x) - phi_oracle(x)) <= 1e-14);
    CHECK(std::abs(std_normal_cdf(-x) - (1.0 - std_normal_cdf(x))) <= 1e-15);
  }
  CHECK(std_normal_cdf(-30.0) > 0.0);
}

TEST_CASE("scaled complementary error function") {
  for (double x : {0.0, 0.3, 1.0, 2.5, 4.0}) {
    const long double ref = std::exp(static_cast<long double>(x) * x) * std::erfc((long double)x);
    CHECK(erfcx(x) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-13));
  }
  for (double x : {2.0, 8.0, 24.9, 25.0, 25.1, 60.0, 1e4}) {
    CHECK(erfcx(x) == doctest::Approx(static_cast<double>(erfcx_cf(x))).epsilon(1e-13));
  }
  for (double x : {-0.5, -2.0, -5.0}) {
    const long double ref = std::exp(static_cast<long double>(x) * x) * std::erfc((long double)x);
    CHECK(erfcx(x) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
  }
}

TEST_CASE("mills excess is accurate across the series switch") {
  for (double a : {0.0, 0.5, 3.0, 8.0}) {
    const long double la = a;
    const long double m = std::sqrt(3.14159265358979323846264338327950288L / 2.0L) *
                          std::exp(la * la / 2.0L) * std::erfc(la / std::sqrt(2.0L));
    const double ref = static_cast<double>((1.0L + la * la) * m - la);
    CHECK(mills_excess(a) == doctest::Approx(ref).epsilon(1e-9));
  }
  // continued-fraction route well past the switch
  for (double a : {15.0, 19.9, 20.0, 20.1, 40.0}) {
    const long double m = std::sqrt(3.14159265358979323846264338327950288L / 2.0L) *
                          erfcx_cf(a / std::sqrt(2.0L));
    const long double la = a;
    const double ref = static_cast<double>((1.0L + la * la) * m - la);
    CHECK(mills_excess(a) == doctest::Approx(ref).epsilon(1e-6));
  }
  CHECK(mills_excess(1e3) == doctest::Approx(2e-9).epsilon(1e-4));
  CHECK(mills_excess(0.0) == doctest::Approx(std::sqrt(kPi / 2.0)).epsilon(1e-15));
}

TEST_CASE("invert_cdf") {
  auto id = [](double x) { return x; };
  CHECK(invert_cdf(id, 0.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
  auto half_root = [](double x) { return std::sqrt(x) / 2.0; };
  CHECK(invert_cdf(half_root, 0.0, 1.0, 0.25) == doctest::Approx(0.25).epsilon(1e-10));
  auto root = [](double x) { return std::sqrt(x); };
  CHECK(invert_cdf(root, 0.0, 1.0, 0.5) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK_THROWS_AS(invert_cdf(half_root, 0.0, 1.0, 0.6), OutOfRange);
  CHECK_THROWS_AS(invert_cdf(id, 0.5, 1.0, 0.2), OutOfRange);

  // ties go to the left end of a flat stretch
  auto flat = [](double x) { return x < 0.2 ? 2.0 * x : (x < 0.5 ? 0.4 : x - 0.1); };
  CHECK(invert_cdf(flat, 0.0, 1.0, 0.4) == doctest::Approx(0.2).epsilon(1e-12));

  auto logistic = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  for (double x = -8.0; x <= 8.0; x += 0.5) {
    const double back = invert_cdf(logistic, -20.0, 20.0, logistic(x));
    CHECK(std::abs(back - x) <= 1e-8);
  }
}

TEST_CASE("CdfTable invariants and evaluation") {
  CdfTable t{0.2, {0.0, 1.0, 2.0}, {0.2, 0.6, 1.0}, Interpolation::linear};
  CHECK_NOTHROW(t.validate());
  CHECK(t(-1.0) == 0.0);
  CHECK(t(0.0) == 0.2);
  CHECK(t(0.5) == doctest::Approx(0.4));
  CHECK(t(5.0) == 1.0);

  CdfTable s{0.0, {0.5, 1.0}, {0.25, 1.0}, Interpolation::step};
  CHECK(s(0.25) == 0.0);
  CHECK(s(0.5) == 0.25);
  CHECK(s.left_limit(0.5) == 0.0);
  CHECK(s(0.99) == 0.25);
  CHECK(s(1.0) == 1.0);
  CHECK(s.left_limit(1.0) == 0.25);

  CdfTable bad = t;
  bad.values = {0.2, 0.1, 1.0};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = t;
  bad.atom_at_zero = 0.3;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = t;
  bad.grid = {0.0, 0.0, 2.0};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = t;
  bad.values = {0.2, 0.6, 1.2};
  CHECK_THROWS_AS(bad.validate(), DomainError);
}
