#include <cmath>
#include <vector>

#include "barrier_occ/bridge_laws.hpp"
#include "barrier_occ/errors.hpp"
#include "barrier_occ/limit_laws.hpp"
#include "barrier_occ/numerics.hpp"
#include "doctest.h"

using namespace barrier_occ;
using namespace barrier_occ::limits;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Antiderivative of t^(-1/2) exp(-y^2 / 2t) on (0, x], multiplied by
// exp(y^2 / 2) so it stays finite for large |y|.
double head_weight_oracle(double y, double x) {
  const double ay = std::abs(y);
  return std::exp(-y * y * (1.0 - x) / (2.0 * x)) *
         (2.0 * std::sqrt(x) - std::sqrt(2.0 * kPi) * ay * numerics::erfcx(ay / std::sqrt(2.0 * x)));
}

// Incomplete-gamma reduction of the negative half of the g' law.
double gprime_oracle(double u) {
  const double x = -u / 2.0;
  return 0.5 * (1.0 + u) * numerics::erfcx(std::sqrt(x)) + std::sqrt(x / kPi);
}

}  // namespace

TEST_CASE("budget reduction") {
  auto a = reduce_to_unit_budget({2.0, 1.0});
  CHECK(a.y_eff == 2.0);
  CHECK(a.time_scale == 1.0);
  a = reduce_to_unit_budget({2.0, 4.0});
  CHECK(a.y_eff == 1.0);
  CHECK(a.time_scale == 4.0);
  a = reduce_to_unit_budget({-3.0, 0.25});
  CHECK(a.y_eff == -6.0);
  CHECK(a.time_scale == 0.25);
  CHECK_THROWS_AS(reduce_to_unit_budget({1.0, 0.0}), DomainError);
}

TEST_CASE("atom at zero") {
  CHECK(g_atom(0.0) == 0.0);
  CHECK(g_atom(-1.0) == 0.0);
  const double r = std::sqrt(2.0 * kPi);
  CHECK(g_atom(1.0) == doctest::Approx(r / (r + 2.0)).epsilon(1e-15));
  CHECK(g_atom(1.0) == doctest::Approx(0.556211).epsilon(1e-5));
}

TEST_CASE("last-zero law, centred start") {
  CHECK(g_cdf(0.0, 1.0) == 0.5);
  CHECK(g_cdf(0.0, 4.0) == 0.75);
  CHECK(g_cdf(0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(g_cdf(0.0, -1.0), DomainError);
}

TEST_CASE("last-zero law below one matches the antiderivative") {
  for (double y : {-0.5, -2.0, -10.0, -40.0}) {
    const double denom = 2.0 * head_weight_oracle(y, 1.0);
    for (double x : {0.05, 0.3, 0.9, 1.0}) {
      CAPTURE(y);
      CAPTURE(x);
      CHECK(g_cdf(y, x) == doctest::Approx(head_weight_oracle(y, x) / denom).epsilon(1e-8));
    }
  }
  for (double y : {0.5, 2.0}) {
    const double r = std::sqrt(2.0 * kPi) * y;
    for (double x : {0.05, 0.5, 1.0}) {
      const double head = head_weight_oracle(y, x) * std::exp(-y * y / 2.0);
      CHECK(g_cdf(y, x) == doctest::Approx((2.0 * r + head) / (2.0 * r + 4.0)).epsilon(1e-9));
    }
  }
}

TEST_CASE("last-zero law has unit mass") {
  for (double y : {-2.0, -0.5, 0.5, 2.0}) {
    CAPTURE(y);
    CHECK(std::abs(g_cdf(y, numerics::kInf) - 1.0) <= 1e-7);
  }
  // For y < 0, q(t, 1) ~ 2 H(|y|) / t with H(a) = (1 + a^2) Phi(-a) - a phi(a),
  // so P(g > x) ~ 4 H(|y|) / (2 W sqrt(x)), W the unit-interval weight.
  const double far = g_cdf(-1.0, 1e6);
  const double h1 = 2.0 * numerics::std_normal_cdf(-1.0) - numerics::std_normal_pdf(1.0);
  const double w1 = head_weight_oracle(-1.0, 1.0) * std::exp(-0.5);
  const double tail = 4.0 * h1 / (2.0 * w1 * 1e3);
  CHECK(1.0 - far == doctest::Approx(tail).epsilon(1e-3));
  CHECK(1.0 - far <= g_tail_bound(-1.0, 1e6));
  CHECK(far <= 1.0);
}

TEST_CASE("tail bound dominates the true tail") {
  for (double y : {-3.0, -0.5, 0.0, 0.5, 3.0}) {
    for (double T : {1.5, 4.0, 64.0, 4096.0}) {
      CAPTURE(y);
      CAPTURE(T);
      CHECK(1.0 - g_cdf(y, T) <= g_tail_bound(y, T) + 1e-9);
    }
  }
  // the y > 0 bound comes from t q(t, 1) <= 1 + 4 y sqrt(t / (t - 1)) / sqrt(2 pi)
  for (double y : {0.1, 1.0, 5.0}) {
    for (double t : {1.01, 2.0, 10.0, 1e3, 1e6}) {
      CHECK(t * bridge::q(y, t, 1.0) <= 1.0 + 4.0 * y / std::sqrt(2.0 * kPi) * std::sqrt(t / (t - 1.0)));
    }
  }
  for (double y : {-2.0, -0.5, 0.5, 2.0}) {
    const auto tr = g_tail_truncation(y);
    CHECK(tr.bound <= 1e-10);
    CHECK(g_cdf(y, tr.point) >= 1.0 - 1e-4);
  }
}

TEST_CASE("occupation law") {
  CHECK(gamma_cdf(0.0, 0.25) == 0.5);
  for (double y : {-3.0, -1.0, 0.0, 1.0, 3.0}) CHECK(gamma_cdf(y, 1.0) == doctest::Approx(1.0));
  CHECK(std::abs(gamma_cdf(-1.0, 0.5) - 2.0 * g_cdf(-1.0, 0.5)) <= 1e-8);
  for (double y : {-0.5, -2.0, -15.0, -40.0}) {
    for (double u : {0.1, 0.5, 0.75, 0.99}) {
      CAPTURE(y);
      CAPTURE(u);
      const double ref = head_weight_oracle(y, u) / head_weight_oracle(y, 1.0);
      CHECK(gamma_cdf(y, u) == doctest::Approx(ref).epsilon(1e-8));
      CHECK(gamma_survival(y, u) == doctest::Approx(1.0 - ref).epsilon(1e-6));
    }
  }
  // both branches meet at y = 0
  CHECK(gamma_cdf(-1e-12, 0.3) == doctest::Approx(std::sqrt(0.3)).epsilon(1e-9));
  CHECK_THROWS_AS(gamma_cdf(0.0, 1.5), DomainError);
  CHECK(gamma_conditional_cdf(1.0, 0.0) == 0.0);
  CHECK(gamma_conditional_cdf(3.0, 0.49) == doctest::Approx(0.7));
  CHECK(gamma_conditional_cdf(0.0, 1.0) == 1.0);
  CHECK_THROWS_AS(gamma_conditional_cdf(-1.0, 0.5), DomainError);
}

TEST_CASE("evaluation grids stay monotone and bounded") {
  const auto xs = log_grid(1e-4, 1e4, 400);
  for (double y : {-15.0, -2.0, -0.5, 0.0, 0.5, 2.0, 30.0}) {
    const auto g = g_cdf_values(y, xs);
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK(g[k] <= 1.0);
      CHECK(g[k] >= g_atom(y));
      if (k > 0) CHECK(g[k] >= g[k - 1]);
    }
    CHECK(g[100] == doctest::Approx(g_cdf(y, xs[100])).epsilon(1e-9));
  }
  const auto us = log_grid(1e-4, 1.0, 400);
  for (double y : {-15.0, -2.0, 0.0, 2.0}) {
    const auto gv = gamma_cdf_values(y, us);
    for (std::size_t k = 1; k < gv.size(); ++k) CHECK(gv[k] >= gv[k - 1]);
    CHECK(gv.back() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("integral identities") {
  auto rel = [](IntegralIdentity v) { return std::abs(v.lhs - v.rhs); };
  CHECK(rel(integral_identity_check(-1.0, 1.0)) <= 1e-6);
  auto v = integral_identity_check(2.0, 1.0);
  CHECK(v.rhs == 4.0);
  CHECK(std::abs(v.lhs - 4.0) <= 1e-6);
  v = integral_identity_check(0.5, 0.25);
  CHECK(v.rhs == 2.0);
  CHECK(std::abs(v.lhs - 2.0) <= 1e-6);
  // right side for y < 0 against the antiderivative
  v = integral_identity_check(-2.0, 4.0);
  const double ref = 2.0 * std::sqrt(4.0) * std::exp(-0.5) -
                     std::sqrt(2.0 * kPi) * 2.0 * std::erfc(2.0 / std::sqrt(8.0));
  CHECK(v.rhs == doctest::Approx(ref).epsilon(1e-9));
  CHECK(std::abs(v.lhs - v.rhs) <= 1e-6 * std::max(1.0, v.rhs));
  CHECK_THROWS_AS(integral_identity_check(0.0, 1.0), DomainError);
}

TEST_CASE("limit law of y^2 (1 - g)") {
  CHECK(gprime_cdf(0.0) == 0.5);
  CHECK(gprime_cdf(2.0) == doctest::Approx(1.0 - std::exp(-1.0) / 2.0).epsilon(1e-15));
  CHECK(gprime_cdf(2.0) == doctest::Approx(0.81606).epsilon(1e-5));
  CHECK(gprime_cdf(-1e-10) == doctest::Approx(0.5).epsilon(1e-6));
  for (double u : {-0.01, -0.5, -3.0, -20.0, -50.0}) {
    CAPTURE(u);
    CHECK(gprime_cdf(u) == doctest::Approx(gprime_oracle(u)).epsilon(1e-8));
  }
  double prev = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double v = gprime_cdf(-50.0 + 100.0 * k / 400.0);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  CHECK(gprime_cdf(50.0) >= 1.0 - 1e-6);
  // the lower tail decays only like |u|^(-1/2)
  CHECK(gprime_cdf(-1e13) <= 1e-6);
}

TEST_CASE("inverse chi-squared and exponential laws") {
  const double mass = numerics::integrate(inv_chisq_density, 0.0, numerics::kInf);
  CHECK(std::abs(mass - 1.0) <= 1e-8);
  CHECK(inv_chisq_cdf(1.0) == doctest::Approx(2.0 * (1.0 - 0.8413447460685429)).epsilon(1e-14));
  CHECK(inv_chisq_cdf(1.0) == doctest::Approx(0.31731).epsilon(1e-4));
  for (double s : {0.05, 0.7, 3.0}) {
    CHECK(inv_chisq_cdf(s) == doctest::Approx(numerics::integrate(inv_chisq_density, 0.0, s)).epsilon(1e-9));
  }
  CHECK(inv_chisq_cdf(0.0) == 0.0);
  CHECK(exp_half_cdf(2.0 * std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(exp_half_cdf(-1.0) == 0.0);
}

TEST_CASE("quantiles") {
  CHECK(g_quantile(0.0, 0.5) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(gamma_quantile(0.0, 0.7) == doctest::Approx(0.49).epsilon(1e-12));
  CHECK(g_quantile(1.0, 0.1) == 0.0);
  CHECK(gamma_quantile(1.0, 0.1) == 0.0);
  for (double y : {-1.0, 1.0}) {
    for (double p : {0.6, 0.9}) {
      const double x = g_quantile(y, p);
      CHECK(std::abs(g_cdf(y, x) - p) <= 1e-8);
      const double u = gamma_quantile(y, p);
      CHECK(std::abs(gamma_cdf(y, u) - p) <= 1e-8);
    }
  }
  CHECK_THROWS_AS(g_quantile(0.0, 1.0), OutOfRange);
  CHECK_THROWS_AS(gamma_quantile(0.0, -0.1), OutOfRange);
}

TEST_CASE("tabulated laws satisfy the table invariants") {
  const auto grid = log_grid(1e-3, 1e3, 200);
  for (auto law : {LimitLaw::g, LimitLaw::gamma, LimitLaw::gprime, LimitLaw::exp_half,
                   LimitLaw::inv_chisq}) {
    for (double y : {-2.0, 0.0, 2.0}) {
      const auto rep = tabulate(law, y, grid);
      CHECK_NOTHROW(rep.table.validate());
      CHECK(rep.law_name == law);
    }
  }
  const auto cond = tabulate(LimitLaw::g_conditional, 3.0, grid);
  CHECK_NOTHROW(cond.table.validate());
  CHECK_THROWS_AS(tabulate(LimitLaw::g_conditional, -1.0, grid), DomainError);
  CHECK(to_string(LimitLaw::inv_chisq) == "inv_chisq");
}
