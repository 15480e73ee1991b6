// Limit process sampler.
//
// Joint law used for a draw with g > 0: the first zero s of the pre-g bridge,
// the length ell = g - s and the occupation v of the part after s have density
// proportional to
//   levy(s) * ell^(-3/2) * 1{v <= min(ell, c(s))},
// where levy is the first-passage density of level |y|, c(s) = 1 - s for y < 0
// and 1 otherwise. Integrating v and ell gives levy(s) * 4 sqrt(c(s)), so
//   y > 0: s = y^2 / N^2 after the atom has been handled,
//   y < 0: s = y^2 / N^2 with |N| > |y|, kept with probability sqrt(1 - s),
// and given s, ell is c U^2 or c / U^2 with probability 1/2 each, v uniform on
// [0, min(ell, c)].
//
// The path before s is a Bessel(3) bridge from |y| to 0 carrying the sign of
// y. After s it is a Brownian bridge of length ell with occupation v, built by
// cyclically shifting a discrete Gaussian bridge to the partial sum of the
// matching rank. After g it is a Bessel(3) process from 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "barrier_occ/errors.hpp"
#include "barrier_occ/limit_laws.hpp"
#include "barrier_occ/samplers.hpp"

namespace barrier_occ::sampling {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm3(const std::array<double, 3>& w) {
  return std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
}

// Discrete Brownian bridge 0 -> 0 of length ell on n steps whose count of
// negative partial sums equals round(v / (ell / n)).
std::vector<double> bridge_with_occupation(double ell, double v, long n, RngStream& rng) {
  const double h = ell / static_cast<double>(n);
  const double sd = std::sqrt(h);
  std::vector<double> w(static_cast<std::size_t>(n) + 1);
  w[0] = 0.0;
  for (long i = 0; i < n; ++i) w[i + 1] = w[i] + sd * rng.normal();
  const double end = w[n];
  for (long i = 0; i <= n; ++i) w[i] -= end * static_cast<double>(i) / static_cast<double>(n);
  const long m = std::clamp(std::lround(v / h), 0L, n - 1);
  std::vector<long> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0L);
  std::nth_element(idx.begin(), idx.begin() + m, idx.end(),
                   [&w](long a, long b) { return w[a] < w[b]; });
  const long j = idx[m];
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  for (long k = 0; k <= n; ++k) out[k] = w[(j + k) % n] - w[j];
  out[n] = 0.0;
  return out;
}

}  // namespace

XSkeleton sample_X_skeleton(double y, RngStream& rng) {
  if (!std::isfinite(y)) throw DomainError("start point must be finite");
  XSkeleton k;
  double c = 1.0;
  if (y > 0.0) {
    if (rng.uniform() < limits::g_atom(y)) {
      k.atom = true;
      k.tau = kInf;
      return k;
    }
    double n = 0.0;
    while (n == 0.0) n = rng.normal();
    k.s = y * y / (n * n);
  } else if (y < 0.0) {
    for (;;) {
      const double n = rng.normal_tail(-y);
      const double s = y * y / (n * n);
      if (rng.uniform() < std::sqrt(1.0 - s)) {
        k.s = s;
        break;
      }
    }
    c = 1.0 - k.s;
  }
  const bool short_piece = rng.uniform() < 0.5;
  const double w = rng.uniform();
  k.ell = short_piece ? c * w * w : c / (w * w);
  k.v = rng.uniform() * std::min(k.ell, c);
  k.g = k.s + k.ell;
  k.tau = y > 0.0 ? k.s : 0.0;
  k.gamma = std::min(1.0, k.v + (y < 0.0 ? k.s : 0.0));
  return k;
}

XSample sample_X(double y, double horizon, double step, RngStream& rng) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be positive");
  if (!(step > 0.0)) throw DomainError("step must be positive");
  const XSkeleton sk = sample_X_skeleton(y, rng);
  XSample out;
  out.g = sk.g;
  out.tau = sk.tau;
  out.gamma = sk.gamma;
  if (sk.atom) {
    out.path = sample_bessel3(y, horizon, std::min(step, horizon), rng);
    return out;
  }
  const double n_real = std::max(1.0, std::ceil(horizon / std::min(step, horizon) * (1.0 - 1e-12)));
  const std::size_t n = static_cast<std::size_t>(n_real);
  const double h = horizon / n_real;
  out.path = GridPath{h, std::vector<double>(n + 1), 0.0};
  auto& vals = out.path.values;
  auto t_of = [h](std::size_t k) { return h * static_cast<double>(k); };

  std::size_t k = 0;
  // Before the first zero: Bessel(3) bridge from |y| to 0 over [0, s].
  if (sk.s > 0.0) {
    const double sign = y < 0.0 ? -1.0 : 1.0;
    std::array<double, 3> w{std::abs(y), 0.0, 0.0};
    double tc = 0.0;
    vals[0] = y;
    for (k = 1; k <= n && t_of(k) < sk.s; ++k) {
      const double tn = t_of(k);
      const double dt = tn - tc;
      const double rem = sk.s - tc;
      const double sd = std::sqrt(dt * (rem - dt) / rem);
      for (double& c : w) c = c * (1.0 - dt / rem) + sd * rng.normal();
      vals[k] = sign * norm3(w);
      tc = tn;
    }
  }
  if (k > n) return out;

  // Between s and g: bridge with prescribed occupation.
  if (t_of(k) <= sk.g) {
    const long steps = std::clamp(static_cast<long>(std::ceil(sk.ell / h)), 2L, kMaxBridgeSteps);
    const std::vector<double> piece = bridge_with_occupation(sk.ell, sk.v, steps, rng);
    const double scale = static_cast<double>(steps) / sk.ell;
    for (; k <= n && t_of(k) <= sk.g; ++k) {
      const double pos = std::clamp((t_of(k) - sk.s) * scale, 0.0, static_cast<double>(steps));
      const std::size_t i = std::min(static_cast<std::size_t>(pos), static_cast<std::size_t>(steps - 1));
      const double frac = pos - static_cast<double>(i);
      vals[k] = piece[i] + frac * (piece[i + 1] - piece[i]);
    }
  }
  if (k > n) return out;

  // After g: Bessel(3) from 0.
  std::array<double, 3> w{0.0, 0.0, 0.0};
  double tc = sk.g;
  for (; k <= n; ++k) {
    const double sd = std::sqrt(t_of(k) - tc);
    for (double& c : w) c += sd * rng.normal();
    vals[k] = norm3(w);
    tc = t_of(k);
  }
  return out;
}

}  // namespace barrier_occ::sampling
