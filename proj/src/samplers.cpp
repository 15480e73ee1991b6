#include "barrier_occ/samplers.hpp"

#include <array>
#include <cmath>
#include <string>

#include "barrier_occ/errors.hpp"

namespace barrier_occ::sampling {

namespace {

std::size_t steps_for(double T, double step) {
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("path length must be positive");
  if (!(step > 0.0) || !(step <= T * (1.0 + 1e-12))) {
    throw DomainError("step must satisfy 0 < step <= path length");
  }
  const double n = std::ceil(T / step * (1.0 - 1e-12));
  if (n > 1e9) throw DomainError("grid too fine: " + std::to_string(n) + " steps");
  return static_cast<std::size_t>(std::max(1.0, n));
}

// Number of whole steps inside the horizon and the leftover fraction of time.
struct HorizonSplit {
  std::size_t whole;
  double rest;
};

HorizonSplit split_horizon(const GridPath& path, double horizon) {
  path.validate();
  const double dur = path.duration();
  if (!(horizon >= 0.0) || horizon > dur * (1.0 + 1e-12) + 1e-300) {
    throw DomainError("horizon must lie within the path duration");
  }
  const std::size_t n = path.values.size() - 1;
  const double r = horizon / path.step;
  std::size_t whole = static_cast<std::size_t>(std::floor(r + 1e-9));
  if (whole >= n) return {n, 0.0};
  double rest = horizon - static_cast<double>(whole) * path.step;
  if (rest < 1e-12 * path.step) rest = 0.0;
  return {whole, rest};
}

}  // namespace

void GridPath::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("GridPath step must be positive");
  if (values.empty()) throw DomainError("GridPath needs at least one value");
}

GridPath sample_bm(double y, double T, double step, RngStream& rng) {
  const std::size_t n = steps_for(T, step);
  const double h = T / static_cast<double>(n);
  const double sd = std::sqrt(h);
  GridPath path{h, std::vector<double>(n + 1), 0.0};
  path.values[0] = y;
  for (std::size_t k = 0; k < n; ++k) path.values[k + 1] = path.values[k] + sd * rng.normal();
  return path;
}

GridPath sample_bridge(double y, double z, double t, double step, RngStream& rng) {
  const std::size_t n = steps_for(t, step);
  const double h = t / static_cast<double>(n);
  GridPath path{h, std::vector<double>(n + 1), 0.0};
  path.values[0] = y;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double rem = h * static_cast<double>(n - k);
    const double v = path.values[k];
    path.values[k + 1] = v + (z - v) * h / rem + std::sqrt(h * (rem - h) / rem) * rng.normal();
  }
  path.values[n] = z;
  return path;
}

GridPath sample_bessel3(double y, double T, double step, RngStream& rng) {
  if (!(y >= 0.0)) throw DomainError("Bessel(3) start must be non-negative");
  const std::size_t n = steps_for(T, step);
  const double h = T / static_cast<double>(n);
  const double sd = std::sqrt(h);
  GridPath path{h, std::vector<double>(n + 1), 0.0};
  std::array<double, 3> w{y, 0.0, 0.0};
  path.values[0] = y;
  for (std::size_t k = 1; k <= n; ++k) {
    for (double& c : w) c += sd * rng.normal();
    path.values[k] = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
  }
  return path;
}

double segment_below(double v0, double v1, double h) {
  const bool b0 = v0 < 0.0;
  const bool b1 = v1 < 0.0;
  if (b0 && b1) return h;
  if (!b0 && !b1) return 0.0;
  const double frac = v0 / (v0 - v1);  // share of the step before the crossing
  return b0 ? frac * h : (1.0 - frac) * h;
}

double occupation_below_zero(const GridPath& path, double horizon) {
  const auto [whole, rest] = split_horizon(path, horizon);
  const auto& v = path.values;
  double occ = 0.0;
  for (std::size_t k = 0; k < whole; ++k) occ += segment_below(v[k], v[k + 1], path.step);
  if (rest > 0.0) {
    const double end = v[whole] + (v[whole + 1] - v[whole]) * rest / path.step;
    occ += segment_below(v[whole], end, rest);
  }
  return occ;
}

double last_zero(const GridPath& path, double horizon) {
  const auto [whole, rest] = split_horizon(path, horizon);
  const auto& v = path.values;
  const double h = path.step;
  auto crossing = [](double a, double b, double len) -> double {
    if (b == 0.0) return len;
    if (a * b < 0.0) return len * a / (a - b);
    if (a == 0.0) return 0.0;
    return -1.0;
  };
  if (rest > 0.0) {
    const double end = v[whole] + (v[whole + 1] - v[whole]) * rest / h;
    const double c = crossing(v[whole], end, rest);
    if (c >= 0.0) return path.time(whole) + c;
  }
  for (std::size_t k = whole; k-- > 0;) {
    const double c = crossing(v[k], v[k + 1], h);
    if (c >= 0.0) return path.time(k) + c;
  }
  return path.origin_time;
}

RejectionResult sample_conditioned_bm(double y, double T, double step, double budget,
                                      RngStream& rng, long max_attempts) {
  if (!(budget > 0.0) || !(T > budget)) throw DomainError("need T > budget > 0");
  if (max_attempts < 1) throw DomainError("max_attempts must be at least 1");
  const std::size_t n = steps_for(T, step);
  const double h = T / static_cast<double>(n);
  const double sd = std::sqrt(h);
  RejectionResult out;
  out.path = GridPath{h, std::vector<double>(n + 1), 0.0};
  auto& v = out.path.values;
  v[0] = y;
  for (long attempt = 0; attempt < max_attempts; ++attempt) {
    double occ = 0.0;
    std::size_t k = 0;
    for (; k < n; ++k) {
      v[k + 1] = v[k] + sd * rng.normal();
      occ += segment_below(v[k], v[k + 1], h);
      if (occ > budget) break;
    }
    if (k == n) return out;
    ++out.n_rejected;
  }
  throw RejectionBudgetExceeded("no path accepted in " + std::to_string(max_attempts) +
                                " attempts");
}

RejectionResult sample_conditioned_bridge(double y, double x, double step, RngStream& rng,
                                          long max_attempts) {
  if (!(x > 0.0)) throw DomainError("bridge length x must be positive");
  if (max_attempts < 1) throw DomainError("max_attempts must be at least 1");
  const std::size_t n = steps_for(x, step);
  const double rx = std::sqrt(x);
  RejectionResult out;
  for (long attempt = 0; attempt < max_attempts; ++attempt) {
    const GridPath b = sample_bridge(0.0, 0.0, 1.0, 1.0 / static_cast<double>(n), rng);
    GridPath p{x / static_cast<double>(n), std::vector<double>(n + 1), 0.0};
    for (std::size_t k = 0; k <= n; ++k) {
      const double frac = static_cast<double>(k) / static_cast<double>(n);
      p.values[k] = rx * b.values[k] + y * (1.0 - frac);
    }
    p.values[n] = 0.0;
    // a bridge no longer than the budget cannot exceed it
    if (x <= 1.0 || occupation_below_zero(p, x) <= 1.0) {
      out.path = std::move(p);
      return out;
    }
    ++out.n_rejected;
  }
  throw RejectionBudgetExceeded("no bridge accepted in " + std::to_string(max_attempts) +
                                " attempts");
}

}  // namespace barrier_occ::sampling
