#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "barrier_occ/rng.hpp"

namespace barrier_occ::sampling {

// A path observed at origin_time + k * step, k = 0 .. values.size() - 1.
struct GridPath {
  double step = 1.0;
  std::vector<double> values;
  double origin_time = 0.0;

  double duration() const { return step * static_cast<double>(values.size() - 1); }
  double time(std::size_t k) const { return origin_time + step * static_cast<double>(k); }
  void validate() const;
};

struct SampleBatch {
  std::string label;
  std::vector<double> draws;
  std::uint64_t seed = 0;
  long n_rejected = 0;
};

inline constexpr long kDefaultMaxAttempts = 1'000'000;

/// The requested step is shrunk to T / ceil(T / step) so the grid ends on T.
GridPath sample_bm(double y, double T, double step, RngStream& rng);
GridPath sample_bridge(double y, double z, double t, double step, RngStream& rng);
/// Norm of a three-dimensional Brownian motion started at (y, 0, 0).
GridPath sample_bessel3(double y, double T, double step, RngStream& rng);

/// Time spent below zero over one linear segment from v0 to v1 of length h.
/// A crossing splits the segment in proportion to the interpolated zero.
double segment_below(double v0, double v1, double h);

/// Occupation below zero of the linearly interpolated path over the first
/// `horizon` time units.
double occupation_below_zero(const GridPath& path, double horizon);

/// Last zero of the interpolated path within the first `horizon` time units,
/// as an absolute time; origin_time if there is none.
double last_zero(const GridPath& path, double horizon);

struct RejectionResult {
  GridPath path;
  long n_rejected = 0;
};

/// Brownian motion from y on [0, T] conditioned on occupation below zero
/// <= budget, by whole-path rejection. Attempts stop early once their
/// running occupation passes the budget.
RejectionResult sample_conditioned_bm(double y, double T, double step, double budget,
                                      RngStream& rng, long max_attempts = kDefaultMaxAttempts);

/// Bridge from y to 0 of length x conditioned on occupation below zero <= 1,
/// built as sqrt(x) b(s / x) + y (1 - s / x) from standard bridges b.
RejectionResult sample_conditioned_bridge(double y, double x, double step, RngStream& rng,
                                          long max_attempts = kDefaultMaxAttempts);

/// Joint draw of the quantities that determine the limit process: the first
/// zero s of its pre-g bridge, the length ell of the part after it, and the
/// occupation v of that part. g = s + ell.
struct XSkeleton {
  bool atom = false;  // y > 0 and the process never reaches zero
  double s = 0.0;
  double ell = 0.0;
  double v = 0.0;
  double g = 0.0;
  double tau = 0.0;  // first time at or below zero; +inf on the atom
  double gamma = 0.0;
};

XSkeleton sample_X_skeleton(double y, RngStream& rng);

struct XSample {
  GridPath path;
  double g = 0.0;
  double tau = 0.0;
  double gamma = 0.0;
};

/// One path of the limit process on [0, horizon]. g, tau and gamma are exact
/// (not read off the grid).
XSample sample_X(double y, double horizon, double step, RngStream& rng);

/// Largest number of grid steps used for the post-zero bridge piece.
inline constexpr long kMaxBridgeSteps = 1L << 20;

}  // namespace barrier_occ::sampling
