#pragma once

#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>

namespace barrier_occ::sampling {

// Deterministic random stream keyed by (seed, stream_id). Two streams built
// from the same pair produce identical draws; different stream ids give
// statistically independent sequences.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double normal();
  // |N| conditioned on |N| > a for a standard normal N.
  double normal_tail(double a);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_;
};

}  // namespace barrier_occ::sampling
