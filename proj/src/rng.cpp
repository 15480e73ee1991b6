#include "barrier_occ/rng.hpp"

#include <cmath>

namespace barrier_occ::sampling {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

double RngStream::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() { return normal_(engine_); }

double RngStream::normal_tail(double a) {
  if (a < 1.0) {
    for (;;) {
      const double n = std::abs(normal());
      if (n > a) return n;
    }
  }
  // Marsaglia's exponential proposal for the normal tail.
  for (;;) {
    const double x = -std::log(uniform()) / a;
    const double e = -std::log(uniform());
    if (2.0 * e > x * x) return a + x;
  }
}

}  // namespace barrier_occ::sampling
