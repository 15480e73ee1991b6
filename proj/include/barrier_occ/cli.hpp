#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "barrier_occ/errors.hpp"

namespace barrier_occ::cli {

enum class Command { cdf_g, cdf_gamma, q, tau_density, sample_x, sample_cbm, validate, figure1 };
enum class Format { csv, json };

std::string to_string(Command c);

// Bad command line or missing command parameters; maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

// --help was given; the message is the help text. Maps to exit code 0.
class HelpRequested : public UsageError {
 public:
  using UsageError::UsageError;
};

struct CliConfig {
  Command command = Command::validate;
  std::optional<double> y;
  double c = 1.0;  // occupation budget
  std::optional<double> t, u, x, z;
  std::optional<long> n;
  std::optional<double> step;
  std::optional<double> T;
  std::uint64_t seed = 7;
  std::string out;  // empty: standard output
  Format format = Format::csv;
  bool record_timing = false;

  // Checks that the command has the parameters it needs.
  void validate() const;
};

inline constexpr double kDemoStep = 1.0 / 256;
inline constexpr int kGridPoints = 400;

/// Fixed evaluation grids: 0 followed by 399 points spaced by a factor
/// 2^(1/20). Occupation levels end at 1; last-zero times end at 2^(99/20).
std::vector<double> gamma_grid();
std::vector<double> g_grid();

/// Fixed-precision, locale-independent number formatting (12 significant
/// digits).
std::string format_number(double v);

/// Parses argv. `seed_env` is the value of BARRIER_OCC_SEED, or null.
CliConfig parse(int argc, const char* const* argv, const char* seed_env);

/// Executes the command. Returns 0 on success, 1 on numerical failure or a
/// failed check.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

/// parse + run with the exit code convention: 2 for usage errors.
int main_entry(int argc, const char* const* argv, const char* seed_env, std::ostream& out,
               std::ostream& err);

}  // namespace barrier_occ::cli
