#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "barrier_occ/cdf_table.hpp"
#include "barrier_occ/samplers.hpp"

namespace barrier_occ::validation {

struct ExperimentReport {
  std::string name;
  double statistic = 0.0;
  double tolerance = 0.0;
  bool passed = false;  // statistic <= tolerance
  long n_samples = 0;
  double runtime_seconds = 0.0;
  std::uint64_t seed = 0;
};

ExperimentReport make_report(std::string name, double statistic, double tolerance, long n_samples,
                             std::uint64_t seed);
nlohmann::ordered_json to_json(const ExperimentReport& r);
nlohmann::ordered_json to_json(const std::vector<ExperimentReport>& rs);

/// Distribution function evaluated at non-decreasing points. Taken to be
/// continuous except for a possible atom at zero.
using ModelCdf = std::function<std::vector<double>(const std::vector<double>&)>;

/// Right-continuous step table of the draws, which must be non-negative.
numerics::CdfTable ecdf(const sampling::SampleBatch& batch);

/// sup |F_n - F|, checked on both sides of every jump.
double ks_distance(const sampling::SampleBatch& batch, const ModelCdf& model);
double ks_distance(const sampling::SampleBatch& batch, const numerics::CdfTable& model);
double ks_distance(const numerics::CdfTable& a, const numerics::CdfTable& b);
/// Two-sample statistic for draws of any sign.
double ks_two_sample(const sampling::SampleBatch& a, const sampling::SampleBatch& b);

/// Sample sizes, step sizes and frozen tolerances of the validation suite.
/// The same numbers live in config/validation.json.
struct ValidationConfig {
  std::uint64_t seed = 7;
  double step = 1.0 / 1024;
  double formula_tol = 1e-6;
  double levy_rel_tol = 4.0 * 2.220446049250313e-16;
  double first_hit_tol = 1e-8;
  double first_hit_gap = 1e-3;
  double identity_tol = 1e-6;
  double truncation_tol = 1e-4;
  double g_gamma_tol = 1e-6;
  long split_n = 100000;
  double split_tol = 0.02;
  long limit_n = 10000;
  double limit_T = 50.0;
  double limit_tol = 0.05;
  double atom_tol = 0.03;
  double acceptance_se = 3.0;
  double extreme_tol = 0.02;

  static ValidationConfig from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;
};

/// Pre-limit check: n accepted conditioned paths on [0, T] against the limit
/// laws of g and Gamma, and the value at time 2 against the limit process.
struct LimitProcessRun {
  ExperimentReport report;  // statistic = max of the three distances below
  double ks_g = 0.0;
  double ks_gamma = 0.0;
  double ks_marginal = 0.0;  // two-sample, at time 2
  double atom_fraction = 0.0;  // share of accepted paths with g_T = 0
  double acceptance_rate = 0.0;
  long attempts = 0;
};

LimitProcessRun run_limit_process(double y, double T, long n, double step, std::uint64_t seed,
                                  double tolerance = 0.05);
ExperimentReport check_limit_process(double y, double T, long n, double step, std::uint64_t seed);

/// Max over a grid of u in [0, 1] of |2 P(0 < g <= u) - P(tau + Gamma <= u)|,
/// both estimated from the same n draws of the limit process.
ExperimentReport check_g_gamma_split(double y, long n, std::uint64_t seed, double tolerance = 0.02);

enum class Side { pos, neg };

struct ExtremeStartRun {
  ExperimentReport report;
  double gamma_stat = 0.0;  // neg: y^2 (1 - Gamma) against Exp(1/2)
  double g_stat = 0.0;      // neg: y^2 (1 - g) against gprime; pos: g / y^2 given g > 0
};

/// Deterministic distance between the laws at start y and their limits as
/// |y| grows. No sampling; seed is only recorded.
ExtremeStartRun run_extreme_start(Side side, double y, std::uint64_t seed, double tolerance = 0.02);
ExperimentReport check_extreme_start(Side side, double y, std::uint64_t seed);

/// Groups of related checks in suite order; each returns the reports that
/// decide it.
std::vector<ExperimentReport> formula_agreement(const ValidationConfig& cfg);
std::vector<ExperimentReport> levy_case(const ValidationConfig& cfg);
std::vector<ExperimentReport> first_hit_normalisation(const ValidationConfig& cfg);
std::vector<ExperimentReport> integral_identities(const ValidationConfig& cfg);
std::vector<ExperimentReport> tail_truncation(const ValidationConfig& cfg);
std::vector<ExperimentReport> g_gamma_identity(const ValidationConfig& cfg);
std::vector<ExperimentReport> g_gamma_split(const ValidationConfig& cfg);
std::vector<ExperimentReport> limit_process(const ValidationConfig& cfg);
std::vector<ExperimentReport> extreme_start(const ValidationConfig& cfg);

/// Runs every group in order. runtime_seconds is filled only when
/// record_timing is set, so that reports are byte-reproducible by default.
std::vector<ExperimentReport> run_suite(const ValidationConfig& cfg, bool record_timing = false);

}  // namespace barrier_occ::validation
