#include "barrier_occ/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "barrier_occ/bridge_laws.hpp"
#include "barrier_occ/errors.hpp"
#include "barrier_occ/limit_laws.hpp"
#include "barrier_occ/numerics.hpp"

namespace barrier_occ::validation {

namespace {

using numerics::CdfTable;
using sampling::RngStream;
using sampling::SampleBatch;

// Stream ids keep the independent parts of one experiment apart.
constexpr std::uint64_t kStreamConditioned = 0;
constexpr std::uint64_t kStreamLimit = 1;
constexpr std::uint64_t kStreamSplit = 2;
constexpr std::uint64_t kStreamLevy = 3;

void require_draws(const SampleBatch& b) {
  if (b.draws.empty()) throw EmptyBatch("batch '" + b.label + "' has no draws");
  for (double x : b.draws) {
    if (!std::isfinite(x)) throw DomainError("batch '" + b.label + "' has a non-finite draw");
  }
}

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

// Sup of |A - B| over the points, on both sides of each point.
template <class A, class B>
double sup_both_sides(const std::vector<double>& points, const A& a, const B& b) {
  double d = 0.0;
  for (double x : points) {
    d = std::max(d, std::abs(a(x) - b(x)));
    d = std::max(d, std::abs(a.left_limit(x) - b.left_limit(x)));
  }
  return d;
}

double value_at(const sampling::GridPath& p, double t) {
  const double r = (t - p.origin_time) / p.step;
  const std::size_t k = std::min(static_cast<std::size_t>(std::floor(r)), p.values.size() - 1);
  if (k + 1 >= p.values.size()) return p.values.back();
  const double frac = r - static_cast<double>(k);
  return p.values[k] + frac * (p.values[k + 1] - p.values[k]);
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[k] = lo + (hi - lo) * k / (n - 1);
  return out;
}

std::string y_tag(double y) {
  std::string s = fmt(y);
  std::replace(s.begin(), s.end(), '-', 'm');
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

}  // namespace

ExperimentReport make_report(std::string name, double statistic, double tolerance, long n_samples,
                             std::uint64_t seed) {
  ExperimentReport r;
  r.name = std::move(name);
  r.statistic = statistic;
  r.tolerance = tolerance;
  r.passed = statistic <= tolerance;
  r.n_samples = n_samples;
  r.seed = seed;
  return r;
}

nlohmann::ordered_json to_json(const ExperimentReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["statistic"] = r.statistic;
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed;
  j["n_samples"] = r.n_samples;
  j["runtime_seconds"] = r.runtime_seconds;
  j["seed"] = r.seed;
  return j;
}

nlohmann::ordered_json to_json(const std::vector<ExperimentReport>& rs) {
  auto j = nlohmann::ordered_json::array();
  for (const auto& r : rs) j.push_back(to_json(r));
  return j;
}

CdfTable ecdf(const SampleBatch& batch) {
  require_draws(batch);
  std::vector<double> xs = batch.draws;
  std::sort(xs.begin(), xs.end());
  if (xs.front() < 0.0) throw DomainError("ecdf needs non-negative draws");
  const double n = static_cast<double>(xs.size());
  CdfTable t;
  t.interpolation = numerics::Interpolation::step;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i + 1 < xs.size() && xs[i + 1] == xs[i]) continue;
    t.grid.push_back(xs[i]);
    t.values.push_back(static_cast<double>(i + 1) / n);
  }
  t.atom_at_zero = xs.front() == 0.0 ? t.values.front() : 0.0;
  return t;
}

double ks_distance(const SampleBatch& batch, const ModelCdf& model) {
  require_draws(batch);
  std::vector<double> xs = batch.draws;
  std::sort(xs.begin(), xs.end());
  std::vector<double> distinct;
  std::vector<std::size_t> upto;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i + 1 == xs.size() || xs[i + 1] != xs[i]) {
      distinct.push_back(xs[i]);
      upto.push_back(i + 1);
    }
  }
  const std::vector<double> f = model(distinct);
  if (f.size() != distinct.size()) throw DomainError("model returned the wrong number of values");
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  std::size_t below = 0;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    const double left = distinct[i] == 0.0 ? 0.0 : f[i];
    d = std::max(d, std::abs(left - static_cast<double>(below) / n));
    d = std::max(d, std::abs(f[i] - static_cast<double>(upto[i]) / n));
    below = upto[i];
  }
  return d;
}

double ks_distance(const SampleBatch& batch, const CdfTable& model) {
  return ks_distance(ecdf(batch), model);
}

double ks_distance(const CdfTable& a, const CdfTable& b) {
  a.validate();
  b.validate();
  std::vector<double> points{0.0};
  points.insert(points.end(), a.grid.begin(), a.grid.end());
  points.insert(points.end(), b.grid.begin(), b.grid.end());
  return sup_both_sides(points, a, b);
}

double ks_two_sample(const SampleBatch& a, const SampleBatch& b) {
  require_draws(a);
  require_draws(b);
  std::vector<double> xa = a.draws, xb = b.draws;
  std::sort(xa.begin(), xa.end());
  std::sort(xb.begin(), xb.end());
  const double na = static_cast<double>(xa.size()), nb = static_cast<double>(xb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xa.size() || j < xb.size()) {
    double x;
    if (j == xb.size() || (i < xa.size() && xa[i] <= xb[j])) {
      x = xa[i];
    } else {
      x = xb[j];
    }
    while (i < xa.size() && xa[i] == x) ++i;
    while (j < xb.size() && xb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

ValidationConfig ValidationConfig::from_json(const nlohmann::json& j) {
  ValidationConfig c;
  c.seed = j.at("seed").get<std::uint64_t>();
  c.step = j.at("step").get<double>();
  c.formula_tol = j.at("formula_tol").get<double>();
  c.levy_rel_tol = j.at("levy_rel_tol").get<double>();
  c.first_hit_tol = j.at("first_hit_tol").get<double>();
  c.first_hit_gap = j.at("first_hit_gap").get<double>();
  c.identity_tol = j.at("identity_tol").get<double>();
  c.truncation_tol = j.at("truncation_tol").get<double>();
  c.g_gamma_tol = j.at("g_gamma_tol").get<double>();
  c.split_n = j.at("split_n").get<long>();
  c.split_tol = j.at("split_tol").get<double>();
  c.limit_n = j.at("limit_n").get<long>();
  c.limit_T = j.at("limit_T").get<double>();
  c.limit_tol = j.at("limit_tol").get<double>();
  c.atom_tol = j.at("atom_tol").get<double>();
  c.acceptance_se = j.at("acceptance_se").get<double>();
  c.extreme_tol = j.at("extreme_tol").get<double>();
  return c;
}

nlohmann::ordered_json ValidationConfig::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["step"] = step;
  j["formula_tol"] = formula_tol;
  j["levy_rel_tol"] = levy_rel_tol;
  j["first_hit_tol"] = first_hit_tol;
  j["first_hit_gap"] = first_hit_gap;
  j["identity_tol"] = identity_tol;
  j["truncation_tol"] = truncation_tol;
  j["g_gamma_tol"] = g_gamma_tol;
  j["split_n"] = split_n;
  j["split_tol"] = split_tol;
  j["limit_n"] = limit_n;
  j["limit_T"] = limit_T;
  j["limit_tol"] = limit_tol;
  j["atom_tol"] = atom_tol;
  j["acceptance_se"] = acceptance_se;
  j["extreme_tol"] = extreme_tol;
  return j;
}

LimitProcessRun run_limit_process(double y, double T, long n, double step, std::uint64_t seed,
                                  double tolerance) {
  if (!(T >= 10.0)) throw DomainError("limit process check needs T >= 10");
  if (n < 1) throw DomainError("limit process check needs n >= 1");
  RngStream cond(seed, kStreamConditioned);
  RngStream lim(seed, kStreamLimit);
  SampleBatch g{"g_T", {}, seed, 0}, gamma{"Gamma_T", {}, seed, 0};
  SampleBatch b2{"B_2", {}, seed, 0}, x2{"X_2", {}, seed, 0};
  long atoms = 0;
  for (long i = 0; i < n; ++i) {
    const auto r = sampling::sample_conditioned_bm(y, T, step, 1.0, cond);
    g.n_rejected += r.n_rejected;
    const double gt = sampling::last_zero(r.path, T);
    atoms += gt == 0.0;
    g.draws.push_back(gt);
    gamma.draws.push_back(sampling::occupation_below_zero(r.path, T));
    b2.draws.push_back(value_at(r.path, 2.0));
  }
  for (long i = 0; i < n; ++i) x2.draws.push_back(sampling::sample_X(y, 2.0, step, lim).path.values.back());

  LimitProcessRun run;
  run.ks_g = ks_distance(g, [y](const std::vector<double>& xs) { return limits::g_cdf_values(y, xs); });
  run.ks_gamma =
      ks_distance(gamma, [y](const std::vector<double>& us) { return limits::gamma_cdf_values(y, us); });
  run.ks_marginal = ks_two_sample(b2, x2);
  run.attempts = n + g.n_rejected;
  run.acceptance_rate = static_cast<double>(n) / static_cast<double>(run.attempts);
  run.atom_fraction = static_cast<double>(atoms) / static_cast<double>(n);
  run.report = make_report("limit_process_y" + y_tag(y) + "_T" + fmt(T),
                           std::max({run.ks_g, run.ks_gamma, run.ks_marginal}), tolerance, n, seed);
  return run;
}

ExperimentReport check_limit_process(double y, double T, long n, double step, std::uint64_t seed) {
  return run_limit_process(y, T, n, step, seed).report;
}

ExperimentReport check_g_gamma_split(double y, long n, std::uint64_t seed, double tolerance) {
  if (n < 1000) throw DomainError("g/Gamma split check needs n >= 1000");
  RngStream rng(seed, kStreamSplit);
  std::vector<double> g, sum;
  g.reserve(static_cast<std::size_t>(n));
  sum.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const auto k = sampling::sample_X_skeleton(y, rng);
    if (k.g > 0.0) g.push_back(k.g);
    sum.push_back(k.tau + k.gamma);  // +inf on the atom
  }
  std::sort(g.begin(), g.end());
  std::sort(sum.begin(), sum.end());
  const double nn = static_cast<double>(n);
  double d = 0.0;
  std::size_t i = 0, j = 0;
  for (double u : uniform_grid(0.0, 1.0, 1001)) {
    while (i < g.size() && g[i] <= u) ++i;
    while (j < sum.size() && sum[j] <= u) ++j;
    d = std::max(d, std::abs(2.0 * static_cast<double>(i) / nn - static_cast<double>(j) / nn));
  }
  return make_report("g_gamma_split_y" + y_tag(y), d, tolerance, n, seed);
}

ExtremeStartRun run_extreme_start(Side side, double y, std::uint64_t seed, double tolerance) {
  if (!(std::abs(y) >= 5.0)) throw DomainError("extreme start check needs |y| >= 5");
  ExtremeStartRun run;
  const double y2 = y * y;
  if (side == Side::pos) {
    if (!(y > 0.0)) throw DomainError("positive side needs y > 0");
    const auto s = limits::log_grid(0.01, 100.0, 400);
    const auto f = limits::g_conditional_values(y, s);
    for (std::size_t k = 0; k < s.size(); ++k) {
      run.g_stat = std::max(run.g_stat, std::abs(f[k] - limits::inv_chisq_cdf(s[k])));
    }
    run.report = make_report("extreme_start_pos_y" + y_tag(y), run.g_stat, tolerance, 0, seed);
    return run;
  }
  if (!(y < 0.0)) throw DomainError("negative side needs y < 0");
  // P(y^2 (1 - Gamma) <= u) = P(Gamma >= 1 - u / y^2); Gamma has no atoms for y < 0.
  for (double u : uniform_grid(0.0, 40.0, 401)) {
    const double p = u >= y2 ? 1.0 : limits::gamma_survival(y, 1.0 - u / y2);
    run.gamma_stat = std::max(run.gamma_stat, std::abs(p - limits::exp_half_cdf(u)));
  }
  for (double u : uniform_grid(-40.0, 40.0, 801)) {
    const double p = u >= y2 ? 1.0 : 1.0 - limits::g_cdf(y, 1.0 - u / y2);
    run.g_stat = std::max(run.g_stat, std::abs(p - limits::gprime_cdf(u)));
  }
  run.report = make_report("extreme_start_neg_y" + y_tag(y), std::max(run.gamma_stat, run.g_stat),
                           tolerance, 0, seed);
  return run;
}

ExperimentReport check_extreme_start(Side side, double y, std::uint64_t seed) {
  return run_extreme_start(side, y, seed).report;
}

std::vector<ExperimentReport> formula_agreement(const ValidationConfig& cfg) {
  double d = 0.0;
  long n = 0;
  for (double y : {-2.0, -0.5, 0.5, 2.0}) {
    for (double t : {0.5, 1.0, 2.0, 8.0}) {
      for (double frac : {0.1, 0.5, 0.9}) {
        d = std::max(d, std::abs(bridge::q_integral(y, t, frac * t) - bridge::q_closed(y, t, frac * t)));
        ++n;
      }
    }
  }
  return {make_report("q_formula_agreement", d, cfg.formula_tol, n, cfg.seed)};
}

std::vector<ExperimentReport> levy_case(const ValidationConfig& cfg) {
  RngStream rng(cfg.seed, kStreamLevy);
  double d = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = 0.01 + 100.0 * rng.uniform();
    const double u = t * rng.uniform();
    const double exact = u / t;
    d = std::max(d, std::abs(bridge::q(0.0, t, u) - exact) / exact);
    d = std::max(d, std::abs(bridge::q_closed(0.0, t, u) - exact) / exact);
  }
  return {make_report("q_levy_uniform", d, cfg.levy_rel_tol, 100, cfg.seed)};
}

std::vector<ExperimentReport> first_hit_normalisation(const ValidationConfig& cfg) {
  double d = 0.0;
  for (auto [y, z] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {2.0, -1.0}, {-0.5, 1.5}}) {
    d = std::max(d, std::abs(bridge::first_hit_mass({y, 1.0, z}) - 1.0));
  }
  // For zy > 0 the path may stay on one side, so the mass falls short of one.
  double mass = 0.0;
  for (auto [y, z] : {std::pair{1.0, 1.0}, {-2.0, -3.0}, {0.5, 0.25}}) {
    mass = std::max(mass, bridge::first_hit_mass({y, 1.0, z}));
  }
  return {make_report("first_hit_unit_mass", d, cfg.first_hit_tol, 4, cfg.seed),
          make_report("first_hit_defective_mass", mass - (1.0 - cfg.first_hit_gap), 0.0, 3, cfg.seed)};
}

std::vector<ExperimentReport> integral_identities(const ValidationConfig& cfg) {
  double d = 0.0;
  for (double y : {-2.0, -0.5, 0.5, 2.0}) {
    for (double u : {0.25, 1.0, 4.0}) {
      const auto v = limits::integral_identity_check(y, u);
      d = std::max(d, std::abs(v.lhs - v.rhs));
    }
  }
  return {make_report("integral_identities", d, cfg.identity_tol, 12, cfg.seed)};
}

std::vector<ExperimentReport> tail_truncation(const ValidationConfig& cfg) {
  double d = 0.0;
  for (double y : {-2.0, -0.5, 0.5, 2.0}) {
    const auto tr = limits::g_tail_truncation(y);
    d = std::max(d, 1.0 - limits::g_cdf(y, tr.point));
  }
  return {make_report("g_tail_truncation", d, cfg.truncation_tol, 4, cfg.seed)};
}

std::vector<ExperimentReport> g_gamma_identity(const ValidationConfig& cfg) {
  const auto us = uniform_grid(0.0, 1.0, 201);
  double d = 0.0;
  for (double y : {-2.0, -0.5}) {
    const auto g = limits::g_cdf_values(y, us);
    const auto gm = limits::gamma_cdf_values(y, us);
    for (std::size_t k = 0; k < us.size(); ++k) d = std::max(d, std::abs(2.0 * g[k] - gm[k]));
  }
  return {make_report("g_gamma_identity", d, cfg.g_gamma_tol, 2 * 201, cfg.seed)};
}

std::vector<ExperimentReport> g_gamma_split(const ValidationConfig& cfg) {
  std::vector<ExperimentReport> out;
  for (double y : {-1.0, 0.0, 1.0}) out.push_back(check_g_gamma_split(y, cfg.split_n, cfg.seed, cfg.split_tol));
  return out;
}

std::vector<ExperimentReport> limit_process(const ValidationConfig& cfg) {
  std::vector<ExperimentReport> out;
  for (double y : {-1.0, 0.0, 1.0}) {
    const auto run = run_limit_process(y, cfg.limit_T, cfg.limit_n, cfg.step, cfg.seed, cfg.limit_tol);
    out.push_back(run.report);
    const std::string tag = "limit_process_y" + y_tag(y);
    out.push_back(make_report(tag + "_ks_g", run.ks_g, cfg.limit_tol, cfg.limit_n, cfg.seed));
    out.push_back(make_report(tag + "_ks_gamma", run.ks_gamma, cfg.limit_tol, cfg.limit_n, cfg.seed));
    out.push_back(make_report(tag + "_ks_marginal", run.ks_marginal, cfg.limit_tol, cfg.limit_n, cfg.seed));
    if (y == 1.0) {
      out.push_back(make_report(tag + "_atom", std::abs(run.atom_fraction - limits::g_atom(y)),
                                cfg.atom_tol, cfg.limit_n, cfg.seed));
    }
    if (y == 0.0) {
      // acceptance probability ~ (2 / pi) T^(-1/2); statistic in standard errors
      const double p = 2.0 / numerics::kPi / std::sqrt(cfg.limit_T);
      const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(run.attempts));
      out.push_back(make_report(tag + "_acceptance", std::abs(run.acceptance_rate - p) / se,
                                cfg.acceptance_se, run.attempts, cfg.seed));
    }
  }
  return out;
}

std::vector<ExperimentReport> extreme_start(const ValidationConfig& cfg) {
  std::vector<ExperimentReport> out;
  for (Side side : {Side::neg, Side::pos}) {
    const double sign = side == Side::neg ? -1.0 : 1.0;
    const double y_ref = side == Side::neg ? -15.0 : 30.0;
    const auto ref = check_extreme_start(side, y_ref, cfg.seed);
    out.push_back(make_report(ref.name, ref.statistic, cfg.extreme_tol, 0, cfg.seed));
    // Doubling sweep: each distance must stay below the one before it. A
    // distance between distribution functions never exceeds 1.
    double prev = 1.0;
    for (double a : {5.0, 10.0, 20.0, 40.0}) {
      const auto r = check_extreme_start(side, sign * a, cfg.seed);
      out.push_back(make_report(r.name + "_below_previous", r.statistic, prev, 0, cfg.seed));
      prev = r.statistic;
    }
  }
  return out;
}

std::vector<ExperimentReport> run_suite(const ValidationConfig& cfg, bool record_timing) {
  using Group = std::vector<ExperimentReport> (*)(const ValidationConfig&);
  const Group groups[] = {formula_agreement, levy_case,     first_hit_normalisation,
                          integral_identities, tail_truncation, g_gamma_identity,
                          g_gamma_split,     limit_process, extreme_start};
  std::vector<ExperimentReport> out;
  for (Group group : groups) {
    const auto start = std::chrono::steady_clock::now();
    auto reports = group(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (auto& r : reports) {
      if (record_timing) r.runtime_seconds = secs;
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace barrier_occ::validation
