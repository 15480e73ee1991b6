#include "barrier_occ/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "barrier_occ/bridge_laws.hpp"
#include "barrier_occ/limit_laws.hpp"
#include "barrier_occ/samplers.hpp"
#include "barrier_occ/validation.hpp"

namespace barrier_occ::cli {

namespace {

using Json = nlohmann::ordered_json;

const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> names{
      {"cdf-g", Command::cdf_g},         {"cdf-gamma", Command::cdf_gamma},
      {"q", Command::q},                 {"tau-density", Command::tau_density},
      {"sample-x", Command::sample_x},   {"sample-cbm", Command::sample_cbm},
      {"validate", Command::validate},   {"figure1", Command::figure1}};
  return names;
}

double need(const std::optional<double>& v, const char* flag, Command c) {
  if (!v) throw UsageError(to_string(c) + " needs " + flag);
  return *v;
}

std::uint64_t parse_seed(const std::string& text, const char* what) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end || text.empty()) {
    throw UsageError(std::string(what) + " is not a non-negative 64-bit integer: '" + text + "'");
  }
  return v;
}

// Writes to the file named by `path`, or to `fallback` when path is empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << format_number(columns[i][r]);
    os << '\n';
  }
}

// Fixed unit-budget grid scaled to budget c, with the law evaluated at y / sqrt(c).
struct Curve {
  std::vector<double> x;
  std::vector<double> cdf;
};

// A single point replaces the fixed grid when --x is given.
std::vector<double> unit_grid(const std::optional<double>& x, double c, std::vector<double> fixed) {
  if (!x) return fixed;
  if (!(*x >= 0.0)) throw UsageError("--x must be non-negative");
  return {*x / c};
}

Curve g_curve(double y, double c, const std::optional<double>& x = std::nullopt) {
  const auto unit = limits::reduce_to_unit_budget({y, c});
  const auto grid = unit_grid(x, unit.time_scale, g_grid());
  Curve out{grid, limits::g_cdf_values(unit.y_eff, grid)};
  for (double& v : out.x) v *= unit.time_scale;
  return out;
}

Curve gamma_curve(double y, double c, const std::optional<double>& x = std::nullopt) {
  const auto unit = limits::reduce_to_unit_budget({y, c});
  const auto grid = unit_grid(x, unit.time_scale, gamma_grid());
  if (grid.back() > 1.0) throw UsageError("--x must not exceed the budget --c");
  Curve out{grid, limits::gamma_cdf_values(unit.y_eff, grid)};
  for (double& v : out.x) v *= unit.time_scale;
  return out;
}

void write_curve(const CliConfig& cfg, const char* law, const Curve& curve, std::ostream& os) {
  if (cfg.format == Format::csv) {
    write_csv(os, {"x", "cdf"}, {curve.x, curve.cdf});
    return;
  }
  Json j;
  j["law"] = law;
  j["y"] = *cfg.y;
  j["c"] = cfg.c;
  j["x"] = curve.x;
  j["cdf"] = curve.cdf;
  os << j.dump(2) << '\n';
}

std::string indexed_path(const std::string& out, long k, long n) {
  if (n == 1) return out;
  const std::filesystem::path p(out);
  return (p.parent_path() / (p.stem().string() + "_" + std::to_string(k) + p.extension().string())).string();
}

std::string sidecar_path(const std::string& out) {
  return std::filesystem::path(out).replace_extension(".json").string();
}

void write_sidecar(const std::string& out, const Json& side) {
  Sink sink(sidecar_path(out), std::cout);
  *sink << side.dump(2) << '\n';
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void write_path_csv(const std::string& file, const sampling::GridPath& p, double time_scale, double space_scale) {
  Sink sink(file, std::cout);
  std::vector<double> t(p.values.size()), v(p.values.size());
  for (std::size_t k = 0; k < p.values.size(); ++k) {
    t[k] = p.time(k) * time_scale;
    v[k] = p.values[k] * space_scale;
  }
  write_csv(*sink, {"t", "value"}, {t, v});
}

int run_sample_x(const CliConfig& cfg, std::ostream& out) {
  const auto unit = limits::reduce_to_unit_budget({*cfg.y, cfg.c});
  const double c = unit.time_scale, rc = std::sqrt(c);
  const long n = cfg.n.value_or(1);
  const double step = cfg.step.value_or(kDemoStep);
  Json side = Json::array();
  for (long k = 0; k < n; ++k) {
    sampling::RngStream rng(cfg.seed, static_cast<std::uint64_t>(k));
    const auto x = sampling::sample_X(unit.y_eff, *cfg.T / c, step / c, rng);
    const std::string file = indexed_path(cfg.out, k, n);
    write_path_csv(file, x.path, c, rc);
    Json e;
    e["path"] = file;
    e["seed"] = cfg.seed;
    e["stream_id"] = k;
    e["g"] = x.g * c;
    e["tau"] = finite_or_null(x.tau * c);  // null: the path never reaches zero
    e["gamma"] = x.gamma * c;
    side.push_back(e);
  }
  write_sidecar(cfg.out, side);
  out << "wrote " << n << " path(s) and " << sidecar_path(cfg.out) << '\n';
  return 0;
}

int run_sample_cbm(const CliConfig& cfg, std::ostream& out) {
  const auto unit = limits::reduce_to_unit_budget({*cfg.y, cfg.c});
  const double c = unit.time_scale, rc = std::sqrt(c);
  const long n = cfg.n.value_or(1);
  const double step = cfg.step.value_or(kDemoStep);
  const double T = *cfg.T / c;
  Json side = Json::array();
  for (long k = 0; k < n; ++k) {
    sampling::RngStream rng(cfg.seed, static_cast<std::uint64_t>(k));
    const auto r = sampling::sample_conditioned_bm(unit.y_eff, T, step / c, 1.0, rng);
    const std::string file = indexed_path(cfg.out, k, n);
    write_path_csv(file, r.path, c, rc);
    Json e;
    e["path"] = file;
    e["seed"] = cfg.seed;
    e["stream_id"] = k;
    e["g_T"] = sampling::last_zero(r.path, T) * c;
    e["Gamma_T"] = sampling::occupation_below_zero(r.path, T) * c;
    e["n_rejected"] = r.n_rejected;
    side.push_back(e);
  }
  write_sidecar(cfg.out, side);
  out << "wrote " << n << " path(s) and " << sidecar_path(cfg.out) << '\n';
  return 0;
}

int run_validate(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  validation::ValidationConfig vc;
  vc.seed = cfg.seed;
  if (cfg.n) {
    vc.split_n = std::max(*cfg.n, 1000L);
    vc.limit_n = *cfg.n;
  }
  if (cfg.step) vc.step = *cfg.step;
  const auto reports = validation::run_suite(vc, cfg.record_timing);
  Sink sink(cfg.out, out);
  *sink << validation::to_json(reports).dump(2) << '\n';
  int code = 0;
  for (const auto& r : reports) {
    if (!r.passed) {
      err << "FAILED " << validation::to_json(r).dump() << '\n';
      code = 1;
    }
  }
  return code;
}

int run_figure1(const CliConfig& cfg, std::ostream& out) {
  Sink sink(cfg.out, out);
  const double ys[] = {-2.0, -1.0, 0.0, 1.0, 2.0};
  if (cfg.format == Format::csv) {
    *sink << "law,y,x,cdf\n";
    for (const char* law : {"g", "gamma"}) {
      for (double y : ys) {
        const Curve curve = std::string(law) == "g" ? g_curve(y, cfg.c) : gamma_curve(y, cfg.c);
        for (std::size_t k = 0; k < curve.x.size(); ++k) {
          *sink << law << ',' << format_number(y) << ',' << format_number(curve.x[k]) << ','
                << format_number(curve.cdf[k]) << '\n';
        }
      }
    }
    return 0;
  }
  Json j = Json::array();
  for (const char* law : {"g", "gamma"}) {
    for (double y : ys) {
      const Curve curve = std::string(law) == "g" ? g_curve(y, cfg.c) : gamma_curve(y, cfg.c);
      j.push_back(Json{{"law", law}, {"y", y}, {"c", cfg.c}, {"x", curve.x}, {"cdf", curve.cdf}});
    }
  }
  *sink << j.dump(2) << '\n';
  return 0;
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [name, cmd] : command_names()) {
    if (cmd == c) return name;
  }
  return "unknown";
}

std::vector<double> gamma_grid() {
  std::vector<double> g{0.0};
  for (int k = 1; k < kGridPoints; ++k) g.push_back(std::exp2(-(kGridPoints - 1 - k) / 20.0));
  return g;
}

std::vector<double> g_grid() {
  std::vector<double> g{0.0};
  for (int k = 1; k < kGridPoints; ++k) g.push_back(std::exp2((k - 300) / 20.0));
  return g;
}

std::string format_number(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf, p);
}

void CliConfig::validate() const {
  auto positive = [](const std::optional<double>& v, const char* flag) {
    if (v && !(*v > 0.0 && std::isfinite(*v))) throw UsageError(std::string(flag) + " must be positive");
  };
  if (!(c > 0.0) || !std::isfinite(c)) throw UsageError("--c must be positive");
  positive(step, "--step");
  positive(T, "--T");
  positive(t, "--t");
  if (n && *n < 1) throw UsageError("--n must be at least 1");
  if (y && !std::isfinite(*y)) throw UsageError("--y must be finite");
  switch (command) {
    case Command::cdf_g:
    case Command::cdf_gamma:
      need(y, "--y", command);
      break;
    case Command::q:
      need(y, "--y", command);
      need(t, "--t", command);
      if (!(need(u, "--u", command) >= 0.0)) throw UsageError("--u must be non-negative");
      break;
    case Command::tau_density:
      if (need(y, "--y", command) == 0.0) throw UsageError("tau-density needs --y != 0");
      need(t, "--t", command);
      break;
    case Command::sample_x:
    case Command::sample_cbm:
      need(y, "--y", command);
      need(T, "--T", command);
      if (out.empty()) throw UsageError(to_string(command) + " needs --out");
      if (command == Command::sample_cbm && !(*T > c)) throw UsageError("sample-cbm needs --T > --c");
      break;
    case Command::validate:
    case Command::figure1:
      break;
  }
}

CliConfig parse(int argc, const char* const* argv, const char* seed_env) {
  CliConfig cfg;
  CLI::App app{"Laws, samplers and checks for Brownian motion with bounded time below zero",
               "barrier-occ"};
  std::string command, format = "csv";
  std::optional<std::string> seed;
  app.add_option("command", command, "cdf-g, cdf-gamma, q, tau-density, sample-x, sample-cbm, validate, figure1")
      ->required();
  app.add_option("--y", cfg.y, "Starting point");
  app.add_option("--c", cfg.c, "Occupation budget (default 1)");
  app.add_option("--t", cfg.t, "Bridge length");
  app.add_option("--u", cfg.u, "Occupation level");
  app.add_option("--x", cfg.x, "Single evaluation point for cdf-g / cdf-gamma");
  app.add_option("--z", cfg.z, "Bridge end point (tau-density, default 0)");
  app.add_option("--n", cfg.n, "Number of paths / samples");
  app.add_option("--step", cfg.step, "Grid step");
  app.add_option("--T", cfg.T, "Horizon");
  app.add_option("--seed", seed, "Random seed (fallback: BARRIER_OCC_SEED, then 7)");
  app.add_option("--out", cfg.out, "Output file (default: standard output)");
  app.add_option("--format", format, "csv or json");
  app.add_flag("--record-timing", cfg.record_timing, "Fill runtime_seconds in validation reports");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  const auto it = command_names().find(command);
  if (it == command_names().end()) throw UsageError("unknown command '" + command + "'");
  cfg.command = it->second;
  if (format == "csv") {
    cfg.format = Format::csv;
  } else if (format == "json") {
    cfg.format = Format::json;
  } else {
    throw UsageError("--format must be csv or json");
  }
  if (seed) {
    cfg.seed = parse_seed(*seed, "--seed");
  } else if (seed_env != nullptr && *seed_env != '\0') {
    cfg.seed = parse_seed(seed_env, "BARRIER_OCC_SEED");
  }
  cfg.validate();
  return cfg;
}

int run(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  switch (cfg.command) {
    case Command::cdf_g: {
      Sink sink(cfg.out, out);
      write_curve(cfg, "g", g_curve(*cfg.y, cfg.c, cfg.x), *sink);
      return 0;
    }
    case Command::cdf_gamma: {
      Sink sink(cfg.out, out);
      write_curve(cfg, "gamma", gamma_curve(*cfg.y, cfg.c, cfg.x), *sink);
      return 0;
    }
    case Command::q: {
      const double y = *cfg.y, t = *cfg.t, u = *cfg.u;
      const double a = bridge::q_integral(y, t, u);
      const double b = bridge::q_closed(y, t, u);
      Sink sink(cfg.out, out);
      if (cfg.format == Format::csv) {
        write_csv(*sink, {"y", "t", "u", "q_integral", "q_closed", "difference"},
                  {{y}, {t}, {u}, {a}, {b}, {a - b}});
      } else {
        *sink << Json{{"y", y}, {"t", t}, {"u", u}, {"q_integral", a}, {"q_closed", b}, {"difference", a - b}}
                     .dump(2)
              << '\n';
      }
      return 0;
    }
    case Command::tau_density: {
      const bridge::BridgeSpec spec{*cfg.y, *cfg.t, cfg.z.value_or(0.0)};
      std::vector<double> s, d;
      for (int k = 0; k < kGridPoints; ++k) {
        s.push_back(spec.t * (k + 0.5) / kGridPoints);
        d.push_back(bridge::first_hit_density(spec, s.back()));
      }
      Sink sink(cfg.out, out);
      if (cfg.format == Format::csv) {
        write_csv(*sink, {"s", "density"}, {s, d});
      } else {
        *sink << Json{{"y", spec.y}, {"t", spec.t}, {"z", spec.z}, {"s", s}, {"density", d}}.dump(2) << '\n';
      }
      return 0;
    }
    case Command::sample_x:
      return run_sample_x(cfg, out);
    case Command::sample_cbm:
      return run_sample_cbm(cfg, out);
    case Command::validate:
      return run_validate(cfg, out, err);
    case Command::figure1:
      return run_figure1(cfg, out);
  }
  return 1;
}

int main_entry(int argc, const char* const* argv, const char* seed_env, std::ostream& out,
               std::ostream& err) {
  CliConfig cfg;
  try {
    cfg = parse(argc, argv, seed_env);
  } catch (const HelpRequested& e) {
    out << e.what();
    return 0;
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return 2;
  }
  try {
    return run(cfg, out, err);
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "numerical failure in " << to_string(cfg.command) << ": " << e.what() << '\n';
    return 1;
  }
}

}  // namespace barrier_occ::cli
