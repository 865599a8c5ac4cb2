#pragma once

// Batch front end: subcommands poles, evolve1, evolve2, audit, tailfit.
// Configuration comes from an optional JSON file plus flag overrides (flags
// win). Exit codes: 0 ok, 2 config error, 3 numerical error, 4 io error.
// Failures emit machine-readable JSON on stderr.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdecay/basis.hpp"
#include "qdecay/csv.hpp"
#include "qdecay/delta_shell.hpp"
#include "qdecay/errors.hpp"
#include "qdecay/single_particle.hpp"
#include "qdecay/spectral_oracle.hpp"
#include "qdecay/tail_fit.hpp"
#include "qdecay/two_particle.hpp"
#include "qdecay/version.hpp"

namespace qdecay::cli {

using nlohmann::json;

struct RunConfig {
  double lambda = 6.0;
  double a = 1.0;
  std::string kind = "box";  // box | factorized | entangled
  int alpha = 1;
  int beta = 2;
  int sign = +1;
  std::optional<double> trunc_tol;
  std::optional<int> trunc_n;
  double t_min = 1e-3;
  double t_max = 1e4;
  int time_points = 400;
  int spatial_points = 64;
  std::string out_dir = ".";
  bool write_curves = true;
  bool write_frames = false;
  int frame_count = 8;
  int threads = 1;

  json to_json() const {
    json j;
    j["potential"] = {{"lambda", lambda}, {"a", a}};
    j["initial"] = {{"kind", kind}, {"alpha", alpha}, {"beta", beta},
                    {"sign", sign}};
    if (trunc_tol)
      j["truncation"] = {{"tol", *trunc_tol}};
    else
      j["truncation"] = {{"n", trunc_n.value_or(100)}};
    j["time_grid"] = {{"t_min", t_min}, {"t_max", t_max},
                      {"points", time_points}};
    j["spatial_grid"] = {{"points", spatial_points}};
    j["outputs"] = {{"directory", out_dir},
                    {"curves", write_curves},
                    {"frames", write_frames},
                    {"frame_count", frame_count}};
    j["threads"] = threads;
    return j;
  }
};

namespace detail {

template <typename T>
void read_field(const json& j, const std::string& section,
                const std::string& field, T& into) {
  if (!j.contains(section)) return;
  const json& s = j.at(section);
  if (!s.contains(field)) return;
  try {
    into = s.at(field).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config field " + section + "." + field + ": " +
                      e.what());
  }
}

inline RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  read_field(j, "potential", "lambda", cfg.lambda);
  read_field(j, "potential", "a", cfg.a);
  read_field(j, "initial", "kind", cfg.kind);
  read_field(j, "initial", "alpha", cfg.alpha);
  read_field(j, "initial", "beta", cfg.beta);
  read_field(j, "initial", "sign", cfg.sign);
  if (j.contains("truncation")) {
    const json& t = j.at("truncation");
    if (t.contains("tol")) cfg.trunc_tol = t.at("tol").get<double>();
    if (t.contains("n")) cfg.trunc_n = t.at("n").get<int>();
  }
  read_field(j, "time_grid", "t_min", cfg.t_min);
  read_field(j, "time_grid", "t_max", cfg.t_max);
  read_field(j, "time_grid", "points", cfg.time_points);
  read_field(j, "spatial_grid", "points", cfg.spatial_points);
  read_field(j, "outputs", "directory", cfg.out_dir);
  read_field(j, "outputs", "curves", cfg.write_curves);
  read_field(j, "outputs", "frames", cfg.write_frames);
  read_field(j, "outputs", "frame_count", cfg.frame_count);
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  return cfg;
}

inline void validate(const RunConfig& cfg) {
  if (!(cfg.lambda > 0.0)) throw ConfigError("potential.lambda must be > 0");
  if (!(cfg.a > 0.0)) throw ConfigError("potential.a must be > 0");
  if (cfg.kind != "box" && cfg.kind != "factorized" && cfg.kind != "entangled")
    throw ConfigError("initial.kind must be box|factorized|entangled");
  if (cfg.alpha < 1) throw ConfigError("initial.alpha must be >= 1");
  if (cfg.kind == "entangled") {
    if (cfg.beta < 1) throw ConfigError("initial.beta must be >= 1");
    if (cfg.sign != 1 && cfg.sign != -1)
      throw ConfigError("initial.sign must be +1 or -1");
    if (cfg.alpha == cfg.beta)
      throw ConfigError(
          "initial: entangled state requires alpha != beta (antisymmetric "
          "state vanishes)");
  }
  if (!(cfg.t_min > 0.0) || !(cfg.t_max > cfg.t_min))
    throw ConfigError("time_grid: need 0 < t_min < t_max");
  if (cfg.time_points < 2) throw ConfigError("time_grid.points must be >= 2");
  if (cfg.spatial_points < 8)
    throw ConfigError("spatial_grid.points must be >= 8");
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  if (cfg.trunc_tol && !(*cfg.trunc_tol > 0.0 && *cfg.trunc_tol < 0.1))
    throw ConfigError("truncation.tol must lie in (0, 0.1)");
  if (cfg.trunc_n && *cfg.trunc_n < 1)
    throw ConfigError("truncation.n must be >= 1");
}

inline std::string resolve_out_dir(const RunConfig& cfg,
                                   const std::string& flag_dir) {
  std::string dir = cfg.out_dir;
  if (const char* env = std::getenv("QDECAY_OUTPUT_DIR"); env && *env)
    dir = env;
  if (!flag_dir.empty()) dir = flag_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir);
  return dir;
}

inline int resolve_truncation(const RunConfig& cfg) {
  if (cfg.trunc_n) return *cfg.trunc_n;
  const ShellPotential pot(cfg.lambda, cfg.a);
  const double tol = cfg.trunc_tol.value_or(1e-3);
  int n = choose_truncation(pot, InitialState::box(cfg.alpha, cfg.a), tol);
  if (cfg.kind == "entangled")
    n = std::max(n, choose_truncation(pot, InitialState::box(cfg.beta, cfg.a),
                                      tol));
  return n;
}

inline SingleParticleEvolution make_single(const RunConfig& cfg) {
  const ShellPotential pot(cfg.lambda, cfg.a);
  return SingleParticleEvolution::make(
      pot, InitialState::box(cfg.alpha, cfg.a), resolve_truncation(cfg));
}

inline TwoBodyState make_two(const RunConfig& cfg) {
  const ShellPotential pot(cfg.lambda, cfg.a);
  const int n = resolve_truncation(cfg);
  if (cfg.kind == "entangled")
    return TwoBodyState::entangled(pot, cfg.alpha, cfg.beta, cfg.sign, n);
  return TwoBodyState::factorized(pot, cfg.alpha, n);
}

inline std::vector<double> frame_times(const RunConfig& cfg) {
  return log_time_grid(cfg.t_min, cfg.t_max, std::max(2, cfg.frame_count));
}

}  // namespace detail

inline int cmd_poles(const RunConfig& cfg, const std::string& out_dir,
                     int n_requested) {
  const ShellPotential pot(cfg.lambda, cfg.a);
  const int n = n_requested > 0 ? n_requested : detail::resolve_truncation(cfg);
  const PoleSet set = find_poles(pot, n);
  write_pole_csv(out_dir + "/poles.csv", set, cfg.to_json());
  std::cout << "wrote " << out_dir << "/poles.csv (" << n << " poles)\n";
  return 0;
}

inline int cmd_evolve1(const RunConfig& cfg, const std::string& out_dir) {
  const auto engine = detail::make_single(cfg);
  const auto times = log_time_grid(cfg.t_min, cfg.t_max, cfg.time_points);
  if (cfg.write_curves) {
    const DecayCurves curves = engine.decay_curves(times, cfg.threads);
    write_curves_csv(out_dir + "/curves.csv", curves, cfg.to_json());
    std::cout << "wrote " << out_dir << "/curves.csv\n";
  }
  if (cfg.write_frames) {
    std::vector<FrameRow> rows;
    const double a = cfg.a;
    for (double t : detail::frame_times(cfg))
      for (int i = 0; i < cfg.spatial_points; ++i) {
        const double r = a * i / cfg.spatial_points;  // [0, a)
        rows.push_back({t, r, engine.evolve(r, t)});
      }
    write_frames_csv(out_dir + "/frames.csv", rows, cfg.to_json());
    std::cout << "wrote " << out_dir << "/frames.csv\n";
  }
  return 0;
}

inline int cmd_evolve2(const RunConfig& cfg, const std::string& out_dir) {
  const TwoBodyState state = detail::make_two(cfg);
  const auto times = log_time_grid(cfg.t_min, cfg.t_max, cfg.time_points);
  if (cfg.write_curves) {
    const DecayCurves curves = state.decay_curves(times, cfg.threads);
    write_curves_csv(out_dir + "/curves2.csv", curves, cfg.to_json());
    std::cout << "wrote " << out_dir << "/curves2.csv\n";
  }
  if (cfg.write_frames) {
    std::vector<FrameRow2> rows;
    const int m = std::min(cfg.spatial_points, 64);
    for (double t : detail::frame_times(cfg))
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const double r1 = cfg.a * i / m, r2 = cfg.a * j / m;
          rows.push_back({t, r1, r2, state.evolve_two(r1, r2, t)});
        }
    write_frames2_csv(out_dir + "/frames2.csv", rows, cfg.to_json());
    std::cout << "wrote " << out_dir << "/frames2.csv\n";
  }
  return 0;
}

inline int cmd_audit(const RunConfig& cfg, const std::string& out_dir) {
  const ShellPotential pot(cfg.lambda, cfg.a);
  const int n = detail::resolve_truncation(cfg);
  const PoleSet set = find_poles(pot, n);
  const auto states = normalize_all(set);

  json report;
  report["engine_version"] = kVersion;
  report["truncation"] = n;

  double max_pole_residual = 0.0, max_norm_residual = 0.0;
  for (const auto& s : states) {
    max_pole_residual = std::max(
        max_pole_residual, std::abs(pole_equation_residual(pot, s.pole.kappa)));
    const cplx k = s.pole.kappa;
    const cplx integral = integrate(
        [&](double r) { const cplx u = s.eval(r); return u * u; }, 0.0, pot.a,
        std::max(64, 2 * n));
    const cplx ua = s.norm_const * std::sin(k * pot.a);
    max_norm_residual = std::max(
        max_norm_residual,
        std::abs(integral + cplx(0, 0.5) * ua * ua / k - 1.0));
  }
  report["max_pole_residual"] = max_pole_residual;
  report["max_normalization_residual"] = max_norm_residual;

  std::vector<int> alphas = {cfg.alpha};
  if (cfg.kind == "entangled") alphas.push_back(cfg.beta);
  for (int al : alphas) {
    const auto coeffs =
        build_coefficients(states, InitialState::box(al, pot.a));
    const double s = coeffs.strength_sum();
    report["strength_sum"][std::to_string(al)] = s;
    report["strength_deficit"][std::to_string(al)] = std::abs(1.0 - s);
    write_coefficient_csv(
        out_dir + "/coefficients_alpha" + std::to_string(al) + ".csv", coeffs,
        cfg.to_json());
  }

  auto out = open_output(out_dir + "/audit.json");
  out << report.dump(2) << "\n";
  std::cout << "wrote " << out_dir << "/audit.json\n";
  return 0;
}

inline int cmd_tailfit(const RunConfig& cfg, const std::string& out_dir) {
  const auto times = log_time_grid(cfg.t_min, cfg.t_max, cfg.time_points);
  DecayCurves curves;
  std::function<std::pair<double, double>(double)> split;
  if (cfg.kind == "box") {
    const auto engine = detail::make_single(cfg);
    curves = engine.decay_curves(times, cfg.threads);
    split = [engine](double t) {
      cplx e = 0.0;
      const auto& cs = engine.coefficients().entries();
      const auto& st = engine.states();
      for (std::size_t i = 0; i < st.size(); ++i) {
        const cplx k = st[i].pole.kappa;
        e += cs[i].C * cs[i].Cbar * std::exp(cplx(0, -1) * k * k * t);
      }
      return std::make_pair(std::abs(e),
                            std::abs(engine.survival_amplitude(t)));
    };
  } else {
    const TwoBodyState state = detail::make_two(cfg);
    curves = state.decay_curves(times, cfg.threads);
    split = [&state](double t) {
      return std::make_pair(std::abs(state.survival_two_exponential(t)),
                            std::abs(state.survival_two(t).first));
    };
  }
  const double t_start =
      detect_post_exponential_start(split, cfg.t_min, cfg.t_max);
  const TailFitResult fit =
      tail_fit(curves.times, curves.survival, 2.0 * t_start, cfg.t_max);

  json report;
  report["window"] = {{"t_lo", 2.0 * t_start}, {"t_hi", cfg.t_max}};
  report["survival_slope"] = fit.slope;
  report["survival_slope_stderr"] = fit.stderr_slope;
  report["points"] = fit.points;
  auto out = open_output(out_dir + "/tailfit.json");
  out << report.dump(2) << "\n";
  std::cout << "wrote " << out_dir << "/tailfit.json (slope " << fit.slope
            << ")\n";
  return 0;
}

inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"qdecay: resonant-state quantum decay engine"};
  app.require_subcommand(1);

  std::string config_path, flag_out_dir;
  RunConfig flags;
  bool has_frames_flag = false;
  int poles_n = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--lambda", flags.lambda, "shell intensity");
    sub->add_option("--a", flags.a, "shell radius");
    sub->add_option("--alpha", flags.alpha, "first box state index");
    sub->add_option("--beta", flags.beta, "second box state index");
    sub->add_option("--sign", flags.sign, "+1 symmetric, -1 antisymmetric");
    sub->add_option("--kind", flags.kind, "box|factorized|entangled");
    sub->add_option("--tol", flags.trunc_tol, "strength-deficit tolerance");
    sub->add_option("--N", flags.trunc_n, "fixed truncation");
    sub->add_option("--tmin", flags.t_min, "time grid start");
    sub->add_option("--tmax", flags.t_max, "time grid end");
    sub->add_option("--points", flags.time_points, "time grid points");
    sub->add_option("--spatial-points", flags.spatial_points,
                    "spatial grid points");
    sub->add_option("--threads", flags.threads, "worker threads");
    sub->add_option("--outdir", flag_out_dir, "output directory");
    sub->add_flag("--frames", has_frames_flag, "also write frame files");
  };

  CLI::App* sub_poles = app.add_subcommand("poles", "pole table CSV");
  add_common(sub_poles);
  sub_poles->add_option("--n", poles_n, "number of poles");
  CLI::App* sub_e1 = app.add_subcommand("evolve1", "single-particle curves");
  add_common(sub_e1);
  CLI::App* sub_e2 = app.add_subcommand("evolve2", "two-particle curves");
  add_common(sub_e2);
  CLI::App* sub_audit = app.add_subcommand("audit", "sum-rule audit JSON");
  add_common(sub_audit);
  CLI::App* sub_tail = app.add_subcommand("tailfit", "tail slope JSON");
  add_common(sub_tail);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << nlohmann::json{
                     {"error",
                      {{"type", "ConfigError"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 2;
  }

  try {
    RunConfig cfg = detail::load_config(config_path);
    // flags win over config file
    auto apply = [&](CLI::App* sub) {
      for (const auto* opt : sub->get_options()) {
        if (opt->count() == 0) continue;
        const std::string name = opt->get_name();
        if (name == "--lambda") cfg.lambda = flags.lambda;
        else if (name == "--a") cfg.a = flags.a;
        else if (name == "--alpha") cfg.alpha = flags.alpha;
        else if (name == "--beta") cfg.beta = flags.beta;
        else if (name == "--sign") cfg.sign = flags.sign;
        else if (name == "--kind") cfg.kind = flags.kind;
        else if (name == "--tol") { cfg.trunc_tol = flags.trunc_tol; cfg.trunc_n.reset(); }
        else if (name == "--N") { cfg.trunc_n = flags.trunc_n; cfg.trunc_tol.reset(); }
        else if (name == "--tmin") cfg.t_min = flags.t_min;
        else if (name == "--tmax") cfg.t_max = flags.t_max;
        else if (name == "--points") cfg.time_points = flags.time_points;
        else if (name == "--spatial-points") cfg.spatial_points = flags.spatial_points;
        else if (name == "--threads") cfg.threads = flags.threads;
        else if (name == "--frames") cfg.write_frames = true;
      }
    };
    for (CLI::App* sub :
         {sub_poles, sub_e1, sub_e2, sub_audit, sub_tail})
      if (sub->parsed()) apply(sub);
    if (sub_e2->parsed() && cfg.kind == "box") cfg.kind = "entangled";
    detail::validate(cfg);
    const std::string out_dir = detail::resolve_out_dir(cfg, flag_out_dir);
    cfg.out_dir = out_dir;

    if (sub_poles->parsed()) return cmd_poles(cfg, out_dir, poles_n);
    if (sub_e1->parsed()) return cmd_evolve1(cfg, out_dir);
    if (sub_e2->parsed()) return cmd_evolve2(cfg, out_dir);
    if (sub_audit->parsed()) return cmd_audit(cfg, out_dir);
    if (sub_tail->parsed()) return cmd_tailfit(cfg, out_dir);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << nlohmann::json{
                     {"error",
                      {{"type", "ConfigError"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 2;
  } catch (const DegenerateState& e) {
    std::cerr << nlohmann::json{
                     {"error",
                      {{"type", "DegenerateState"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << nlohmann::json{
                     {"error", {{"type", "IoError"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 4;
  } catch (const NumericalError& e) {
    std::cerr << nlohmann::json{
                     {"error",
                      {{"type", "NumericalError"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << nlohmann::json{
                     {"error",
                      {{"type", "DomainError"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 3;
  }
}

}  // namespace qdecay::cli
