// Experiment driver: chs <subcommand> [config] [--seed S] [--samples n]
// [--out-dir dir] [--threads t] [--set key=value]...

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chs/config.hpp"
#include "chs/harness.hpp"
#include "chs/kolmogorov.hpp"
#include "chs/report.hpp"

namespace {

using namespace chs;

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
};

RunConfig resolve(const Options& opt) {
  RunConfig cfg = opt.config_path.empty() ? RunConfig{} : load_config(opt.config_path);
  for (const auto& kv : opt.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError(ExitCode::usage, "--set expects key=value, got '" + kv + "'");
    set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.samples) cfg.samples = *opt.samples;
  if (opt.out_dir) cfg.out_dir = *opt.out_dir;
  if (opt.threads) cfg.threads = *opt.threads;
  validate_config(cfg);
  return cfg;
}

std::string out_file(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

void write_json(const RunConfig& cfg, const std::string& name, nlohmann::ordered_json j) {
  j["seed"] = cfg.seed;
  j["config_hash"] = config_hash(cfg);
  write_text(out_file(cfg, name), j.dump(2) + "\n");
}

int run_simulate(const RunConfig& cfg, bool energy) {
  SchemeConfig s = make_scheme(cfg);
  s.record_energy = true;
  const TrajectoryRecord rec = run_trajectory(s, cfg.seed, 0);
  const double dt = cfg.K > 0 ? s.dt() : 0.0;
  const std::string stem = energy ? "energy" : "trajectory";
  write_trajectory(rec, dt, out_file(cfg, stem + ".csv"));
  write_coefficients(rec.terminal, out_file(cfg, energy ? "energy_terminal.csv" : "terminal.csv"));
  nlohmann::ordered_json j;
  j["steps_completed"] = rec.steps_completed;
  j["blowup"] = rec.blowup;
  j["blowup_step"] = rec.blowup_step ? nlohmann::json(*rec.blowup_step) : nlohmann::json(nullptr);
  j["sup_norm_gamma"] = rec.sup_norm_gamma;
  write_json(cfg, stem + ".json", j);
  std::printf("%s: %d steps, blowup=%s, sup ||X||_gamma = %.6g\n", stem.c_str(), rec.steps_completed,
              rec.blowup ? "yes" : "no", rec.sup_norm_gamma);
  return 0;
}

int run_rate(const RunConfig& cfg, bool strong, RateAxis axis) {
  const ExperimentPlan plan = make_plan(cfg, axis);
  const CoupledEnsemble ens = run_coupled_ensemble(plan);
  RateReport rep =
      strong ? strong_error(plan, ens, axis) : weak_error(plan, ens, *make_functional(cfg.phi), axis);
  rep.config_hash = config_hash(cfg);
  const std::string name = std::string(strong ? "strong" : "weak") + (axis == RateAxis::time ? "_time" : "_space");
  write_rate_report(rep, out_file(cfg, name + ".csv"));
  for (const auto& p : rep.points) {
    std::printf("N=%d K=%d error=%.6g se=%.3g%s\n", p.N, p.K, p.error, p.std_err, p.used_in_fit ? "" : " (dropped)");
  }
  if (rep.fitted) {
    std::printf("%s slope = %.4f +- %.4f (excluded %zu)\n", rep.kind.c_str(), rep.slope, rep.half_width, rep.excluded);
  } else {
    std::printf("%s: %s\n", rep.kind.c_str(), rep.note.c_str());
  }
  return 0;
}

int run_moments(const RunConfig& cfg) {
  std::vector<Level> levels;
  for (int k : cfg.levels_K) levels.push_back({cfg.N, k});
  for (int n : cfg.levels_N) levels.push_back({n, cfg.K});
  if (levels.empty()) levels.push_back({cfg.N, cfg.K});
  const SchemeConfig base = make_scheme(cfg);
  const MomentStudy study = moment_study(base, levels, cfg.m, cfg.samples, cfg.seed, cfg.threads);
  write_moment_study(study, out_file(cfg, "moments.csv"));
  nlohmann::ordered_json j;
  j["m"] = cfg.m;
  j["relative_spread"] = study.relative_spread;
  write_json(cfg, "moments.json", j);
  for (const auto& e : study.estimates) {
    std::printf("N=%d K=%d E sup ||X||_gamma^m = %.6g (se %.3g)\n", e.level.N, e.level.K, e.value, e.std_err);
  }
  std::printf("relative spread = %.4f\n", study.relative_spread);
  return 0;
}

int run_kolmogorov(const RunConfig& cfg) {
  ScalingPlan plan{make_scheme(cfg), make_functional(cfg.phi), cfg.alpha, cfg.modes, cfg.t_steps,
                   EstimatorOptions{cfg.samples, cfg.seed, cfg.threads}};
  if (plan.modes.empty()) {
    for (int j = 1; j <= cfg.N; j *= 2) plan.modes.push_back(j);
  }
  if (plan.record_steps.empty()) {
    for (int k = 1; k <= cfg.K; k *= 2) plan.record_steps.push_back(k);
  }
  const ScalingReport rep = check_regularity_scaling(plan);
  write_scaling_report(rep, out_file(cfg, "kolmogorov.csv"));
  nlohmann::ordered_json j;
  j["alpha"] = rep.alpha;
  j["fitted"] = rep.fitted;
  j["slope"] = rep.fitted ? nlohmann::json(rep.slope) : nlohmann::json(nullptr);
  j["half_width"] = rep.fitted ? nlohmann::json(rep.half_width) : nlohmann::json(nullptr);
  j["max_ratio"] = rep.max_ratio;
  j["excluded"] = rep.excluded;
  j["valid"] = rep.valid;
  write_json(cfg, "kolmogorov.json", j);
  std::printf("alpha=%.3g max ratio=%.6g slope=%.4f valid=%s\n", rep.alpha, rep.max_ratio, rep.slope,
              rep.valid ? "yes" : "no");
  if (!rep.valid) throw ConfigError(ExitCode::runtime, "more than 1% of trajectories blew up");
  return 0;
}

int fail(ExitCode code, const std::string& message) {
  std::string escaped;
  for (char c : message) escaped += c == '"' ? '\'' : c;
  std::fprintf(stderr, "chs: error code=%d kind=%s message=\"%s\"\n", static_cast<int>(code), exit_code_name(code),
               escaped.c_str());
  return static_cast<int>(code);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic Cahn-Hilliard solver: spectral Galerkin + tamed exponential Euler"};
  app.require_subcommand(1);
  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "one trajectory: trajectory.csv, terminal.csv"},
      {"strong-time", "temporal strong error rate"},
      {"strong-space", "spatial strong error rate"},
      {"weak-time", "temporal weak error rate"},
      {"weak-space", "spatial weak error rate"},
      {"moments", "E sup_k ||X_k||_gamma^m across levels"},
      {"kolmogorov", "regularity scaling of Du(t,x).h"},
      {"energy", "trajectory with the energy functional recorded"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("config", opt.config_path, "key=value config file");
    sub->add_option("--set", opt.overrides, "override a config key, key=value");
    sub->add_option("--seed", opt.seed, "master seed");
    sub->add_option("--samples", opt.samples, "Monte Carlo samples");
    sub->add_option("--out-dir", opt.out_dir, "output directory");
    sub->add_option("--threads", opt.threads, "worker threads");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(ExitCode::usage, e.what());
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = resolve(opt);
    if (cmd == "simulate") return run_simulate(cfg, false);
    if (cmd == "energy") return run_simulate(cfg, true);
    if (cmd == "strong-time") return run_rate(cfg, true, RateAxis::time);
    if (cmd == "strong-space") return run_rate(cfg, true, RateAxis::space);
    if (cmd == "weak-time") return run_rate(cfg, false, RateAxis::time);
    if (cmd == "weak-space") return run_rate(cfg, false, RateAxis::space);
    if (cmd == "moments") return run_moments(cfg);
    return run_kolmogorov(cfg);
  } catch (const ConfigError& e) {
    return fail(e.code(), e.what());
  } catch (const InsufficientLevelsError& e) {
    return fail(ExitCode::insufficient_levels, e.what());
  } catch (const IoError& e) {
    return fail(ExitCode::io, e.what());
  } catch (const Error& e) {
    return fail(ExitCode::invalid_value, e.what());
  } catch (const std::exception& e) {
    return fail(ExitCode::runtime, e.what());
  }
}
