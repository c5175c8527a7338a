#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chs/errors.hpp"
#include "chs/harness.hpp"
#include "chs/noise.hpp"
#include "chs/scheme.hpp"

namespace chs {

/// Process exit codes; each configuration failure class has its own.
enum class ExitCode : int {
  ok = 0,
  usage = 2,
  unknown_key = 3,
  noise_dimension = 4,
  gamma_range = 5,
  level_inconsistency = 6,
  insufficient_levels = 7,
  io = 8,
  invalid_value = 9,
  runtime = 10,
};

const char* exit_code_name(ExitCode code);

class ConfigError : public Error {
 public:
  ConfigError(ExitCode code, const std::string& what) : Error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

/// Everything a CLI run needs. Field names mirror the config keys.
struct RunConfig {
  int d = 1;
  int N = 32;
  int K = 256;
  double T = 1.0;
  std::string noise_kind = "trace";  ///< white | trace | none
  double noise_s = 2.0;
  bool noise_q0_zero = false;
  std::optional<double> gamma;  ///< defaults to the midpoint of (Γ₀, Γ)
  int Mq_factor = 4;            ///< M_q = Mq_factor·(N+1)
  std::string x0_preset = "cos";
  std::size_t samples = 10000;
  std::vector<int> levels_N;
  std::vector<int> levels_K;
  std::optional<int> ref_N;
  std::optional<int> ref_K;
  std::string phi = "exp_sq";
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  int threads = 1;
  std::string taming = "on";    ///< on | off
  std::string drift = "cubic";  ///< cubic | none
  double m = 2.0;
  double alpha = 1.0;
  std::vector<int> modes;    ///< kolmogorov directions
  std::vector<int> t_steps;  ///< kolmogorov time grid in steps of T/K
};

/// Sets one key from its textual value. Unknown keys and unparsable values
/// throw ConfigError.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

/// key = value lines; '#' starts a comment; blank lines ignored.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Enforces white ⇒ d = 1, s > d/2, γ ∈ (Γ₀, Γ), Mq_factor ≥ 2 and the
/// remaining range checks, each with its own exit code.
void validate_config(const RunConfig& cfg);

NoiseModel make_noise(const RunConfig& cfg);
double resolved_gamma(const RunConfig& cfg);

/// Scheme at (N, K) with x0 from the preset.
SchemeConfig make_scheme(const RunConfig& cfg, int N, int K);
SchemeConfig make_scheme(const RunConfig& cfg);

/// Temporal plan: levels (N, K_i) for K_i in levels.K, reference
/// (N, ref.K) with ref.K defaulting to 16·max K_i. Spatial plan: levels
/// (N_i, K), reference (ref.N, K) with ref.N defaulting to 4·max N_i.
/// Fewer than 3 levels throws insufficient_levels; non-nesting levels
/// throw level_inconsistency.
ExperimentPlan make_plan(const RunConfig& cfg, RateAxis axis);

/// Sorted key=value lines of every field that affects results, with
/// 17 significant digits. threads and out_dir are left out.
std::string canonical_config(const RunConfig& cfg);

/// FNV-1a 64 of canonical_config, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace chs
