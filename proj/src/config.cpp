#include "chs/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace chs {

const char* exit_code_name(ExitCode code) {
  switch (code) {
    case ExitCode::ok:
      return "ok";
    case ExitCode::usage:
      return "usage";
    case ExitCode::unknown_key:
      return "unknown_key";
    case ExitCode::noise_dimension:
      return "noise_dimension";
    case ExitCode::gamma_range:
      return "gamma_range";
    case ExitCode::level_inconsistency:
      return "level_inconsistency";
    case ExitCode::insufficient_levels:
      return "insufficient_levels";
    case ExitCode::io:
      return "io";
    case ExitCode::invalid_value:
      return "invalid_value";
    case ExitCode::runtime:
      return "runtime";
  }
  return "runtime";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw ConfigError(ExitCode::invalid_value, "key '" + key + "': cannot parse '" + value + "' as " + expected);
}

template <class Int>
Int parse_int(const std::string& key, const std::string& value) {
  Int out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, value, "an integer");
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  if (value.empty()) bad_value(key, value, "a number");
  char* end = nullptr;
  const double out = std::strtod(value.c_str(), &end);
  if (end != value.c_str() + value.size() || !std::isfinite(out)) bad_value(key, value, "a finite number");
  return out;
}

// "default" clears an optional key; canonical_config writes it for unset ones.
template <class T, class Parse>
std::optional<T> parse_optional(const std::string& key, const std::string& value, Parse parse) {
  if (value == "default") return std::nullopt;
  return parse(key, value);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value, "a boolean");
}

std::vector<int> parse_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_int<int>(key, trim(item)));
  return out;
}

std::string parse_choice(const std::string& key, const std::string& value, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (value == a) return value;
  }
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : "|") + std::string(a);
  bad_value(key, value, list.c_str());
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

struct KeyHandler {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;  // null: excluded from the hash
};

const std::map<std::string, KeyHandler>& handlers() {
  static const std::map<std::string, KeyHandler> table = {
      {"d", {[](RunConfig& c, auto& k, auto& v) { c.d = parse_int<int>(k, v); },
             [](const RunConfig& c) { return std::to_string(c.d); }}},
      {"N", {[](RunConfig& c, auto& k, auto& v) { c.N = parse_int<int>(k, v); },
             [](const RunConfig& c) { return std::to_string(c.N); }}},
      {"K", {[](RunConfig& c, auto& k, auto& v) { c.K = parse_int<int>(k, v); },
             [](const RunConfig& c) { return std::to_string(c.K); }}},
      {"T", {[](RunConfig& c, auto& k, auto& v) { c.T = parse_double(k, v); },
             [](const RunConfig& c) { return fmt(c.T); }}},
      {"noise.kind", {[](RunConfig& c, auto& k, auto& v) { c.noise_kind = parse_choice(k, v, {"white", "trace", "none"}); },
                      [](const RunConfig& c) { return c.noise_kind; }}},
      {"noise.s", {[](RunConfig& c, auto& k, auto& v) { c.noise_s = parse_double(k, v); },
                   [](const RunConfig& c) { return fmt(c.noise_s); }}},
      {"noise.q0_zero", {[](RunConfig& c, auto& k, auto& v) { c.noise_q0_zero = parse_bool(k, v); },
                         [](const RunConfig& c) { return std::string(c.noise_q0_zero ? "true" : "false"); }}},
      {"gamma", {[](RunConfig& c, auto& k, auto& v) { c.gamma = parse_optional<double>(k, v, parse_double); },
                 [](const RunConfig& c) { return c.gamma ? fmt(*c.gamma) : std::string("default"); }}},
      {"Mq_factor", {[](RunConfig& c, auto& k, auto& v) { c.Mq_factor = parse_int<int>(k, v); },
                     [](const RunConfig& c) { return std::to_string(c.Mq_factor); }}},
      {"x0.preset", {[](RunConfig& c, auto& k, auto& v) { c.x0_preset = parse_choice(k, v, {"cos", "large", "zero"}); },
                     [](const RunConfig& c) { return c.x0_preset; }}},
      {"samples", {[](RunConfig& c, auto& k, auto& v) { c.samples = parse_int<std::size_t>(k, v); },
                   [](const RunConfig& c) { return std::to_string(c.samples); }}},
      {"levels.N", {[](RunConfig& c, auto& k, auto& v) { c.levels_N = parse_list(k, v); },
                    [](const RunConfig& c) { return fmt_list(c.levels_N); }}},
      {"levels.K", {[](RunConfig& c, auto& k, auto& v) { c.levels_K = parse_list(k, v); },
                    [](const RunConfig& c) { return fmt_list(c.levels_K); }}},
      {"ref.N", {[](RunConfig& c, auto& k, auto& v) { c.ref_N = parse_optional<int>(k, v, parse_int<int>); },
                 [](const RunConfig& c) { return c.ref_N ? std::to_string(*c.ref_N) : std::string("default"); }}},
      {"ref.K", {[](RunConfig& c, auto& k, auto& v) { c.ref_K = parse_optional<int>(k, v, parse_int<int>); },
                 [](const RunConfig& c) { return c.ref_K ? std::to_string(*c.ref_K) : std::string("default"); }}},
      {"phi", {[](RunConfig& c, auto& k, auto& v) { c.phi = parse_choice(k, v, {"exp_sq", "linear", "sin"}); },
               [](const RunConfig& c) { return c.phi; }}},
      {"seed", {[](RunConfig& c, auto& k, auto& v) { c.seed = parse_int<std::uint64_t>(k, v); },
                [](const RunConfig& c) { return std::to_string(c.seed); }}},
      {"out_dir", {[](RunConfig& c, auto&, auto& v) { c.out_dir = v; }, nullptr}},
      {"threads", {[](RunConfig& c, auto& k, auto& v) { c.threads = parse_int<int>(k, v); }, nullptr}},
      {"taming", {[](RunConfig& c, auto& k, auto& v) { c.taming = parse_choice(k, v, {"on", "off"}); },
                  [](const RunConfig& c) { return c.taming; }}},
      {"drift", {[](RunConfig& c, auto& k, auto& v) { c.drift = parse_choice(k, v, {"cubic", "none"}); },
                 [](const RunConfig& c) { return c.drift; }}},
      {"m", {[](RunConfig& c, auto& k, auto& v) { c.m = parse_double(k, v); },
             [](const RunConfig& c) { return fmt(c.m); }}},
      {"alpha", {[](RunConfig& c, auto& k, auto& v) { c.alpha = parse_double(k, v); },
                 [](const RunConfig& c) { return fmt(c.alpha); }}},
      {"modes", {[](RunConfig& c, auto& k, auto& v) { c.modes = parse_list(k, v); },
                 [](const RunConfig& c) { return fmt_list(c.modes); }}},
      {"t_steps", {[](RunConfig& c, auto& k, auto& v) { c.t_steps = parse_list(k, v); },
                   [](const RunConfig& c) { return fmt_list(c.t_steps); }}},
  };
  return table;
}

}  // namespace

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto& table = handlers();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError(ExitCode::unknown_key, "unknown config key '" + key + "'");
  it->second.set(cfg, key, value);
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(ExitCode::invalid_value, "line " + std::to_string(lineno) + ": expected key = value");
    }
    set_config_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(ExitCode::io, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

NoiseModel make_noise(const RunConfig& cfg) {
  try {
    if (cfg.noise_kind == "white") return NoiseModel::white_noise(cfg.d, cfg.noise_q0_zero);
    if (cfg.noise_kind == "none") return NoiseModel::zero(cfg.d);
    return NoiseModel::trace_class(cfg.d, cfg.noise_s, cfg.noise_q0_zero);
  } catch (const ParameterError& e) {
    throw ConfigError(ExitCode::noise_dimension, e.what());
  }
}

double resolved_gamma(const RunConfig& cfg) {
  if (cfg.gamma) return *cfg.gamma;
  const NoiseModel noise = make_noise(cfg);
  return 0.5 * (noise.gamma_floor() + noise.gamma_max());
}

void validate_config(const RunConfig& cfg) {
  auto invalid = [](const std::string& msg) { throw ConfigError(ExitCode::invalid_value, msg); };
  if (cfg.d < 1 || cfg.d > 3) invalid("d must be 1, 2 or 3");
  if (cfg.N < 1) invalid("N must be >= 1");
  if (cfg.K < 0) invalid("K must be >= 0");
  if (!(cfg.T > 0.0)) invalid("T must be > 0");
  if (cfg.Mq_factor < 2) invalid("Mq_factor must be >= 2 for an alias-free cubic");
  if (cfg.samples == 0) invalid("samples must be > 0");
  if (cfg.threads < 1) invalid("threads must be >= 1");
  if (!(cfg.m >= 1.0)) invalid("m must be >= 1");
  if (!(cfg.alpha >= 0.0 && cfg.alpha < 2.0)) invalid("alpha must lie in [0, 2)");
  const NoiseModel noise = make_noise(cfg);
  const double gamma = resolved_gamma(cfg);
  if (!noise.admissible_gamma(gamma)) {
    throw ConfigError(ExitCode::gamma_range, "gamma = " + fmt(gamma) + " outside (" + fmt(noise.gamma_floor()) + ", " +
                                                 fmt(noise.gamma_max()) + ")");
  }
  if (cfg.K > 0 && cfg.T / cfg.K * cfg.K != cfg.T) invalid("T/K does not multiply back to T exactly");
  for (int n : cfg.levels_N) {
    if (n < 1) throw ConfigError(ExitCode::level_inconsistency, "levels.N entries must be >= 1");
  }
  for (int k : cfg.levels_K) {
    if (k < 1) throw ConfigError(ExitCode::level_inconsistency, "levels.K entries must be >= 1");
  }
}

SchemeConfig make_scheme(const RunConfig& cfg, int N, int K) {
  validate_config(cfg);
  SchemeConfig s(initial_condition(build_spectrum(cfg.d, N), parse_initial_preset(cfg.x0_preset)), make_noise(cfg),
                 cfg.T, K);
  s.gamma = resolved_gamma(cfg);
  s.Mq = cfg.Mq_factor * (N + 1);
  s.taming = cfg.taming == "off" ? Taming::off : Taming::on;
  s.drift = cfg.drift == "none" ? Drift::none : Drift::cubic;
  try {
    s.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(ExitCode::invalid_value, e.what());
  }
  return s;
}

SchemeConfig make_scheme(const RunConfig& cfg) { return make_scheme(cfg, cfg.N, cfg.K); }

ExperimentPlan make_plan(const RunConfig& cfg, RateAxis axis) {
  validate_config(cfg);
  auto inconsistent = [](const std::string& msg) { throw ConfigError(ExitCode::level_inconsistency, msg); };
  std::vector<Level> levels;
  Level ref;
  if (axis == RateAxis::time) {
    if (cfg.levels_K.size() < 3) {
      throw ConfigError(ExitCode::insufficient_levels,
                        "temporal rate needs at least 3 entries in levels.K, got " + std::to_string(cfg.levels_K.size()));
    }
    const int kmax = *std::max_element(cfg.levels_K.begin(), cfg.levels_K.end());
    ref = {cfg.ref_N.value_or(cfg.N), cfg.ref_K.value_or(16 * kmax)};
    if (ref.N != cfg.N) inconsistent("temporal rate: ref.N must equal N");
    for (int k : cfg.levels_K) levels.push_back({cfg.N, k});
  } else {
    if (cfg.levels_N.size() < 3) {
      throw ConfigError(ExitCode::insufficient_levels,
                        "spatial rate needs at least 3 entries in levels.N, got " + std::to_string(cfg.levels_N.size()));
    }
    const int nmax = *std::max_element(cfg.levels_N.begin(), cfg.levels_N.end());
    ref = {cfg.ref_N.value_or(4 * nmax), cfg.ref_K.value_or(cfg.K)};
    if (ref.K != cfg.K) inconsistent("spatial rate: ref.K must equal K");
    if (cfg.K < 1) inconsistent("spatial rate: K must be >= 1");
    for (int n : cfg.levels_N) levels.push_back({n, cfg.K});
  }
  for (const Level& l : levels) {
    if (l.N > ref.N) inconsistent("level N = " + std::to_string(l.N) + " exceeds ref.N = " + std::to_string(ref.N));
    if (ref.K % l.K != 0) {
      inconsistent("level K = " + std::to_string(l.K) + " does not divide ref.K = " + std::to_string(ref.K));
    }
  }
  ExperimentPlan plan(make_scheme(cfg, ref.N, ref.K), std::move(levels), ref);
  plan.samples = cfg.samples;
  plan.seed = cfg.seed;
  plan.threads = cfg.threads;
  plan.m = cfg.m;
  return plan;
}

std::string canonical_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& [key, h] : handlers()) {
    if (h.get) out += key + "=" + h.get(cfg) + "\n";
  }
  return out;
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical_config(cfg)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace chs
