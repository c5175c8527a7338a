#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "chs/config.hpp"
#include "chs/report.hpp"

using namespace chs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("chs_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

// Runs the CLI with stdout/stderr captured; returns the exit status.
int run_cli(const std::string& args, const fs::path& dir, std::string* err = nullptr) {
  const std::string cmd = std::string(CHS_CLI_PATH) + " " + args + " > " + (dir / "stdout.txt").string() + " 2> " +
                          (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  if (err) *err = slurp(dir / "stderr.txt");
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExitCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.code();
  }
  return ExitCode::ok;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_config(
      "# comment\n"
      "d = 1\n"
      "\n"
      "N=16   # trailing\n"
      "K = 64\n"
      "T = 0.5\n"
      "noise.kind = white\n"
      "noise.q0_zero = true\n"
      "levels.K = 4, 8,16\n"
      "x0.preset = large\n"
      "seed = 18446744073709551615\n");
  CHECK(cfg.N == 16);
  CHECK(cfg.K == 64);
  CHECK(cfg.T == 0.5);
  CHECK(cfg.noise_kind == "white");
  CHECK(cfg.noise_q0_zero);
  CHECK(cfg.levels_K == std::vector<int>{4, 8, 16});
  CHECK(cfg.x0_preset == "large");
  CHECK(cfg.seed == 18446744073709551615ull);
  CHECK(resolved_gamma(cfg) == 1.25);
  CHECK(resolved_gamma(RunConfig{}) == 1.625);

  CHECK(code_of([] { parse_config("bogus = 1\n"); }) == ExitCode::unknown_key);
  CHECK(code_of([] { parse_config("N = sixteen\n"); }) == ExitCode::invalid_value);
  CHECK(code_of([] { parse_config("N 16\n"); }) == ExitCode::invalid_value);
  CHECK(code_of([] { parse_config("noise.kind = pink\n"); }) == ExitCode::invalid_value);
  CHECK(code_of([] { load_config("/nonexistent/chs.cfg"); }) == ExitCode::io);
}

TEST_CASE("config validation codes") {
  auto check = [](const std::string& text) { return code_of([&] { validate_config(parse_config(text)); }); };
  CHECK(check("") == ExitCode::ok);
  CHECK(check("d = 2\nnoise.kind = white\n") == ExitCode::noise_dimension);
  CHECK(check("d = 2\nnoise.s = 1\n") == ExitCode::noise_dimension);
  CHECK(check("gamma = 1.2\n") == ExitCode::gamma_range);
  CHECK(check("gamma = 1.5\n") == ExitCode::ok);
  CHECK(check("gamma = default\nref.K = default\n") == ExitCode::ok);
  CHECK(check("noise.kind = white\ngamma = 1.5\n") == ExitCode::gamma_range);
  CHECK(check("noise.kind = white\ngamma = 1.4\n") == ExitCode::ok);
  CHECK(check("Mq_factor = 1\n") == ExitCode::invalid_value);
  CHECK(check("levels.K = 0,4,8\n") == ExitCode::level_inconsistency);
  CHECK(check("d = 4\n") != ExitCode::ok);

  auto plan = [](const std::string& text, RateAxis axis) { return code_of([&] { make_plan(parse_config(text), axis); }); };
  CHECK(plan("levels.K = 8,16\n", RateAxis::time) == ExitCode::insufficient_levels);
  CHECK(plan("levels.N = 4,8\n", RateAxis::space) == ExitCode::insufficient_levels);
  CHECK(plan("levels.K = 8,16,24\nref.K = 64\n", RateAxis::time) == ExitCode::level_inconsistency);
  CHECK(plan("levels.K = 8,16,32\nref.N = 64\n", RateAxis::time) == ExitCode::level_inconsistency);
  CHECK(plan("levels.N = 4,8,16\nref.N = 8\n", RateAxis::space) == ExitCode::level_inconsistency);

  const auto t = make_plan(parse_config("N = 8\nlevels.K = 8,16,32\nsamples = 5\n"), RateAxis::time);
  CHECK(t.reference.N == 8);
  CHECK(t.reference.K == 512);
  CHECK(t.samples == 5);
  const auto s = make_plan(parse_config("K = 16\nlevels.N = 2,4,8\n"), RateAxis::space);
  CHECK(s.reference.N == 32);
  CHECK(s.reference.K == 16);
  CHECK(s.base.cutoff() == 32);
}

TEST_CASE("config hash changes iff a result-affecting field changes") {
  const RunConfig base = parse_config("levels.K = 4,8,16\nlevels.N = 2,4,8\nmodes = 1,2\nt_steps = 1,2\n");
  const std::string h = config_hash(base);
  CHECK(h.size() == 16);
  CHECK(config_hash(parse_config(canonical_config(base))) == h);
  const std::vector<std::pair<std::string, std::string>> edits = {
      {"d", "2"},           {"N", "33"},          {"K", "257"},         {"T", "1.0000000000000002"},
      {"noise.kind", "white"}, {"noise.s", "2.5"}, {"noise.q0_zero", "true"}, {"gamma", "1.7"},
      {"Mq_factor", "3"},   {"x0.preset", "zero"}, {"samples", "9999"}, {"levels.N", "2,4"},
      {"levels.K", "4,8,32"}, {"ref.N", "64"},    {"ref.K", "512"},     {"phi", "sin"},
      {"seed", "1"},        {"taming", "off"},    {"drift", "none"},    {"m", "4"},
      {"alpha", "0.5"},     {"modes", "1,3"},     {"t_steps", "1,4"},
  };
  for (const auto& [key, value] : edits) {
    RunConfig c = base;
    set_config_value(c, key, value);
    CHECK_MESSAGE(config_hash(c) != h, key);
  }
  RunConfig c = base;
  set_config_value(c, "threads", "8");
  set_config_value(c, "out_dir", "/tmp/elsewhere");
  CHECK(config_hash(c) == h);
  set_config_value(c, "N", "32");
  CHECK(config_hash(c) == h);
}

TEST_CASE("rate report round trip") {
  const auto dir = scratch("roundtrip");
  RateReport rep;
  rep.kind = "weak-time";
  rep.axis = RateAxis::time;
  rep.fitted = true;
  rep.slope = 1.0 / 3.0;
  rep.half_width = 0.1 + 0.2;
  rep.note = "a \"quoted\", note";
  rep.samples = 10000;
  rep.excluded = 3;
  rep.seed = 18446744073709551615ull;
  rep.config_hash = "0123456789abcdef";
  rep.points = {{16, 4, 0.25, 2526.6187441280147, 1e-300, 4.9406564584124654e-324, true},
                {16, 8, 0.125, std::nextafter(1.0, 2.0), M_PI, std::sqrt(2.0), false}};
  const auto path = (dir / "sub" / "weak_time.csv").string();
  write_rate_report(rep, path);
  CHECK(sidecar_path(path) == (dir / "sub" / "weak_time.json").string());
  const auto back = read_rate_report(path);
  CHECK(back.kind == rep.kind);
  CHECK(back.axis == rep.axis);
  CHECK(back.fitted == rep.fitted);
  CHECK(back.slope == rep.slope);
  CHECK(back.half_width == rep.half_width);
  CHECK(back.note == rep.note);
  CHECK(back.samples == rep.samples);
  CHECK(back.excluded == rep.excluded);
  CHECK(back.seed == rep.seed);
  CHECK(back.config_hash == rep.config_hash);
  REQUIRE(back.points.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back.points[i].N == rep.points[i].N);
    CHECK(back.points[i].K == rep.points[i].K);
    CHECK(back.points[i].dt == rep.points[i].dt);
    CHECK(back.points[i].lambda_N == rep.points[i].lambda_N);
    CHECK(back.points[i].error == rep.points[i].error);
    CHECK(back.points[i].std_err == rep.points[i].std_err);
    CHECK(back.points[i].used_in_fit == rep.points[i].used_in_fit);
  }

  RateReport empty;
  empty.kind = "strong-space";
  empty.axis = RateAxis::space;
  fit_rate(empty);
  const auto epath = (dir / "empty.csv").string();
  write_rate_report(empty, epath);
  CHECK(slurp(epath) == "N,K,dt,lambda_N,error,std_err,used_in_fit\n");
  const auto side = nlohmann::json::parse(slurp(sidecar_path(epath)));
  CHECK(side["fitted"] == false);
  CHECK(side["slope"].is_null());
  CHECK(side["half_width"].is_null());
  CHECK_FALSE(side["note"].get<std::string>().empty());
  const auto eback = read_rate_report(epath);
  CHECK(eback.points.empty());
  CHECK(eback.axis == RateAxis::space);

  spit(dir / "file", "x");
  CHECK_THROWS_AS(write_text((dir / "file" / "a.csv").string(), "x"), IoError);
  CHECK_THROWS_AS(read_rate_report((dir / "missing.csv").string()), IoError);
  spit(dir / "bad.csv", "N,K\n");
  CHECK_THROWS_AS(read_rate_report((dir / "bad.csv").string()), IoError);
}

TEST_CASE("trajectory and coefficient CSVs") {
  const auto dir = scratch("traj");
  TrajectoryRecord rec;
  rec.norm_series = {1.0, 0.5};
  rec.mass_series = {0.0, 0.0};
  write_trajectory(rec, 0.25, (dir / "t.csv").string());
  CHECK(slurp(dir / "t.csv") == "step,t,mass,energy,norm_gamma\n0,0,0,,1\n1,0.25,0,,0.5\n");
  rec.energy_series = {2.0, 1.0 / 3.0};
  write_trajectory(rec, 0.25, (dir / "t.csv").string());
  CHECK(slurp(dir / "t.csv") ==
        "step,t,mass,energy,norm_gamma\n0,0,0,2,1\n1,0.25,0,0.33333333333333331,0.5\n");
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("CLI: outputs, exit codes, determinism") {
  const auto dir = scratch("cli");
  spit(dir / "sim.cfg", "N = 8\nK = 0\nT = 1\n");
  std::string err;
  REQUIRE(run_cli("simulate " + (dir / "sim.cfg").string() + " --out-dir " + (dir / "sim").string(), dir, &err) == 0);
  {
    std::ifstream in(dir / "sim" / "terminal.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "index,j1,j2,j3,lambda,coeff");
    std::vector<double> coeffs;
    while (std::getline(in, line)) coeffs.push_back(std::stod(line.substr(line.rfind(',') + 1)));
    REQUIRE(coeffs.size() == 9);
    for (std::size_t k = 0; k < 9; ++k) CHECK(coeffs[k] == (k == 1 ? 0.25 / std::sqrt(2.0) : 0.0));
  }
  CHECK(slurp(dir / "sim" / "trajectory.csv").find("step,t,mass,energy,norm_gamma\n0,0,") == 0);

  spit(dir / "weak2.cfg", "N = 8\nlevels.K = 4,8\nsamples = 10\n");
  CHECK(run_cli("weak-time " + (dir / "weak2.cfg").string() + " --out-dir " + dir.string(), dir, &err) == 7);
  CHECK(err.find("chs: error code=7 kind=insufficient_levels") == 0);

  const std::string cfg = (dir / "sim.cfg").string();
  CHECK(run_cli("simulate " + cfg + " --set bogus=1", dir, &err) == 3);
  CHECK(err.find("kind=unknown_key") != std::string::npos);
  CHECK(run_cli("simulate " + cfg + " --set d=2 --set noise.kind=white", dir) == 4);
  CHECK(run_cli("simulate " + cfg + " --set gamma=2.5", dir) == 5);
  CHECK(run_cli("strong-time " + cfg + " --set levels.K=3,4,5 --set ref.K=20", dir) == 6);
  CHECK(run_cli("simulate " + (dir / "nope.cfg").string(), dir) == 8);
  CHECK(run_cli("simulate " + cfg + " --set N=x", dir) == 9);
  CHECK(run_cli("simulate " + cfg + " --set N", dir) == 2);
  CHECK(run_cli("frobnicate", dir) == 2);

  spit(dir / "rate.cfg", "N = 8\nT = 0.25\nlevels.K = 2,4,8\nref.K = 32\nsamples = 64\n");
  const std::string rate = (dir / "rate.cfg").string();
  for (const std::string cmd : {"strong-time", "weak-time"}) {
    REQUIRE(run_cli(cmd + " " + rate + " --seed 5 --out-dir " + (dir / "a").string(), dir) == 0);
    REQUIRE(run_cli(cmd + " " + rate + " --seed 5 --threads 3 --out-dir " + (dir / "b").string(), dir) == 0);
    const std::string name = cmd == "strong-time" ? "strong_time" : "weak_time";
    const auto a = slurp(dir / "a" / (name + ".csv"));
    CHECK(a.size() > 50);
    CHECK(a == slurp(dir / "b" / (name + ".csv")));
    CHECK(slurp(dir / "a" / (name + ".json")) == slurp(dir / "b" / (name + ".json")));
    const auto side = nlohmann::json::parse(slurp(dir / "a" / (name + ".json")));
    CHECK(side["seed"] == 5);
    CHECK(side["config_hash"].get<std::string>().size() == 16);
  }
  REQUIRE(run_cli("strong-time " + rate + " --seed 6 --out-dir " + (dir / "c").string(), dir) == 0);
  CHECK(slurp(dir / "a" / "strong_time.csv") != slurp(dir / "c" / "strong_time.csv"));

  spit(dir / "misc.cfg", "N = 8\nK = 16\nT = 0.0625\nsamples = 8\nlevels.K = 8,16\nmodes = 1,2\nt_steps = 1,4,16\n");
  const std::string misc = (dir / "misc.cfg").string();
  CHECK(run_cli("moments " + misc + " --out-dir " + (dir / "m").string(), dir) == 0);
  CHECK(slurp(dir / "m" / "moments.csv").find("N,K,value,std_err,excluded\n8,8,") == 0);
  CHECK(run_cli("kolmogorov " + misc + " --out-dir " + (dir / "k").string(), dir) == 0);
  CHECK(fs::exists(dir / "k" / "kolmogorov.json"));
  CHECK(run_cli("energy " + misc + " --out-dir " + (dir / "e").string(), dir) == 0);
  CHECK(slurp(dir / "e" / "energy.csv").find(",,") == std::string::npos);
  spit(dir / "space.cfg", "N = 8\nK = 4\nT = 0.25\nlevels.N = 2,4,8\nref.N = 16\nsamples = 16\n");
  CHECK(run_cli("strong-space " + (dir / "space.cfg").string() + " --out-dir " + dir.string(), dir) == 0);
  CHECK(run_cli("weak-space " + (dir / "space.cfg").string() + " --out-dir " + dir.string(), dir) == 0);
  CHECK(read_rate_report((dir / "weak_space.csv").string()).points.size() == 3);
  fs::remove_all(dir.parent_path());
}
