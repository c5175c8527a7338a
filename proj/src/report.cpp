#include "chs/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chs/errors.hpp"

namespace chs {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sidecar_path(const std::string& csv_path) {
  return fs::path(csv_path).replace_extension(".json").string();
}

void write_text(const std::string& path, const std::string& text) {
  const fs::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  if (ec) throw IoError("cannot create directory '" + p.parent_path().string() + "': " + ec.message());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s, const std::string& path) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw IoError("'" + path + "': bad number '" + s + "'");
  return v;
}

constexpr const char* kRateHeader = "N,K,dt,lambda_N,error,std_err,used_in_fit";

}  // namespace

void write_rate_report(const RateReport& report, const std::string& csv_path) {
  std::string csv = std::string(kRateHeader) + "\n";
  for (const auto& p : report.points) {
    csv += std::to_string(p.N) + "," + std::to_string(p.K) + "," + format_double(p.dt) + "," +
           format_double(p.lambda_N) + "," + format_double(p.error) + "," + format_double(p.std_err) + "," +
           (p.used_in_fit ? "1" : "0") + "\n";
  }
  write_text(csv_path, csv);

  nlohmann::ordered_json j;
  j["kind"] = report.kind;
  j["axis"] = report.axis == RateAxis::time ? "dt" : "inv_lambda_N";
  j["fitted"] = report.fitted;
  if (report.fitted) {
    j["slope"] = report.slope;
    j["half_width"] = report.half_width;
  } else {
    j["slope"] = nullptr;
    j["half_width"] = nullptr;
  }
  j["note"] = report.note;
  j["samples"] = report.samples;
  j["excluded"] = report.excluded;
  j["seed"] = report.seed;
  j["config_hash"] = report.config_hash;
  write_text(sidecar_path(csv_path), j.dump(2) + "\n");
}

RateReport read_rate_report(const std::string& csv_path) {
  RateReport rep;
  std::stringstream csv(read_text(csv_path));
  std::string line;
  if (!std::getline(csv, line) || line != kRateHeader) throw IoError("'" + csv_path + "': missing rate header");
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 7) throw IoError("'" + csv_path + "': expected 7 columns in '" + line + "'");
    RatePoint p;
    p.N = static_cast<int>(to_double(f[0], csv_path));
    p.K = static_cast<int>(to_double(f[1], csv_path));
    p.dt = to_double(f[2], csv_path);
    p.lambda_N = to_double(f[3], csv_path);
    p.error = to_double(f[4], csv_path);
    p.std_err = to_double(f[5], csv_path);
    p.used_in_fit = f[6] == "1";
    rep.points.push_back(p);
  }
  const std::string side = sidecar_path(csv_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(side));
    rep.kind = j.at("kind").get<std::string>();
    rep.axis = j.at("axis").get<std::string>() == "dt" ? RateAxis::time : RateAxis::space;
    rep.fitted = j.at("fitted").get<bool>();
    if (rep.fitted) {
      rep.slope = j.at("slope").get<double>();
      rep.half_width = j.at("half_width").get<double>();
    }
    rep.note = j.at("note").get<std::string>();
    rep.samples = j.at("samples").get<std::size_t>();
    rep.excluded = j.at("excluded").get<std::size_t>();
    rep.seed = j.at("seed").get<std::uint64_t>();
    rep.config_hash = j.at("config_hash").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("'" + side + "': " + e.what());
  }
  return rep;
}

void write_trajectory(const TrajectoryRecord& record, double dt, const std::string& path) {
  std::string csv = "step,t,mass,energy,norm_gamma\n";
  const std::size_t n = record.norm_series.size();
  for (std::size_t k = 0; k < n; ++k) {
    csv += std::to_string(k) + "," + format_double(static_cast<double>(k) * dt) + "," +
           format_double(record.mass_series[k]) + "," +
           (k < record.energy_series.size() ? format_double(record.energy_series[k]) : std::string()) + "," +
           format_double(record.norm_series[k]) + "\n";
  }
  write_text(path, csv);
}

void write_coefficients(const SpectralField& field, const std::string& path) {
  std::string csv = "index,j1,j2,j3,lambda,coeff\n";
  const auto& spec = field.spectrum();
  for (std::size_t k = 0; k < field.size(); ++k) {
    const MultiIndex j = spec.multi_index(k);
    csv += std::to_string(k) + "," + std::to_string(j[0]) + "," + std::to_string(j[1]) + "," + std::to_string(j[2]) +
           "," + format_double(spec.lambda(k)) + "," + format_double(field[k]) + "\n";
  }
  write_text(path, csv);
}

void write_moment_study(const MomentStudy& study, const std::string& path) {
  std::string csv = "N,K,value,std_err,excluded\n";
  for (const auto& e : study.estimates) {
    csv += std::to_string(e.level.N) + "," + std::to_string(e.level.K) + "," + format_double(e.value) + "," +
           format_double(e.std_err) + "," + std::to_string(e.excluded) + "\n";
  }
  write_text(path, csv);
}

void write_scaling_report(const ScalingReport& report, const std::string& path) {
  std::string csv = "t,mode,du,std_err,ratio,ratio_se\n";
  for (const auto& p : report.points) {
    csv += format_double(p.t) + "," + std::to_string(p.mode) + "," + format_double(p.du) + "," +
           format_double(p.std_err) + "," + format_double(p.ratio) + "," + format_double(p.ratio_se) + "\n";
  }
  write_text(path, csv);
}

}  // namespace chs
