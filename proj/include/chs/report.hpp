#pragma once

#include <string>

#include "chs/harness.hpp"
#include "chs/kolmogorov.hpp"
#include "chs/regression.hpp"
#include "chs/scheme.hpp"

namespace chs {

/// `<stem>.json` next to `<stem>.csv`.
std::string sidecar_path(const std::string& csv_path);

/// CSV with header N,K,dt,lambda_N,error,std_err,used_in_fit and a JSON
/// sidecar holding the fit, seed and config hash. Throws IoError.
void write_rate_report(const RateReport& report, const std::string& csv_path);

/// Inverse of write_rate_report.
RateReport read_rate_report(const std::string& csv_path);

/// CSV with header step,t,mass,energy,norm_gamma; energy is left empty when
/// it was not recorded.
void write_trajectory(const TrajectoryRecord& record, double dt, const std::string& path);

/// CSV with header index,j1,j2,j3,lambda,coeff.
void write_coefficients(const SpectralField& field, const std::string& path);

void write_moment_study(const MomentStudy& study, const std::string& path);

void write_scaling_report(const ScalingReport& report, const std::string& path);

/// Writes `text` to `path`, creating parent directories.
void write_text(const std::string& path, const std::string& text);

/// %.17g
std::string format_double(double v);

}  // namespace chs
