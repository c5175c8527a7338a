#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace chs {

/// Sum in fixed recursive halving order; the result depends only on the
/// input sequence, never on how it was produced.
double pairwise_sum(std::span<const double> values);

struct SampleMoments {
  double mean = 0.0;
  double std_err = 0.0;  ///< sample standard deviation / √n
  std::size_t count = 0;
};

SampleMoments sample_moments(std::span<const double> values);

struct LogLogPoint {
  double h;
  double err;
  double se;
};

struct LogLogFit {
  double slope;
  double intercept;
  /// 95% half-width of the slope from first-order propagation of the
  /// per-point standard errors through the least-squares weights.
  double half_width;
};

/// Least squares on (log h, log err). Throws InsufficientLevelsError for
/// fewer than 3 points and ParameterError for non-positive values or when
/// all h coincide.
LogLogFit fit_loglog(std::span<const LogLogPoint> points);

struct RatePoint {
  int N = 0;
  int K = 0;
  double dt = 0.0;
  double lambda_N = 0.0;
  double error = 0.0;
  double std_err = 0.0;
  bool used_in_fit = false;
};

enum class RateAxis {
  time,   ///< error vs dt
  space,  ///< error vs 1/λ_N
};

struct RateReport {
  std::string kind;
  RateAxis axis = RateAxis::time;
  std::vector<RatePoint> points;
  bool fitted = false;
  double slope = 0.0;
  double half_width = 0.0;
  std::string note;
  std::size_t samples = 0;
  std::size_t excluded = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
};

/// Marks points with error > 3·std_err as usable and fits those. With fewer
/// than three usable points the report is left unfitted with a note.
void fit_rate(RateReport& report);

}  // namespace chs
