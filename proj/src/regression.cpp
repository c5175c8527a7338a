#include "chs/regression.hpp"

#include <cmath>

#include "chs/errors.hpp"

namespace chs {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

SampleMoments sample_moments(std::span<const double> values) {
  SampleMoments m;
  m.count = values.size();
  if (values.empty()) return m;
  m.mean = pairwise_sum(values) / static_cast<double>(values.size());
  if (values.size() < 2) return m;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - m.mean) * (values[i] - m.mean);
  const double var = pairwise_sum(sq) / static_cast<double>(values.size() - 1);
  m.std_err = std::sqrt(var / static_cast<double>(values.size()));
  return m;
}

LogLogFit fit_loglog(std::span<const LogLogPoint> points) {
  if (points.size() < 3) {
    throw InsufficientLevelsError("fit_loglog: need at least 3 points, got " + std::to_string(points.size()));
  }
  const double n = static_cast<double>(points.size());
  double xbar = 0.0;
  double ybar = 0.0;
  for (const auto& p : points) {
    if (!(p.h > 0.0) || !(p.err > 0.0)) throw ParameterError("fit_loglog: h and err must be positive");
    xbar += std::log(p.h);
    ybar += std::log(p.err);
  }
  xbar /= n;
  ybar /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(p.h) - xbar;
    sxx += dx * dx;
    sxy += dx * (std::log(p.err) - ybar);
  }
  if (sxx < 1e-12 * n) throw ParameterError("fit_loglog: abscissae have no spread");
  const double slope = sxy / sxx;
  // slope = Σ w_i log err_i with w_i = (x_i - x̄)/Sxx; δ log err_i ≈ se_i/err_i.
  double var = 0.0;
  for (const auto& p : points) {
    const double w = (std::log(p.h) - xbar) / sxx;
    const double rel = p.se / p.err;
    var += w * w * rel * rel;
  }
  return {slope, ybar - slope * xbar, 1.96 * std::sqrt(var)};
}

void fit_rate(RateReport& report) {
  std::vector<LogLogPoint> usable;
  for (auto& p : report.points) {
    p.used_in_fit = std::isfinite(p.error) && p.error > 3.0 * p.std_err && p.error > 0.0;
    if (!p.used_in_fit) continue;
    const double h = report.axis == RateAxis::time ? p.dt : 1.0 / p.lambda_N;
    usable.push_back({h, p.error, p.std_err});
  }
  report.fitted = false;
  report.slope = 0.0;
  report.half_width = 0.0;
  if (usable.size() < 3) {
    report.note = "insufficient resolution: " + std::to_string(usable.size()) +
                  " level(s) with error above 3 standard errors";
    return;
  }
  const LogLogFit fit = fit_loglog(usable);
  report.fitted = true;
  report.slope = fit.slope;
  report.half_width = fit.half_width;
}

}  // namespace chs
