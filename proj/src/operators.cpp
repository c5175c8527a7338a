#include "chs/operators.hpp"

#include <cmath>

#include "chs/errors.hpp"

namespace chs {

SpectralField apply_A_power(const SpectralField& f, double alpha) {
  if (alpha < 0.0 && f.mean() != 0.0) {
    throw DomainError("apply_A_power: negative power on a field with nonzero mean; project with 𝐏 first");
  }
  SpectralField out(f);
  if (alpha == 0.0) return out;
  const auto lambdas = f.spectrum().lambdas();
  out[0] = 0.0;
  for (std::size_t k = 1; k < out.size(); ++k) out[k] *= std::pow(lambdas[k], alpha);
  return out;
}

SpectralField project_mean_free(const SpectralField& f) {
  SpectralField out(f);
  out[0] = 0.0;
  return out;
}

SpectralField project_PN(const SpectralField& f, int cutoff) {
  if (cutoff < 0 || cutoff > f.spectrum().cutoff()) {
    throw ParameterError("project_PN: cutoff must lie in [0, N]");
  }
  SpectralField out(f);
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (f.spectrum().max_component(k) > cutoff) out[k] = 0.0;
  }
  return out;
}

SpectralField semigroup_apply(const SpectralField& f, double t) {
  if (!(t >= 0.0)) throw ParameterError("semigroup_apply: time must be >= 0");
  SpectralField out(f);
  const auto lambdas = f.spectrum().lambdas();
  for (std::size_t k = 1; k < out.size(); ++k) out[k] *= std::exp(-t * (lambdas[k] * lambdas[k]));
  return out;
}

double phi1(double mu, double dt) {
  const double u = dt * mu;
  if (u >= 1e-4) return -std::expm1(-u) / mu;
  // dt (1 - u/2 + u²/6 - u³/24); truncation is below u⁴/120 relative.
  return dt * (1.0 - u / 2.0 * (1.0 - u / 3.0 * (1.0 - u / 4.0)));
}

SpectralField phi1_apply(const SpectralField& f, double dt) {
  if (!(dt > 0.0)) throw ParameterError("phi1_apply: step must be > 0");
  SpectralField out(f);
  const auto lambdas = f.spectrum().lambdas();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= phi1(lambdas[k] * lambdas[k], dt);
  return out;
}

double seminorm_alpha(const SpectralField& f, double alpha) {
  if (alpha < 0.0) throw ParameterError("norm_alpha: alpha must be >= 0");
  const auto lambdas = f.spectrum().lambdas();
  double s = 0.0;
  for (std::size_t k = 1; k < f.size(); ++k) {
    const double w = alpha == 0.0 ? 1.0 : std::pow(lambdas[k], alpha);
    s += w * f[k] * f[k];
  }
  return std::sqrt(s);
}

double norm_alpha(const SpectralField& f, double alpha) {
  const double semi = seminorm_alpha(f, alpha);
  return std::sqrt(semi * semi + f.mean() * f.mean());
}

}  // namespace chs
