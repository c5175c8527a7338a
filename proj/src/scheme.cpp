#include "chs/scheme.hpp"

#include <algorithm>
#include <cmath>

#include "chs/errors.hpp"
#include "chs/nonlinearity.hpp"
#include "chs/operators.hpp"
#include "chs/transform.hpp"

namespace chs {

InitialPreset parse_initial_preset(const std::string& name) {
  if (name == "cos" || name == "cosine") return InitialPreset::cosine;
  if (name == "large") return InitialPreset::large;
  if (name == "zero") return InitialPreset::zero;
  throw ParameterError("unknown initial preset '" + name + "'");
}

std::string to_string(InitialPreset preset) {
  switch (preset) {
    case InitialPreset::cosine:
      return "cos";
    case InitialPreset::large:
      return "large";
    case InitialPreset::zero:
      return "zero";
  }
  return "cos";
}

SpectralField initial_condition(const SpectrumPtr& spectrum, InitialPreset preset) {
  SpectralField x0(spectrum);
  const int d = spectrum->dimension();
  switch (preset) {
    case InitialPreset::cosine: {
      // Π cos(π ξ_i) = Π e_1(ξ_i)/√2.
      const MultiIndex ones{1, d > 1 ? 1 : 0, d > 2 ? 1 : 0};
      x0[spectrum->flat_index(ones)] = 0.25 / std::pow(std::sqrt(2.0), d);
      break;
    }
    case InitialPreset::large:
      x0[spectrum->flat_index({1, 0, 0})] = 10.0;
      break;
    case InitialPreset::zero:
      break;
  }
  return x0;
}

SchemeConfig::SchemeConfig(SpectralField x0_, NoiseModel noise_, double T_, int K_)
    : x0(std::move(x0_)), noise(noise_), T(T_), K(K_) {}

int SchemeConfig::quadrature_points() const { return Mq > 0 ? Mq : 4 * (cutoff() + 1); }

void SchemeConfig::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("scheme: final time T must be > 0");
  if (K < 0) throw ParameterError("scheme: step count K must be >= 0");
  if (K > 0 && dt() * K != T) throw ParameterError("scheme: T/K does not multiply back to T exactly");
  if (noise.dimension() != dimension()) throw ParameterError("scheme: noise and spectrum dimensions differ");
  if (!noise.admissible_gamma(gamma)) {
    throw ParameterError("scheme: gamma must lie in (Gamma0, Gamma) = (" + std::to_string(noise.gamma_floor()) +
                         ", " + std::to_string(noise.gamma_max()) + ")");
  }
  require_dealiased(x0.spectrum(), quadrature_points());
}

SchemeConfig SchemeConfig::at_resolution(int N, int K_new) const {
  SchemeConfig out(*this);
  out.K = K_new;
  if (N != cutoff()) {
    auto target = build_spectrum(dimension(), N);
    out.x0 = N < cutoff() ? restrict_to(x0, target) : embed_into(x0, target);
    if (Mq > 0) out.Mq = Mq / (cutoff() + 1) * (N + 1);
  }
  return out;
}

ExponentialStepper::ExponentialStepper(SpectrumPtr spectrum, double dt, int Mq, Taming taming, Drift drift)
    : spectrum_(std::move(spectrum)), dt_(dt), Mq_(Mq), taming_(taming), drift_(drift) {
  if (!(dt > 0.0)) throw ParameterError("stepper: dt must be > 0");
  if (drift_ == Drift::cubic) require_dealiased(*spectrum_, Mq_);
  const auto lambdas = spectrum_->lambdas();
  decay_.resize(lambdas.size());
  phi1_.resize(lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const double mu = lambdas[k] * lambdas[k];
    decay_[k] = std::exp(-dt * mu);
    phi1_[k] = chs::phi1(mu, dt);
  }
}

SpectralField ExponentialStepper::drift(const SpectralField& x) const {
  SpectralField out(spectrum_);
  if (drift_ == Drift::none) return out;
  const SpectralField pf = to_spectral(eval_F_grid(to_grid(x, Mq_)), spectrum_);
  const double factor = taming_ == Taming::on ? 1.0 / (1.0 + dt_ * norm(pf)) : 1.0;
  const auto lambdas = spectrum_->lambdas();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = -lambdas[k] * pf[k] * factor;
  return out;
}

SpectralField ExponentialStepper::step(const SpectralField& x, const SpectralField& dW) const {
  require_same_spectrum(x, dW, "step");
  const SpectralField g = drift(x);
  SpectralField out(spectrum_);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = decay_[k] * x[k] + phi1_[k] * g[k] + decay_[k] * dW[k];
  }
  return out;
}

SpectralField step_tamed(const SpectralField& x, const SpectralField& dW, double dt, int Mq) {
  return ExponentialStepper(x.spectrum_ptr(), dt, Mq, Taming::on, Drift::cubic).step(x, dW);
}

SpectralField step_untamed(const SpectralField& x, const SpectralField& dW, double dt, int Mq) {
  return ExponentialStepper(x.spectrum_ptr(), dt, Mq, Taming::off, Drift::cubic).step(x, dW);
}

SpectralField interpolate_Xtilde(const SpectralField& x_k, const SpectralField& dW_partial, double dt, double tau,
                                 int Mq, Taming taming, Drift drift) {
  if (!(tau >= 0.0 && tau <= dt)) throw ParameterError("interpolate_Xtilde: t outside [t_k, t_k + dt]");
  require_same_spectrum(x_k, dW_partial, "interpolate_Xtilde");
  const ExponentialStepper stepper(x_k.spectrum_ptr(), dt, Mq, taming, drift);
  const SpectralField g = stepper.drift(x_k);
  const auto lambdas = x_k.spectrum().lambdas();
  SpectralField out(x_k.spectrum_ptr());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double mu = lambdas[k] * lambdas[k];
    const double decay = std::exp(-tau * mu);
    out[k] = decay * x_k[k] + phi1(mu, tau) * g[k] + decay * dW_partial[k];
  }
  return out;
}

namespace {

void record_state(TrajectoryRecord& rec, const SchemeConfig& cfg, const SpectralField& x) {
  const double ng = norm_alpha(x, cfg.gamma);
  rec.norm_series.push_back(ng);
  rec.sup_norm_gamma = std::max(rec.sup_norm_gamma, ng);
  rec.mass_series.push_back(x.mean());
  if (cfg.record_energy) rec.energy_series.push_back(eval_energy(x, std::max(cfg.quadrature_points(), 2 * (cfg.cutoff() + 1))));
}

}  // namespace

TrajectoryRecord run_trajectory(const SchemeConfig& cfg, const IncrementSource& increments) {
  cfg.validate();
  TrajectoryRecord rec;
  rec.terminal = cfg.x0;
  record_state(rec, cfg, rec.terminal);
  if (cfg.K == 0) return rec;
  const ExponentialStepper stepper(cfg.spectrum(), cfg.dt(), cfg.quadrature_points(), cfg.taming, cfg.drift);
  for (int k = 0; k < cfg.K; ++k) {
    SpectralField next = stepper.step(rec.terminal, increments(k));
    if (!next.all_finite()) {
      rec.blowup = true;
      rec.blowup_step = k + 1;
      return rec;
    }
    rec.terminal = std::move(next);
    rec.steps_completed = k + 1;
    record_state(rec, cfg, rec.terminal);
  }
  return rec;
}

TrajectoryRecord run_trajectory(const SchemeConfig& cfg, std::uint64_t seed, std::uint64_t sample) {
  const NoiseSampler sampler(cfg.noise, cfg.spectrum());
  const double dt = cfg.K > 0 ? cfg.dt() : 1.0;
  return run_trajectory(cfg, [&](int k) {
    return sampler.increment(dt, RngStream{seed, sample, static_cast<std::uint64_t>(k)});
  });
}

}  // namespace chs
