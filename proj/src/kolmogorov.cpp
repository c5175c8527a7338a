#include "chs/kolmogorov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chs/errors.hpp"
#include "chs/nonlinearity.hpp"
#include "chs/operators.hpp"
#include "chs/parallel.hpp"
#include "chs/regression.hpp"
#include "chs/transform.hpp"

namespace chs {

StepLinearization::StepLinearization(const ExponentialStepper& stepper, const SpectralField& x) : stepper_(stepper) {
  if (!x.spectrum().same_shape(*stepper.spectrum())) throw ShapeError("linearization: state on the wrong spectrum");
  if (stepper.drift_model() == Drift::none) return;
  xg_ = to_grid(x, stepper.quadrature_points());
  pf_ = to_spectral(eval_F_grid(xg_), stepper.spectrum());
  n_ = norm(pf_);
  if (stepper.taming() == Taming::on) tau_ = 1.0 / (1.0 + stepper.dt() * n_);
}

GridField StepLinearization::grid(const SpectralField& f) const {
  if (!f.spectrum().same_shape(*stepper_.spectrum())) throw ShapeError("linearization: direction on the wrong spectrum");
  return to_grid(f, stepper_.quadrature_points());
}

SpectralField StepLinearization::fprime(const GridField& hg) const {
  GridField out(hg.d, hg.M);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = (3.0 * xg_.values[i] * xg_.values[i] - 1.0) * hg.values[i];
  return to_spectral(out, stepper_.spectrum());
}

// D‖P‖.h = ⟨P, P'h⟩/‖P‖, taken as 0 where ‖P‖ = 0.
double StepLinearization::dnorm(const SpectralField& ph) const { return n_ > 0.0 ? dot(pf_, ph) / n_ : 0.0; }

// decay·eta + φ₁·(-λ g)
SpectralField StepLinearization::assemble(const SpectralField& eta, const SpectralField& g) const {
  const auto decay = stepper_.decay();
  const auto phi = stepper_.phi1();
  const auto lambdas = stepper_.spectrum()->lambdas();
  SpectralField out(stepper_.spectrum());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = decay[k] * eta[k] - phi[k] * lambdas[k] * g[k];
  return out;
}

SpectralField StepLinearization::first(const SpectralField& eta) const {
  if (stepper_.drift_model() == Drift::none) return assemble(eta, SpectralField(stepper_.spectrum()));
  SpectralField g = fprime(grid(eta));
  if (stepper_.taming() == Taming::on) {
    const double dtau = -stepper_.dt() * tau_ * tau_ * dnorm(g);
    g *= tau_;
    for (std::size_t k = 0; k < g.size(); ++k) g[k] += dtau * pf_[k];
  }
  return assemble(eta, g);
}

SpectralField StepLinearization::second(const SpectralField& zeta, const SpectralField& eta1,
                                        const SpectralField& eta2) const {
  if (stepper_.drift_model() == Drift::none) return assemble(zeta, SpectralField(stepper_.spectrum()));
  const GridField g1 = grid(eta1);
  const GridField g2 = grid(eta2);
  GridField prod(g1.d, g1.M);
  for (std::size_t i = 0; i < prod.size(); ++i) prod.values[i] = 6.0 * xg_.values[i] * g1.values[i] * g2.values[i];
  const SpectralField p2 = to_spectral(prod, stepper_.spectrum());
  const SpectralField pz = fprime(grid(zeta));
  SpectralField g = pz + p2;
  if (stepper_.taming() == Taming::on) {
    const double dt = stepper_.dt();
    const SpectralField p1 = fprime(g1);
    const SpectralField q2 = fprime(g2);
    const double dn1 = dnorm(p1);
    const double dn2 = dnorm(q2);
    const double dnz = dnorm(pz);
    const double d2n = n_ > 0.0 ? (dot(p1, q2) + dot(pf_, p2)) / n_ - dn1 * dn2 / n_ : 0.0;
    const double t2 = tau_ * tau_;
    const double dtau1 = -dt * t2 * dn1;
    const double dtau2 = -dt * t2 * dn2;
    const double dtauz = -dt * t2 * dnz;
    const double d2tau = 2.0 * dt * dt * t2 * tau_ * dn1 * dn2 - dt * t2 * d2n;
    g *= tau_;
    for (std::size_t k = 0; k < g.size(); ++k) {
      g[k] += (dtauz + d2tau) * pf_[k] + dtau1 * q2[k] + dtau2 * p1[k];
    }
  }
  return assemble(zeta, g);
}

SpectralField step_tangent(const SpectralField& eta_k, const SpectralField& x_k, double dt, int Mq, Taming taming,
                           Drift drift) {
  require_same_spectrum(eta_k, x_k, "step_tangent");
  const ExponentialStepper stepper(x_k.spectrum_ptr(), dt, Mq, taming, drift);
  return StepLinearization(stepper, x_k).first(eta_k);
}

SpectralField step_second_tangent(const SpectralField& zeta_k, const SpectralField& eta1_k, const SpectralField& eta2_k,
                                  const SpectralField& x_k, double dt, int Mq, Taming taming, Drift drift) {
  require_same_spectrum(zeta_k, x_k, "step_second_tangent");
  require_same_spectrum(eta1_k, x_k, "step_second_tangent");
  require_same_spectrum(eta2_k, x_k, "step_second_tangent");
  const ExponentialStepper stepper(x_k.spectrum_ptr(), dt, Mq, taming, drift);
  return StepLinearization(stepper, x_k).second(zeta_k, eta1_k, eta2_k);
}

TangentState run_tangent_path(const SchemeConfig& cfg, const SpectralField& h1, const std::optional<SpectralField>& h2,
                              const IncrementSource& increments) {
  cfg.validate();
  require_same_spectrum(cfg.x0, h1, "run_tangent_path");
  if (h2) require_same_spectrum(cfg.x0, *h2, "run_tangent_path");
  TangentState st{cfg.x0, h1, h2, std::nullopt, false};
  if (h2) st.zeta = SpectralField(cfg.spectrum());
  if (cfg.K == 0) return st;
  const ExponentialStepper stepper(cfg.spectrum(), cfg.dt(), cfg.quadrature_points(), cfg.taming, cfg.drift);
  for (int k = 0; k < cfg.K; ++k) {
    const StepLinearization lin(stepper, st.x);
    SpectralField x = stepper.step(st.x, increments(k));
    if (st.zeta) st.zeta = lin.second(*st.zeta, st.eta, *st.eta2);
    st.eta = lin.first(st.eta);
    if (st.eta2) st.eta2 = lin.first(*st.eta2);
    st.x = std::move(x);
    if (!st.x.all_finite() || !st.eta.all_finite() || (st.zeta && !st.zeta->all_finite())) {
      st.blowup = true;
      return st;
    }
  }
  return st;
}

TangentState run_tangent_path(const SchemeConfig& cfg, const SpectralField& h1, const std::optional<SpectralField>& h2,
                              std::uint64_t seed, std::uint64_t sample) {
  const NoiseSampler sampler(cfg.noise, cfg.spectrum());
  const double dt = cfg.K > 0 ? cfg.dt() : 1.0;
  return run_tangent_path(cfg, h1, h2, [&](int k) {
    return sampler.increment(dt, RngStream{seed, sample, static_cast<std::uint64_t>(k)});
  });
}

namespace {

// Per-sample values, NaN marking an excluded sample.
DerivativeEstimate summarize(const std::vector<double>& values) {
  DerivativeEstimate est;
  std::vector<double> kept;
  kept.reserve(values.size());
  for (double v : values) {
    if (std::isfinite(v)) {
      kept.push_back(v);
    } else {
      ++est.excluded;
    }
  }
  const SampleMoments m = sample_moments(kept);
  est.value = m.mean;
  est.std_err = m.std_err;
  est.used = kept.size();
  est.valid = kept.size() > 0 && static_cast<double>(est.excluded) <= 0.01 * static_cast<double>(values.size());
  return est;
}

constexpr double kExcluded = std::numeric_limits<double>::quiet_NaN();

}  // namespace

DerivativeEstimate estimate_Du(const SchemeConfig& cfg, const TestFunctional& phi, const SpectralField& h,
                               const EstimatorOptions& opts) {
  cfg.validate();
  std::vector<double> values(opts.samples);
  parallel_for(opts.samples, opts.threads, [&](std::size_t i) {
    const TangentState st = run_tangent_path(cfg, h, std::nullopt, opts.seed, i);
    values[i] = st.blowup ? kExcluded : phi.first(st.x, st.eta);
  });
  return summarize(values);
}

DerivativeEstimate estimate_D2u(const SchemeConfig& cfg, const TestFunctional& phi, const SpectralField& h1,
                                const SpectralField& h2, const EstimatorOptions& opts) {
  cfg.validate();
  std::vector<double> values(opts.samples);
  parallel_for(opts.samples, opts.threads, [&](std::size_t i) {
    const TangentState st = run_tangent_path(cfg, h1, h2, opts.seed, i);
    values[i] = st.blowup ? kExcluded : phi.first(st.x, *st.zeta) + phi.second(st.x, st.eta, *st.eta2);
  });
  return summarize(values);
}

DerivativeEstimate estimate_Du_finite_difference(const SchemeConfig& cfg, const TestFunctional& phi,
                                                 const SpectralField& h, double eps, const EstimatorOptions& opts) {
  if (!(eps > 0.0)) throw ParameterError("finite difference: eps must be > 0");
  cfg.validate();
  SchemeConfig plus = cfg;
  SchemeConfig minus = cfg;
  plus.x0 += eps * h;
  minus.x0 -= eps * h;
  std::vector<double> values(opts.samples);
  parallel_for(opts.samples, opts.threads, [&](std::size_t i) {
    const TrajectoryRecord a = run_trajectory(plus, opts.seed, i);
    const TrajectoryRecord b = run_trajectory(minus, opts.seed, i);
    values[i] = a.blowup || b.blowup ? kExcluded : (phi.value(a.terminal) - phi.value(b.terminal)) / (2.0 * eps);
  });
  return summarize(values);
}

ScalingReport check_regularity_scaling(const ScalingPlan& plan) {
  const SchemeConfig& cfg = plan.cfg;
  cfg.validate();
  if (!(plan.alpha >= 0.0 && plan.alpha < 2.0)) throw ParameterError("regularity scaling: alpha must lie in [0, 2)");
  if (!plan.phi) throw ParameterError("regularity scaling: no test functional");
  if (plan.modes.empty() || plan.record_steps.empty()) throw ParameterError("regularity scaling: empty mode or time grid");
  const auto spectrum = cfg.spectrum();
  std::vector<SpectralField> directions;
  std::vector<double> weights;  // |A^{-α}𝐏h| + |⟨h,e_0⟩|
  for (int j : plan.modes) {
    if (j < 1 || j > cfg.cutoff()) throw ParameterError("regularity scaling: mode outside [1, N]");
    const std::size_t flat = spectrum->flat_index({j, 0, 0});
    SpectralField h = SpectralField::basis(spectrum, {j, 0, 0});
    h *= std::pow(spectrum->lambda(flat), plan.alpha);
    weights.push_back(norm(apply_A_power(project_mean_free(h), -plan.alpha)) + std::abs(h.mean()));
    directions.push_back(std::move(h));
  }
  std::vector<int> steps = plan.record_steps;
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  if (steps.front() < 1 || steps.back() > cfg.K) throw ParameterError("regularity scaling: record step outside [1, K]");

  const std::size_t nt = steps.size();
  const std::size_t nm = directions.size();
  const std::size_t S = plan.opts.samples;
  // values[(it·nm + im)·S + i]
  std::vector<double> values(nt * nm * S);
  const ExponentialStepper stepper(spectrum, cfg.dt(), cfg.quadrature_points(), cfg.taming, cfg.drift);
  const NoiseSampler sampler(cfg.noise, spectrum);
  parallel_for(S, plan.opts.threads, [&](std::size_t i) {
    SpectralField x = cfg.x0;
    std::vector<SpectralField> eta = directions;
    std::size_t it = 0;
    bool blown = false;
    for (int k = 0; k < steps.back() && !blown; ++k) {
      const StepLinearization lin(stepper, x);
      x = stepper.step(x, sampler.increment(cfg.dt(), RngStream{plan.opts.seed, i, static_cast<std::uint64_t>(k)}));
      for (auto& e : eta) e = lin.first(e);
      blown = !x.all_finite();
      if (k + 1 == steps[it]) {
        for (std::size_t im = 0; im < nm; ++im) {
          values[(it * nm + im) * S + i] = blown ? kExcluded : plan.phi->first(x, eta[im]);
        }
        ++it;
      }
    }
    for (; it < nt; ++it) {
      for (std::size_t im = 0; im < nm; ++im) values[(it * nm + im) * S + i] = kExcluded;
    }
  });

  ScalingReport rep;
  rep.alpha = plan.alpha;
  std::vector<LogLogPoint> fit_points;
  for (std::size_t it = 0; it < nt; ++it) {
    const double t = steps[it] * cfg.dt();
    const double scale = std::pow(t, plan.alpha / 2.0);
    double sup = -1.0;
    double sup_se = 0.0;
    for (std::size_t im = 0; im < nm; ++im) {
      const std::vector<double> slice(values.begin() + (it * nm + im) * S, values.begin() + (it * nm + im + 1) * S);
      const DerivativeEstimate est = summarize(slice);
      rep.excluded = std::max(rep.excluded, est.excluded);
      rep.valid = rep.valid && est.valid;
      ScalingPoint p{t, plan.modes[im], est.value, est.std_err, std::abs(est.value) * scale / weights[im],
                     est.std_err * scale / weights[im]};
      if (p.ratio > sup) {
        sup = p.ratio;
        sup_se = p.ratio_se;
      }
      rep.points.push_back(p);
    }
    rep.t.push_back(t);
    rep.sup_ratio.push_back(sup);
    rep.sup_ratio_se.push_back(sup_se);
    rep.max_ratio = std::max(rep.max_ratio, sup);
    if (sup > 0.0) fit_points.push_back({t, sup, sup_se});
  }
  rep.used = S - rep.excluded;
  if (fit_points.size() >= 3) {
    const LogLogFit fit = fit_loglog(fit_points);
    rep.fitted = true;
    rep.slope = fit.slope;
    rep.half_width = fit.half_width;
  }
  return rep;
}

}  // namespace chs
