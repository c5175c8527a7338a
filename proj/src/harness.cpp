#include "chs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chs/errors.hpp"
#include "chs/noise.hpp"
#include "chs/parallel.hpp"

namespace chs {

void ExperimentPlan::validate() const {
  base.validate();
  if (samples == 0) throw ParameterError("plan: samples must be > 0");
  if (!(m >= 1.0)) throw ParameterError("plan: strong error moment m must be >= 1");
  if (reference.N != base.cutoff()) throw ParameterError("plan: x0 must live on the reference spectrum N_ref");
  if (reference.K <= 0) throw ParameterError("plan: reference K must be > 0");
  for (const Level& l : levels) {
    if (l.N < 1 || l.N > reference.N) {
      throw ParameterError("plan: level N = " + std::to_string(l.N) + " outside [1, N_ref]");
    }
    if (l.K <= 0 || reference.K % l.K != 0) {
      throw ParameterError("plan: level K = " + std::to_string(l.K) + " does not divide K_ref");
    }
  }
}

namespace {

struct LevelRunner {
  SchemeConfig cfg;
  ExponentialStepper stepper;
  std::vector<std::size_t> to_reference;  // level flat index -> reference flat index
  int ratio;
};

std::vector<LevelRunner> make_runners(const ExperimentPlan& plan) {
  std::vector<LevelRunner> runners;
  const auto& ref = *plan.base.spectrum();
  for (const Level& l : plan.levels) {
    SchemeConfig cfg = plan.base.at_resolution(l.N, l.K);
    cfg.validate();
    ExponentialStepper stepper(cfg.spectrum(), cfg.dt(), cfg.quadrature_points(), cfg.taming, cfg.drift);
    std::vector<std::size_t> map(cfg.spectrum()->size());
    for (std::size_t k = 0; k < map.size(); ++k) map[k] = ref.flat_index(cfg.spectrum()->multi_index(k));
    const int ratio = plan.reference.K / l.K;
    runners.push_back({std::move(cfg), std::move(stepper), std::move(map), ratio});
  }
  return runners;
}

double level_dt(const ExperimentPlan& plan, const Level& l) { return plan.base.T / l.K; }

RateReport blank_report(const ExperimentPlan& plan, const CoupledEnsemble& ens, const char* kind, RateAxis axis) {
  RateReport rep;
  rep.kind = kind;
  rep.axis = axis;
  rep.samples = plan.samples;
  rep.excluded = ens.excluded_count;
  rep.seed = plan.seed;
  return rep;
}

RatePoint point_for(const ExperimentPlan& plan, const Level& l) {
  RatePoint p;
  p.N = l.N;
  p.K = l.K;
  p.dt = level_dt(plan, l);
  p.lambda_N = axis_eigenvalue(l.N);
  return p;
}

void require_fixed(const ExperimentPlan& plan, RateAxis axis) {
  for (const Level& l : plan.levels) {
    if (axis == RateAxis::time && l.N != plan.reference.N) {
      throw ParameterError("temporal plan: every level must use N = N_ref");
    }
    if (axis == RateAxis::space && l.K != plan.reference.K) {
      throw ParameterError("spatial plan: every level must use K = K_ref");
    }
  }
}

}  // namespace

CoupledEnsemble run_coupled_ensemble(const ExperimentPlan& plan) {
  plan.validate();
  const SchemeConfig ref_cfg = plan.base.at_resolution(plan.reference.N, plan.reference.K);
  ref_cfg.validate();
  const ExponentialStepper ref_stepper(ref_cfg.spectrum(), ref_cfg.dt(), ref_cfg.quadrature_points(), ref_cfg.taming,
                                       ref_cfg.drift);
  const std::vector<LevelRunner> runners = make_runners(plan);
  const NoiseSampler sampler(ref_cfg.noise, ref_cfg.spectrum());
  const double dt_fine = ref_cfg.dt();

  CoupledEnsemble ens;
  ens.level_terminals.assign(runners.size(), std::vector<SpectralField>(plan.samples));
  ens.reference_terminals.resize(plan.samples);
  ens.excluded.assign(plan.samples, 0);

  parallel_for(plan.samples, plan.threads, [&](std::size_t i) {
    SpectralField x_ref = ref_cfg.x0;
    std::vector<SpectralField> x;
    std::vector<SpectralField> buffer;
    for (const auto& r : runners) {
      x.push_back(r.cfg.x0);
      buffer.emplace_back(r.cfg.spectrum());
    }
    bool blown = false;
    for (int k = 0; k < plan.reference.K && !blown; ++k) {
      const SpectralField dW = sampler.increment(dt_fine, RngStream{plan.seed, i, static_cast<std::uint64_t>(k)});
      x_ref = ref_stepper.step(x_ref, dW);
      blown = !x_ref.all_finite();
      for (std::size_t l = 0; l < runners.size(); ++l) {
        const auto& r = runners[l];
        for (std::size_t j = 0; j < r.to_reference.size(); ++j) buffer[l][j] += dW[r.to_reference[j]];
        if ((k + 1) % r.ratio != 0) continue;
        x[l] = r.stepper.step(x[l], buffer[l]);
        blown = blown || !x[l].all_finite();
        buffer[l] *= 0.0;
      }
    }
    ens.excluded[i] = blown ? 1 : 0;
    ens.reference_terminals[i] = std::move(x_ref);
    for (std::size_t l = 0; l < runners.size(); ++l) ens.level_terminals[l][i] = std::move(x[l]);
  });
  ens.excluded_count = static_cast<std::size_t>(std::count(ens.excluded.begin(), ens.excluded.end(), 1));
  return ens;
}

RateReport strong_error(const ExperimentPlan& plan, const CoupledEnsemble& ens, RateAxis axis) {
  RateReport rep = blank_report(plan, ens, axis == RateAxis::time ? "strong-time" : "strong-space", axis);
  const auto& ref_spectrum = plan.base.spectrum();
  for (std::size_t l = 0; l < plan.levels.size(); ++l) {
    std::vector<double> e;
    e.reserve(plan.samples);
    for (std::size_t i = 0; i < plan.samples; ++i) {
      if (ens.excluded[i]) continue;
      const SpectralField diff = embed_into(ens.level_terminals[l][i], ref_spectrum) - ens.reference_terminals[i];
      e.push_back(std::pow(norm(diff), plan.m));
    }
    const SampleMoments mom = sample_moments(e);
    RatePoint p = point_for(plan, plan.levels[l]);
    if (mom.mean > 0.0) {
      p.error = std::pow(mom.mean, 1.0 / plan.m);
      p.std_err = p.error / (plan.m * mom.mean) * mom.std_err;
    }
    rep.points.push_back(p);
  }
  fit_rate(rep);
  return rep;
}

RateReport weak_error(const ExperimentPlan& plan, const CoupledEnsemble& ens, const TestFunctional& phi,
                      RateAxis axis) {
  RateReport rep = blank_report(plan, ens, axis == RateAxis::time ? "weak-time" : "weak-space", axis);
  for (std::size_t l = 0; l < plan.levels.size(); ++l) {
    std::vector<double> e;
    e.reserve(plan.samples);
    for (std::size_t i = 0; i < plan.samples; ++i) {
      if (ens.excluded[i]) continue;
      e.push_back(phi.value(ens.level_terminals[l][i]) - phi.value(ens.reference_terminals[i]));
    }
    const SampleMoments mom = sample_moments(e);
    RatePoint p = point_for(plan, plan.levels[l]);
    p.error = std::abs(mom.mean);
    p.std_err = mom.std_err;
    rep.points.push_back(p);
  }
  fit_rate(rep);
  return rep;
}

RateReport strong_error_temporal(const ExperimentPlan& plan) {
  require_fixed(plan, RateAxis::time);
  return strong_error(plan, run_coupled_ensemble(plan), RateAxis::time);
}

RateReport strong_error_spatial(const ExperimentPlan& plan) {
  require_fixed(plan, RateAxis::space);
  return strong_error(plan, run_coupled_ensemble(plan), RateAxis::space);
}

RateReport weak_error_temporal(const ExperimentPlan& plan, const TestFunctional& phi) {
  require_fixed(plan, RateAxis::time);
  return weak_error(plan, run_coupled_ensemble(plan), phi, RateAxis::time);
}

RateReport weak_error_spatial(const ExperimentPlan& plan, const TestFunctional& phi) {
  require_fixed(plan, RateAxis::space);
  return weak_error(plan, run_coupled_ensemble(plan), phi, RateAxis::space);
}

MomentEstimate estimate_sup_moment(const SchemeConfig& cfg, double m, std::size_t samples, std::uint64_t seed,
                                   int threads) {
  cfg.validate();
  std::vector<double> values(samples);
  std::vector<char> blown(samples, 0);
  parallel_for(samples, threads, [&](std::size_t i) {
    const TrajectoryRecord rec = run_trajectory(cfg, seed, i);
    blown[i] = rec.blowup ? 1 : 0;
    values[i] = std::pow(rec.sup_norm_gamma, m);
  });
  std::vector<double> kept;
  for (std::size_t i = 0; i < samples; ++i) {
    if (!blown[i]) kept.push_back(values[i]);
  }
  const SampleMoments mom = sample_moments(kept);
  MomentEstimate est;
  est.level = {cfg.cutoff(), cfg.K};
  est.value = mom.mean;
  est.std_err = mom.std_err;
  est.excluded = samples - kept.size();
  return est;
}

MomentStudy moment_study(const SchemeConfig& cfg, const std::vector<Level>& levels, double m, std::size_t samples,
                         std::uint64_t seed, int threads) {
  if (levels.empty()) throw ParameterError("moment study: no levels");
  MomentStudy study;
  double lo = 0.0;
  double hi = 0.0;
  for (const Level& l : levels) {
    study.estimates.push_back(estimate_sup_moment(cfg.at_resolution(l.N, l.K), m, samples, seed, threads));
    const double v = study.estimates.back().value;
    lo = study.estimates.size() == 1 ? v : std::min(lo, v);
    hi = study.estimates.size() == 1 ? v : std::max(hi, v);
  }
  study.relative_spread = lo > 0.0 ? hi / lo - 1.0 : 0.0;
  return study;
}

std::size_t count_blowups(const SchemeConfig& cfg, std::size_t seeds, std::uint64_t first_seed, int threads) {
  cfg.validate();
  std::vector<char> blown(seeds, 0);
  parallel_for(seeds, threads, [&](std::size_t s) { blown[s] = run_trajectory(cfg, first_seed + s, 0).blowup ? 1 : 0; });
  return static_cast<std::size_t>(std::count(blown.begin(), blown.end(), 1));
}

}  // namespace chs
