#pragma once

#include <cstdint>
#include <vector>

#include "chs/functionals.hpp"
#include "chs/regression.hpp"
#include "chs/scheme.hpp"

namespace chs {

struct Level {
  int N = 0;
  int K = 0;
};

struct ExperimentPlan {
  ExperimentPlan(SchemeConfig base_, std::vector<Level> levels_, Level reference_)
      : base(std::move(base_)), levels(std::move(levels_)), reference(reference_) {}

  SchemeConfig base;  ///< x0 on the reference spectrum; T, noise, γ, taming, drift
  std::vector<Level> levels;
  Level reference;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  int threads = 1;
  double m = 2.0;  ///< strong error moment

  /// Throws ParameterError unless every K divides reference.K, every
  /// N ≤ reference.N, and base.x0 lives on the reference spectrum.
  void validate() const;
};

/// Terminal states of every level and the reference, all driven by one fine
/// noise path per sample. Coarse increments are sums of fine increments,
/// projected onto the level's spectrum.
struct CoupledEnsemble {
  std::vector<std::vector<SpectralField>> level_terminals;  ///< [level][sample]
  std::vector<SpectralField> reference_terminals;           ///< [sample]
  std::vector<char> excluded;  ///< per sample: some level or the reference blew up
  std::size_t excluded_count = 0;
};

CoupledEnsemble run_coupled_ensemble(const ExperimentPlan& plan);

/// (E‖X_level - X_ref‖^m)^{1/m} per level, level states embedded into the
/// reference spectrum; std_err by the delta method.
RateReport strong_error(const ExperimentPlan& plan, const CoupledEnsemble& ens, RateAxis axis);

/// |E[φ(X_level) - φ(X_ref)]| per level from paired samples.
RateReport weak_error(const ExperimentPlan& plan, const CoupledEnsemble& ens, const TestFunctional& phi,
                      RateAxis axis);

RateReport strong_error_temporal(const ExperimentPlan& plan);
RateReport strong_error_spatial(const ExperimentPlan& plan);
RateReport weak_error_temporal(const ExperimentPlan& plan, const TestFunctional& phi);
RateReport weak_error_spatial(const ExperimentPlan& plan, const TestFunctional& phi);

struct MomentEstimate {
  Level level;
  double value = 0.0;  ///< E sup_k ‖X_{N,k}‖_γ^m
  double std_err = 0.0;
  std::size_t excluded = 0;
};

/// E sup_k ‖X_{N,k}‖_γ^m from independent trajectories of `cfg`.
MomentEstimate estimate_sup_moment(const SchemeConfig& cfg, double m, std::size_t samples, std::uint64_t seed,
                                   int threads);

struct MomentStudy {
  std::vector<MomentEstimate> estimates;
  double relative_spread = 0.0;  ///< max/min - 1 over the estimates
};

/// One estimate per level, each from cfg re-resolved at (N, K).
MomentStudy moment_study(const SchemeConfig& cfg, const std::vector<Level>& levels, double m, std::size_t samples,
                         std::uint64_t seed, int threads);

/// Number of trajectories among `seeds` master seeds (sample 0 each) that
/// hit a non-finite state.
std::size_t count_blowups(const SchemeConfig& cfg, std::size_t seeds, std::uint64_t first_seed, int threads);

}  // namespace chs
