#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chs/field.hpp"
#include "chs/functionals.hpp"
#include "chs/scheme.hpp"

namespace chs {

/// Derivatives of one scheme step x ↦ e^{-dtA²}x + φ₁(A²,dt)G(x) + e^{-dtA²}dW
/// at a fixed state x, with G(x) = -A τ(x) P_N F(x) and
/// τ(x) = 1/(1 + dt‖P_N F(x)‖) (τ ≡ 1 untamed).
///
/// The taming factor is differentiated too, so the tangents are the exact
/// derivatives of the discrete flow. Untamed, first() reduces to
/// e^{-dtA²}η - φ₁(A²,dt) A P_N(F'(x)η).
class StepLinearization {
 public:
  StepLinearization(const ExponentialStepper& stepper, const SpectralField& x);

  /// D(step)(x).eta
  SpectralField first(const SpectralField& eta) const;

  /// D(step)(x).zeta + D²(step)(x).(eta1, eta2)
  SpectralField second(const SpectralField& zeta, const SpectralField& eta1, const SpectralField& eta2) const;

 private:
  GridField grid(const SpectralField& f) const;
  SpectralField fprime(const GridField& hg) const;
  double dnorm(const SpectralField& ph) const;
  SpectralField assemble(const SpectralField& eta, const SpectralField& g) const;

  const ExponentialStepper& stepper_;
  GridField xg_;
  SpectralField pf_;
  double n_ = 0.0;
  double tau_ = 1.0;
};

/// η_{k+1} for one step along a trajectory at state x_k.
SpectralField step_tangent(const SpectralField& eta_k, const SpectralField& x_k, double dt, int Mq,
                           Taming taming = Taming::on, Drift drift = Drift::cubic);

/// ζ_{k+1} for one step along a trajectory at state x_k.
SpectralField step_second_tangent(const SpectralField& zeta_k, const SpectralField& eta1_k, const SpectralField& eta2_k,
                                  const SpectralField& x_k, double dt, int Mq, Taming taming = Taming::on,
                                  Drift drift = Drift::cubic);

struct TangentState {
  SpectralField x;
  SpectralField eta;
  std::optional<SpectralField> eta2;
  std::optional<SpectralField> zeta;  ///< present together with eta2
  bool blowup = false;
};

/// Runs cfg.K steps from cfg.x0 together with η^{h1} and, if h2 is given,
/// η^{h2} and ζ^{h1,h2}.
TangentState run_tangent_path(const SchemeConfig& cfg, const SpectralField& h1, const std::optional<SpectralField>& h2,
                              const IncrementSource& increments);
TangentState run_tangent_path(const SchemeConfig& cfg, const SpectralField& h1, const std::optional<SpectralField>& h2,
                              std::uint64_t seed, std::uint64_t sample);

struct EstimatorOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct DerivativeEstimate {
  double value = 0.0;
  double std_err = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;  ///< blown-up trajectories
  bool valid = true;         ///< false once more than 1% are excluded
};

/// Du(T, x0).h = E[Dφ(X_K).η_K^h].
DerivativeEstimate estimate_Du(const SchemeConfig& cfg, const TestFunctional& phi, const SpectralField& h,
                               const EstimatorOptions& opts);

/// D²u(T, x0).(h1, h2) = E[Dφ(X_K).ζ_K + D²φ(X_K).(η_K^{h1}, η_K^{h2})].
DerivativeEstimate estimate_D2u(const SchemeConfig& cfg, const TestFunctional& phi, const SpectralField& h1,
                                const SpectralField& h2, const EstimatorOptions& opts);

/// E[φ(X_K(x0+εh)) - φ(X_K(x0-εh))]/(2ε) with common random numbers.
DerivativeEstimate estimate_Du_finite_difference(const SchemeConfig& cfg, const TestFunctional& phi,
                                                 const SpectralField& h, double eps, const EstimatorOptions& opts);

struct ScalingPlan {
  SchemeConfig cfg;             ///< step dt = T/K; runs max(record_steps) steps
  FunctionalPtr phi;
  double alpha = 0.0;           ///< in [0, 2)
  std::vector<int> modes;       ///< direction h_j = λ_j^alpha e_(j,0,0), 1 ≤ j ≤ N
  std::vector<int> record_steps;  ///< t = step·dt, each in [1, K]
  EstimatorOptions opts;
};

struct ScalingPoint {
  double t = 0.0;
  int mode = 0;
  double du = 0.0;
  double std_err = 0.0;
  double ratio = 0.0;  ///< |Du(t,x).h| / (t^{-α/2}(|A^{-α}𝐏h| + |⟨h,e_0⟩|))
  double ratio_se = 0.0;
};

struct ScalingReport {
  double alpha = 0.0;
  std::vector<ScalingPoint> points;
  std::vector<double> t;
  std::vector<double> sup_ratio;  ///< max over modes, per t
  std::vector<double> sup_ratio_se;
  double max_ratio = 0.0;
  bool fitted = false;
  double slope = 0.0;  ///< of log sup_ratio against log t
  double half_width = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;
  bool valid = true;
};

ScalingReport check_regularity_scaling(const ScalingPlan& plan);

}  // namespace chs
