#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chs/field.hpp"
#include "chs/noise.hpp"

namespace chs {

enum class Taming { on, off };

/// `none` suppresses F entirely (linear, Gaussian dynamics).
enum class Drift { cubic, none };

enum class InitialPreset {
  cosine,  ///< Π_i cos(π ξ_i)/4: smooth and mean-free
  large,   ///< 10·e_(1,0,0)
  zero,
};

InitialPreset parse_initial_preset(const std::string& name);
std::string to_string(InitialPreset preset);
SpectralField initial_condition(const SpectrumPtr& spectrum, InitialPreset preset);

struct SchemeConfig {
  SchemeConfig(SpectralField x0, NoiseModel noise, double T, int K);

  SpectralField x0;
  NoiseModel noise;
  double T;
  int K;
  double gamma = 1.5;
  int Mq = 0;  ///< 0 selects 4(N+1)
  Taming taming = Taming::on;
  Drift drift = Drift::cubic;
  bool record_energy = false;

  const SpectrumPtr& spectrum() const { return x0.spectrum_ptr(); }
  int dimension() const { return x0.spectrum().dimension(); }
  int cutoff() const { return x0.spectrum().cutoff(); }
  double dt() const { return T / K; }
  int quadrature_points() const;

  /// Throws ParameterError on T ≤ 0, K < 0, dt·K ≠ T, γ ∉ (Γ₀, Γ),
  /// noise/spectrum dimension mismatch, or Mq below 2(N+1).
  void validate() const;

  /// Same configuration at a different resolution; x0 is restricted or
  /// zero-extended onto the new spectrum.
  SchemeConfig at_resolution(int N, int K) const;
};

/// Precomputed multipliers for one (spectrum, dt) pair.
class ExponentialStepper {
 public:
  ExponentialStepper(SpectrumPtr spectrum, double dt, int Mq, Taming taming, Drift drift);

  /// The bracketed drift -A P_N F(x)/(1 + dt‖P_N F(x)‖), before φ₁ is applied.
  SpectralField drift(const SpectralField& x) const;

  /// One step e^{-dtA²}x + φ₁(A²,dt)·drift(x) + e^{-dtA²}dW.
  SpectralField step(const SpectralField& x, const SpectralField& dW) const;

  double dt() const { return dt_; }
  int quadrature_points() const { return Mq_; }
  Taming taming() const { return taming_; }
  Drift drift_model() const { return drift_; }
  const SpectrumPtr& spectrum() const { return spectrum_; }
  std::span<const double> decay() const { return decay_; }
  /// φ₁(λ_j², dt) per mode.
  std::span<const double> phi1() const { return phi1_; }

 private:
  SpectrumPtr spectrum_;
  double dt_;
  int Mq_;
  Taming taming_;
  Drift drift_;
  std::vector<double> decay_;
  std::vector<double> phi1_;
};

SpectralField step_tamed(const SpectralField& x, const SpectralField& dW, double dt, int Mq);
SpectralField step_untamed(const SpectralField& x, const SpectralField& dW, double dt, int Mq);

/// X̃(t_k + tau) for tau ∈ [0, dt], given the partial increment
/// W^Q(t_k + tau) - W^Q(t_k). The taming factor keeps the full step dt.
SpectralField interpolate_Xtilde(const SpectralField& x_k, const SpectralField& dW_partial, double dt, double tau,
                                 int Mq, Taming taming = Taming::on, Drift drift = Drift::cubic);

struct TrajectoryRecord {
  SpectralField terminal;
  double sup_norm_gamma = 0.0;
  std::vector<double> norm_series;  ///< ‖X_k‖_γ per recorded step
  std::vector<double> mass_series;  ///< ⟨X_k, e_0⟩ per recorded step
  std::vector<double> energy_series;
  bool blowup = false;
  std::optional<int> blowup_step;
  int steps_completed = 0;
};

/// Supplies P_N ΔW_k for step k of a trajectory.
using IncrementSource = std::function<SpectralField(int step)>;

/// K steps from cfg.x0 using increments drawn for (seed, sample).
TrajectoryRecord run_trajectory(const SchemeConfig& cfg, std::uint64_t seed, std::uint64_t sample);

/// K steps from cfg.x0 using caller-supplied increments.
TrajectoryRecord run_trajectory(const SchemeConfig& cfg, const IncrementSource& increments);

}  // namespace chs
