#pragma once

#include <cstdint>
#include <vector>

#include "chs/field.hpp"

namespace chs {

enum class NoiseKind {
  white,        ///< Q = I, d = 1 only
  trace_class,  ///< diagonal q_j = scale·(1+λ_j)^{-s}, s > d/2
};

/// Covariance Q, diagonal in the cosine eigenbasis.
class NoiseModel {
 public:
  /// Space-time white noise; throws ParameterError unless d == 1.
  static NoiseModel white_noise(int d, bool q0_zero = false);
  /// q_j = (1+λ_j)^{-s}; throws ParameterError unless s > d/2.
  static NoiseModel trace_class(int d, double s, bool q0_zero = false);
  /// Q = 0, classified as trace-class.
  static NoiseModel zero(int d);

  NoiseKind kind() const { return kind_; }
  int dimension() const { return d_; }
  double smoothness() const { return s_; }
  bool q0_zero() const { return q0_zero_; }
  bool is_zero() const { return scale_ == 0.0; }

  /// Γ: 3/2 for white noise, 2 for trace-class.
  double gamma_max() const;
  /// Γ₀: 1 for white noise, 1 + d/4 for trace-class.
  double gamma_floor() const;
  /// γ ∈ (Γ₀, Γ).
  bool admissible_gamma(double gamma) const;

  /// q_j for every mode of `spectrum`.
  std::vector<double> variances(const OperatorSpectrum& spectrum) const;

 private:
  NoiseModel(NoiseKind kind, int d, double s, bool q0_zero, double scale)
      : kind_(kind), d_(d), s_(s), q0_zero_(q0_zero), scale_(scale) {}

  NoiseKind kind_;
  int d_;
  double s_;
  bool q0_zero_;
  double scale_;
};

/// Identifies one time step of one Monte Carlo sample.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t sample = 0;
  std::uint64_t step = 0;
};

/// Position of a multi-index in the generator counter. Independent of the
/// cutoff, so the N-truncated draw is the projection of any larger draw.
std::uint32_t mode_code(const MultiIndex& j, int d);

/// Independent standard normals, one per mode of `spectrum`.
SpectralField standard_normals(const SpectrumPtr& spectrum, const RngStream& stream);

/// Samples P_N ΔW^Q over a step of length dt, with cached √q_j.
class NoiseSampler {
 public:
  NoiseSampler(const NoiseModel& model, SpectrumPtr spectrum);

  SpectralField increment(double dt, const RngStream& stream) const;
  const SpectrumPtr& spectrum() const { return spectrum_; }
  const std::vector<double>& variances() const { return q_; }

 private:
  SpectrumPtr spectrum_;
  std::vector<double> q_;
  std::vector<double> sqrt_q_;
};

/// Coefficient j ~ Normal(0, q_j dt); zero mode exactly 0 when q0_zero.
SpectralField sample_increment(const NoiseModel& model, const SpectrumPtr& spectrum, double dt,
                               const RngStream& stream);

/// Z_{k+1} = e^{-dt A²}(Z_k + dW).
SpectralField step_Ztilde(const SpectralField& z, const SpectralField& dW, double dt);

}  // namespace chs
