#pragma once

#include <memory>
#include <string>

#include "chs/field.hpp"

namespace chs {

/// Smooth test functional φ: H_N → ℝ with first and second directional
/// derivatives in closed form.
class TestFunctional {
 public:
  virtual ~TestFunctional() = default;

  virtual std::string name() const = 0;
  virtual double value(const SpectralField& x) const = 0;
  /// Dφ(x).h
  virtual double first(const SpectralField& x, const SpectralField& h) const = 0;
  /// D²φ(x).(h, k)
  virtual double second(const SpectralField& x, const SpectralField& h, const SpectralField& k) const = 0;
};

using FunctionalPtr = std::shared_ptr<const TestFunctional>;

/// φ(x) = exp(-‖x‖²).
FunctionalPtr make_exp_sq();

/// φ(x) = ⟨g, x⟩ with g_j = 1/(1 + λ_j) on the spectrum of x.
FunctionalPtr make_linear();

/// φ(x) = sin⟨g, x⟩ with the same g as make_linear.
FunctionalPtr make_sin();

/// "exp_sq", "linear" or "sin"; anything else throws ParameterError.
FunctionalPtr make_functional(const std::string& name);

/// g_j = 1/(1 + λ_j) on `spectrum`.
SpectralField smoothing_weights(const SpectrumPtr& spectrum);

}  // namespace chs
