#pragma once

#include "chs/field.hpp"

namespace chs {

/// Multiplies coefficient j by λ_j^alpha. The λ_0 = 0 mode is zeroed for
/// alpha > 0 and kept for alpha = 0. Negative powers are only defined on
/// mean-free fields; a nonzero mean throws DomainError.
SpectralField apply_A_power(const SpectralField& f, double alpha);

/// 𝐏: removes the mean (all-zero index) component.
SpectralField project_mean_free(const SpectralField& f);

/// P_{N'}: zeroes every mode with a component above `cutoff` (≤ N).
SpectralField project_PN(const SpectralField& f, int cutoff);

/// e^{-tA²}: coefficient j multiplied by exp(-t λ_j²). t < 0 throws.
SpectralField semigroup_apply(const SpectralField& f, double t);

/// φ₁(μ, dt) = (1 - exp(-dt μ))/μ = ∫₀^dt e^{-sμ} ds, equal to dt at μ = 0.
/// Uses expm1 for dt μ ≥ 1e-4 and a four-term Taylor series below.
double phi1(double mu, double dt);

/// (A²)^{-1}(I - e^{-dt A²}) applied mode-wise; dt ≤ 0 throws.
SpectralField phi1_apply(const SpectralField& f, double dt);

/// ‖f‖_α = sqrt(Σ_{j≠0} λ_j^α f_j² + f_0²), alpha ≥ 0.
double norm_alpha(const SpectralField& f, double alpha);

/// |𝐏f|_α, the seminorm without the mean term.
double seminorm_alpha(const SpectralField& f, double alpha);

}  // namespace chs
