#pragma once

#include "chs/field.hpp"
#include "chs/transform.hpp"

namespace chs {

/// Smallest per-axis grid size for which the pseudo-spectral cubic is an
/// exact Galerkin projection: 2(N+1).
int dealiased_points(int N);

/// Throws ParameterError when Mq < 2(N+1).
void require_dealiased(const OperatorSpectrum& s, int Mq);

/// Pointwise f(v) = v³ - v.
GridField eval_F_grid(const GridField& g);

/// P_N F(x) by synthesis on Mq points, pointwise cubic, and analysis.
SpectralField galerkin_F(const SpectralField& x, int Mq);

/// P_N((3x² - 1) h).
SpectralField apply_Fprime(const SpectralField& x, const SpectralField& h, int Mq);

/// P_N(6 x h k).
SpectralField apply_Fsecond(const SpectralField& x, const SpectralField& h, const SpectralField& k, int Mq);

/// ‖x‖_{L⁴}⁴ by midpoint quadrature (exact for Mq ≥ 2(N+1)).
double l4_norm_pow4(const SpectralField& x, int Mq);

/// J(x) = ½‖x‖_{H¹}² + ¼‖x‖_{L⁴}⁴ - ½‖x‖², with ‖x‖_{H¹}² = ‖x‖² + |𝐏x|₁².
double eval_energy(const SpectralField& x, int Mq);

}  // namespace chs
