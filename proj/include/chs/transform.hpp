#pragma once

#include "chs/field.hpp"

namespace chs {

enum class TransformBackend {
  automatic,  ///< fast when compiled with FFTW, direct otherwise
  fast,       ///< FFTW REDFT01/REDFT10; throws ParameterError if unavailable
  direct,     ///< separable O(M·N) per axis with tabulated cosines
};

bool fast_transform_available();

/// Synthesis: point values of `f` on the M-point midpoint grid per axis.
/// Requires M ≥ N+1 (ShapeError otherwise).
GridField to_grid(const SpectralField& f, int M, TransformBackend backend = TransformBackend::automatic);

/// Analysis by midpoint quadrature, truncated to `spectrum`. Exact inverse of
/// to_grid whenever M ≥ N+1.
SpectralField to_spectral(const GridField& g, const SpectrumPtr& spectrum,
                          TransformBackend backend = TransformBackend::automatic);

}  // namespace chs
