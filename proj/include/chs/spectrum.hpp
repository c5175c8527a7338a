#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace chs {

using MultiIndex = std::array<int, 3>;

/// Eigenvalues of the Neumann Laplacian A = -Δ on the unit cube (0,1)^d,
/// truncated at per-axis mode N.
///
/// Modes are stored in tensor order with the first axis fastest, so the
/// all-zero multi-index is flat index 0. Unused axes of a MultiIndex are 0.
/// Instances are immutable and shared between fields via shared_ptr.
class OperatorSpectrum {
 public:
  OperatorSpectrum(int d, int N);

  int dimension() const { return d_; }
  int cutoff() const { return N_; }
  std::size_t size() const { return lambdas_.size(); }

  std::span<const double> lambdas() const { return lambdas_; }
  double lambda(std::size_t flat) const { return lambdas_[flat]; }

  MultiIndex multi_index(std::size_t flat) const;
  std::size_t flat_index(const MultiIndex& j) const;

  /// Largest per-axis component of mode `flat`.
  int max_component(std::size_t flat) const;

  /// Eigenvalue of the one-axis mode (N,0,...,0), the λ_N used in rate fits.
  double lambda_cutoff() const;

  std::vector<double> sorted_lambdas() const;

  bool same_shape(const OperatorSpectrum& other) const {
    return d_ == other.d_ && N_ == other.N_;
  }

 private:
  int d_;
  int N_;
  std::vector<double> lambdas_;
};

using SpectrumPtr = std::shared_ptr<const OperatorSpectrum>;

/// Builds the spectrum for d ∈ {1,2,3}, N ≥ 1. Throws ParameterError otherwise.
SpectrumPtr build_spectrum(int d, int N);

/// One-dimensional eigenvalue j²π².
double axis_eigenvalue(int j);

}  // namespace chs
