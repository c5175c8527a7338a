#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chs/spectrum.hpp"

namespace chs {

/// Coefficients of a function on (0,1)^d in the orthonormal Neumann cosine
/// basis e_j(x) = Π_i c(j_i) cos(j_i π x_i), with c(0) = 1 and c(j) = √2.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(SpectrumPtr spectrum);
  SpectralField(SpectrumPtr spectrum, std::vector<double> coeffs);

  /// The basis function e_j for the given multi-index.
  static SpectralField basis(SpectrumPtr spectrum, const MultiIndex& j);

  const OperatorSpectrum& spectrum() const { return *spectrum_; }
  const SpectrumPtr& spectrum_ptr() const { return spectrum_; }
  std::size_t size() const { return coeffs_.size(); }

  std::span<double> coeffs() { return coeffs_; }
  std::span<const double> coeffs() const { return coeffs_; }
  double& operator[](std::size_t k) { return coeffs_[k]; }
  double operator[](std::size_t k) const { return coeffs_[k]; }

  double mean() const { return coeffs_[0]; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

  bool all_finite() const;

 private:
  SpectrumPtr spectrum_;
  std::vector<double> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// L²(0,1)^d inner product, i.e. the coefficient dot product.
double dot(const SpectralField& a, const SpectralField& b);
/// L² norm via Parseval.
double norm(const SpectralField& a);

/// Throws ShapeError unless both fields live on spectra with equal (d, N).
void require_same_spectrum(const SpectralField& a, const SpectralField& b, const char* what);

/// Coefficients of `f` on a smaller or equal spectrum (drops modes above the
/// target cutoff). Realizes P_N between spectra of different size.
SpectralField restrict_to(const SpectralField& f, const SpectrumPtr& target);

/// Zero-extends `f` onto a larger or equal spectrum.
SpectralField embed_into(const SpectralField& f, const SpectrumPtr& target);

/// Point values on the tensor midpoint grid x_k = (k + 1/2)/M per axis,
/// stored with the first axis fastest.
struct GridField {
  int d = 1;
  int M = 0;
  std::vector<double> values;

  GridField() = default;
  GridField(int d_, int M_);
  std::size_t size() const { return values.size(); }
};

/// ∫ v over the unit cube by the midpoint rule.
double grid_mean(const GridField& g);

}  // namespace chs
