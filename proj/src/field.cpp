#include "chs/field.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "chs/errors.hpp"

namespace chs {

SpectralField::SpectralField(SpectrumPtr spectrum)
    : spectrum_(std::move(spectrum)), coeffs_(spectrum_->size(), 0.0) {}

SpectralField::SpectralField(SpectrumPtr spectrum, std::vector<double> coeffs)
    : spectrum_(std::move(spectrum)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != spectrum_->size()) {
    throw ShapeError("field: " + std::to_string(coeffs_.size()) + " coefficients for a spectrum of " +
                     std::to_string(spectrum_->size()) + " modes");
  }
}

SpectralField SpectralField::basis(SpectrumPtr spectrum, const MultiIndex& j) {
  SpectralField f(spectrum);
  for (int axis = 0; axis < spectrum->dimension(); ++axis) {
    if (j[axis] < 0 || j[axis] > spectrum->cutoff()) throw ParameterError("field: basis index out of range");
  }
  f[spectrum->flat_index(j)] = 1.0;
  return f;
}

void require_same_spectrum(const SpectralField& a, const SpectralField& b, const char* what) {
  if (!a.spectrum().same_shape(b.spectrum())) {
    throw ShapeError(std::string(what) + ": fields live on different spectra");
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_spectrum(*this, other, "operator+=");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_spectrum(*this, other, "operator-=");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

bool SpectralField::all_finite() const {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

double dot(const SpectralField& a, const SpectralField& b) {
  require_same_spectrum(a, b, "dot");
  const auto x = a.coeffs();
  const auto y = b.coeffs();
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double norm(const SpectralField& a) { return std::sqrt(dot(a, a)); }

SpectralField restrict_to(const SpectralField& f, const SpectrumPtr& target) {
  const OperatorSpectrum& src = f.spectrum();
  if (src.dimension() != target->dimension() || target->cutoff() > src.cutoff()) {
    throw ShapeError("restrict_to: target spectrum is not a sub-spectrum");
  }
  SpectralField out(target);
  for (std::size_t k = 0; k < target->size(); ++k) {
    out[k] = f[src.flat_index(target->multi_index(k))];
  }
  return out;
}

SpectralField embed_into(const SpectralField& f, const SpectrumPtr& target) {
  const OperatorSpectrum& src = f.spectrum();
  if (src.dimension() != target->dimension() || target->cutoff() < src.cutoff()) {
    throw ShapeError("embed_into: target spectrum is smaller than the source");
  }
  SpectralField out(target);
  for (std::size_t k = 0; k < src.size(); ++k) {
    out[target->flat_index(src.multi_index(k))] = f[k];
  }
  return out;
}

GridField::GridField(int d_, int M_) : d(d_), M(M_) {
  std::size_t count = 1;
  for (int i = 0; i < d; ++i) count *= static_cast<std::size_t>(M);
  values.assign(count, 0.0);
}

double grid_mean(const GridField& g) {
  double s = 0.0;
  for (double v : g.values) s += v;
  return s / static_cast<double>(g.values.size());
}

}  // namespace chs
