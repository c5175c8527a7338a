#include "chs/spectrum.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "chs/errors.hpp"

namespace chs {

double axis_eigenvalue(int j) {
  const double jj = static_cast<double>(j);
  return std::numbers::pi * std::numbers::pi * jj * jj;
}

OperatorSpectrum::OperatorSpectrum(int d, int N) : d_(d), N_(N) {
  if (d < 1 || d > 3) {
    throw ParameterError("spectrum: dimension must be 1, 2 or 3, got " + std::to_string(d));
  }
  if (N < 1) {
    throw ParameterError("spectrum: cutoff must be >= 1, got " + std::to_string(N));
  }
  std::size_t count = 1;
  for (int i = 0; i < d; ++i) count *= static_cast<std::size_t>(N + 1);
  lambdas_.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    // Sum of the squared components times π², i.e. the axis-sum rule.
    const MultiIndex j = multi_index(k);
    const double s = static_cast<double>(j[0]) * j[0] + static_cast<double>(j[1]) * j[1] +
                     static_cast<double>(j[2]) * j[2];
    lambdas_[k] = std::numbers::pi * std::numbers::pi * s;
  }
}

MultiIndex OperatorSpectrum::multi_index(std::size_t flat) const {
  MultiIndex j{0, 0, 0};
  const std::size_t n = static_cast<std::size_t>(N_ + 1);
  for (int axis = 0; axis < d_; ++axis) {
    j[axis] = static_cast<int>(flat % n);
    flat /= n;
  }
  return j;
}

std::size_t OperatorSpectrum::flat_index(const MultiIndex& j) const {
  const std::size_t n = static_cast<std::size_t>(N_ + 1);
  std::size_t flat = 0;
  for (int axis = d_ - 1; axis >= 0; --axis) {
    flat = flat * n + static_cast<std::size_t>(j[axis]);
  }
  return flat;
}

int OperatorSpectrum::max_component(std::size_t flat) const {
  const MultiIndex j = multi_index(flat);
  return std::max({j[0], j[1], j[2]});
}

double OperatorSpectrum::lambda_cutoff() const { return axis_eigenvalue(N_); }

std::vector<double> OperatorSpectrum::sorted_lambdas() const {
  std::vector<double> out(lambdas_);
  std::sort(out.begin(), out.end());
  return out;
}

SpectrumPtr build_spectrum(int d, int N) { return std::make_shared<const OperatorSpectrum>(d, N); }

}  // namespace chs
