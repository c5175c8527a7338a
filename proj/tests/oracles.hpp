#pragma once

// Independent reference computations for the test suites. Nothing here
// calls the library's transforms or steppers.

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "chs/field.hpp"

namespace oracle {

/// ∫₀^dt e^{-sμ} ds = dt ∫₀¹ e^{-u v} dv with u = dtμ, by adaptive
/// Gauss-Kronrod in long double. The unit interval keeps the integral O(1)
/// so the relative tolerance is reachable.
inline double phi1_quadrature(double mu, double dt) {
  using boost::math::quadrature::gauss_kronrod;
  const long double u = static_cast<long double>(mu) * dt;
  auto f = [u](long double v) { return std::exp(-u * v); };
  long double err = 0;
  const long double v = gauss_kronrod<long double, 61>::integrate(f, 0.0L, 1.0L, 15, 1e-16L, &err);
  return static_cast<double>(v * dt);
}

/// Basis function value c(j)cos(jπx) per axis, long double.
inline long double basis_1d(int j, long double x) {
  if (j == 0) return 1.0L;
  return std::sqrt(2.0L) * std::cos(static_cast<long double>(j) * std::numbers::pi_v<long double> * x);
}

/// Point values of f on the M-point midpoint grid by direct summation.
inline std::vector<long double> synthesize(const chs::SpectralField& f, int M) {
  const auto& s = f.spectrum();
  const int d = s.dimension();
  std::size_t points = 1;
  for (int a = 0; a < d; ++a) points *= static_cast<std::size_t>(M);
  std::vector<long double> out(points, 0.0L);
  for (std::size_t p = 0; p < points; ++p) {
    std::size_t rem = p;
    long double xs[3] = {0, 0, 0};
    for (int a = 0; a < d; ++a) {
      xs[a] = (static_cast<long double>(rem % M) + 0.5L) / M;
      rem /= M;
    }
    long double v = 0.0L;
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (f[k] == 0.0) continue;
      const auto j = s.multi_index(k);
      long double b = f[k];
      for (int a = 0; a < d; ++a) b *= basis_1d(j[a], xs[a]);
      v += b;
    }
    out[p] = v;
  }
  return out;
}

/// Midpoint-quadrature coefficients of grid values onto `spectrum`.
inline std::vector<long double> analyze(const std::vector<long double>& values, int M,
                                        const chs::OperatorSpectrum& s) {
  const int d = s.dimension();
  std::vector<long double> out(s.size(), 0.0L);
  long double w = 1.0L;
  for (int a = 0; a < d; ++a) w /= M;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto j = s.multi_index(k);
    long double acc = 0.0L;
    for (std::size_t p = 0; p < values.size(); ++p) {
      std::size_t rem = p;
      long double b = values[p];
      for (int a = 0; a < d; ++a) {
        b *= basis_1d(j[a], (static_cast<long double>(rem % M) + 0.5L) / M);
        rem /= M;
      }
      acc += b;
    }
    out[k] = acc * w;
  }
  return out;
}

/// P_N F(x) on a grid of `factor`·(N+1) points per axis.
inline std::vector<long double> galerkin_F_dense(const chs::SpectralField& x, int factor) {
  const int M = factor * (x.spectrum().cutoff() + 1);
  auto v = synthesize(x, M);
  for (auto& y : v) y = y * y * y - y;
  return analyze(v, M, x.spectrum());
}

/// One tamed (or untamed) exponential Euler step, mode by mode in long
/// double, with the drift from galerkin_F above.
inline std::vector<double> tamed_step(const chs::SpectralField& x, const chs::SpectralField& dW, double dt,
                                      bool tamed, int factor = 4) {
  const auto pf = galerkin_F_dense(x, factor);
  long double n2 = 0.0L;
  for (auto p : pf) n2 += p * p;
  const long double tau = tamed ? 1.0L / (1.0L + dt * std::sqrt(n2)) : 1.0L;
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const long double lam = x.spectrum().lambda(k);
    const long double mu = lam * lam;
    const long double decay = std::exp(-dt * mu);
    const long double phi = mu == 0.0L ? static_cast<long double>(dt) : -std::expm1(-dt * mu) / mu;
    out[k] = static_cast<double>(decay * x[k] - phi * lam * pf[k] * tau + decay * dW[k]);
  }
  return out;
}

/// Σ_{m=0}^{n-1} r^m for 0 ≤ r ≤ 1.
inline long double geometric(long double r, long double n) {
  if (r == 1.0L) return n;
  return -std::expm1(n * std::log(r)) / (1.0L - r);
}

/// Drift-free coupled pair for one mode: X_c after Kc coarse steps and X_f
/// after Kf = r·Kc fine steps on the same path, both from 0. Returns
/// Var(X_c - X_f), Var(X_c), Var(X_f) for increment variance q per unit time.
struct ModeVariances {
  long double diff;
  long double coarse;
  long double fine;
};

inline ModeVariances drift_free_variances(long double mu, long double q, long double T, int Kc, int Kf) {
  const long double dtf = T / Kf;
  const int r = Kf / Kc;
  ModeVariances v{0, 0, 0};
  // Fine increment m (0-based) lands in coarse step m / r.
  for (int m = 0; m < Kf; ++m) {
    const long double b = std::exp(-dtf * mu * (Kf - m));
    const long double a = std::exp(-dtf * r * mu * (Kc - m / r));
    v.diff += (a - b) * (a - b);
    v.coarse += a * a;
    v.fine += b * b;
  }
  v.diff *= q * dtf;
  v.coarse *= q * dtf;
  v.fine *= q * dtf;
  return v;
}

/// E exp(-‖X‖²) for independent Gaussian coordinates with the given means
/// and variances.
inline long double gaussian_exp_sq(const std::vector<long double>& mean, const std::vector<long double>& var) {
  long double log_e = 0.0L;
  for (std::size_t k = 0; k < mean.size(); ++k) {
    log_e += -0.5L * std::log1p(2.0L * var[k]) - mean[k] * mean[k] / (1.0L + 2.0L * var[k]);
  }
  return std::exp(log_e);
}

}  // namespace oracle
