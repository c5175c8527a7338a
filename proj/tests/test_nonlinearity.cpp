#include <doctest.h>

#include <cmath>

#include "chs/errors.hpp"
#include "chs/nonlinearity.hpp"
#include "chs/operators.hpp"
#include "chs/regression.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace chs;

namespace {

double l4_oracle(const SpectralField& x) {
  const int M = 16 * (x.spectrum().cutoff() + 1);
  const auto v = oracle::synthesize(x, M);
  long double s = 0.0L;
  for (auto y : v) s += y * y * y * y;
  return static_cast<double>(s / v.size());
}

}  // namespace

TEST_CASE("eval_F_grid") {
  GridField g(1, 4);
  for (double c : {0.0, 1.0, 2.0, -1.0}) {
    for (auto& v : g.values) v = c;
    for (double v : eval_F_grid(g).values) CHECK(v == c * c * c - c);
  }
}

TEST_CASE("galerkin_F: constants, dealiasing and oversampled oracle") {
  auto s = build_spectrum(1, 8);
  for (double c : {0.3, 1.0, 2.0}) {
    SpectralField x(s);
    x[0] = c;
    const auto f = galerkin_F(x, dealiased_points(8));
    CHECK(f[0] == doctest::Approx(c * c * c - c).epsilon(1e-14));
    for (std::size_t k = 1; k < f.size(); ++k) CHECK(std::abs(f[k]) < 1e-14);
  }
  CHECK_THROWS_AS(galerkin_F(SpectralField(s), 2 * 9 - 1), ParameterError);

  std::mt19937_64 rng(11);
  for (int d = 1; d <= 2; ++d) {
    auto sp = build_spectrum(d, d == 1 ? 12 : 5);
    std::vector<SpectralField> xs = {SpectralField::basis(sp, {1, 0, 0}), testutil::random_field(sp, rng, 0.3)};
    for (const auto& x : xs) {
      const auto ref = oracle::galerkin_F_dense(x, 16);
      double scale = 0.0;
      for (auto r : ref) scale = std::max(scale, static_cast<double>(std::abs(r)));
      for (int factor : {2, 4}) {
        const auto f = galerkin_F(x, factor * (sp->cutoff() + 1));
        double err = 0.0;
        for (std::size_t k = 0; k < f.size(); ++k) err = std::max(err, std::abs(f[k] - static_cast<double>(ref[k])));
        CHECK(err <= 1e-12 * std::max(1.0, scale));
      }
    }
  }
}

TEST_CASE("galerkin_F: ⟨F(y), y⟩ = ‖y‖_L4^4 - ‖y‖²") {
  std::mt19937_64 rng(12);
  for (int d = 1; d <= 3; ++d) {
    auto s = build_spectrum(d, d == 3 ? 4 : 10);
    for (int trial = 0; trial < 5; ++trial) {
      const auto y = testutil::random_field(s, rng, 0.2);
      const int Mq = 4 * (s->cutoff() + 1);
      const double lhs = dot(galerkin_F(y, Mq), y);
      const double rhs = l4_norm_pow4(y, Mq) - dot(y, y);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(std::abs(rhs), 1.0));
    }
  }
}

TEST_CASE("drift is mean-free") {
  std::mt19937_64 rng(13);
  for (int d = 1; d <= 3; ++d) {
    auto s = build_spectrum(d, 4);
    const auto x = testutil::random_field(s, rng, 0.0);
    CHECK(apply_A_power(galerkin_F(x, 4 * 5), 1.0)[0] == 0.0);
  }
}

TEST_CASE("apply_Fprime and apply_Fsecond") {
  std::mt19937_64 rng(14);
  auto s = build_spectrum(1, 16);
  const int Mq = 4 * 17;
  const auto h = testutil::random_field(s, rng, 0.0);
  const auto k = testutil::random_field(s, rng, 0.0);
  const auto minus_h = apply_Fprime(SpectralField(s), h, Mq);
  CHECK(testutil::max_abs_diff(minus_h, -1.0 * h) < 1e-14);

  auto x = testutil::random_field(s, rng, 0.5);
  x *= 0.1;
  const auto exact = apply_Fprime(x, h, Mq);
  std::vector<LogLogPoint> pts;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const auto fd = (1.0 / (2.0 * eps)) * (galerkin_F(x + eps * h, Mq) - galerkin_F(x - eps * h, Mq));
    pts.push_back({eps, norm(fd - exact), 0.0});
  }
  CHECK(fit_loglog(pts).slope == doctest::Approx(2.0).epsilon(0.05));

  const auto hk = apply_Fsecond(x, h, k, Mq);
  const auto kh = apply_Fsecond(x, k, h, Mq);
  CHECK(testutil::max_abs_diff(hk, kh) <= 1e-13 * testutil::max_abs(hk));
  // D(F'(x)h).k = F''(x)(h, k); F' is quadratic in x so the central
  // difference is exact up to rounding.
  const double eps = 1e-3;
  const auto fd2 = (1.0 / (2.0 * eps)) * (apply_Fprime(x + eps * k, h, Mq) - apply_Fprime(x - eps * k, h, Mq));
  CHECK(testutil::max_abs_diff(fd2, hk) <= 1e-9 * testutil::max_abs(hk));
  CHECK_THROWS_AS(apply_Fprime(x, SpectralField(build_spectrum(1, 8)), Mq), ShapeError);
}

TEST_CASE("eval_energy") {
  auto s = build_spectrum(2, 6);
  const int Mq = 4 * 7;
  CHECK(eval_energy(SpectralField(s), Mq) == 0.0);
  SpectralField one(s);
  one[0] = 1.0;
  CHECK(eval_energy(one, Mq) == doctest::Approx(0.25).epsilon(1e-15));

  std::mt19937_64 rng(15);
  for (int d = 1; d <= 2; ++d) {
    auto sp = build_spectrum(d, 6);
    const auto x = testutil::random_field(sp, rng, 0.3);
    const double semi = seminorm_alpha(x, 1.0);
    const double oracle = 0.5 * (dot(x, x) + semi * semi) + 0.25 * l4_oracle(x) - 0.5 * dot(x, x);
    CHECK(std::abs(eval_energy(x, 4 * 7) - oracle) <= 1e-10 * std::abs(oracle));
  }
}

TEST_CASE("one-sided bound with ε = 1/2 holds at a fitted constant") {
  std::mt19937_64 rng(16);
  auto s = build_spectrum(1, 12);
  const int Mq = 4 * 13;
  auto excess = [&](const SpectralField& y, const SpectralField& z) {
    const double lhs = std::abs(dot(galerkin_F(y + z, Mq) - galerkin_F(y, Mq), y));
    return (lhs - 0.5 * l4_norm_pow4(y, Mq)) / (1.0 + l4_norm_pow4(z, Mq));
  };
  std::uniform_real_distribution<double> amp(-2.0, 2.0);
  double c_fit = 0.0;
  for (int i = 0; i < 200; ++i) {
    auto y = testutil::random_field(s, rng, 0.5);
    auto z = testutil::random_field(s, rng, 0.5);
    y *= std::pow(10.0, amp(rng));
    z *= std::pow(10.0, amp(rng));
    c_fit = std::max(c_fit, excess(y, z));
  }
  MESSAGE("fitted C_eps = " << c_fit);
  CHECK(std::isfinite(c_fit));
  int violations = 0;
  for (int i = 0; i < 200; ++i) {
    auto y = testutil::random_field(s, rng, 0.5);
    auto z = testutil::random_field(s, rng, 0.5);
    y *= std::pow(10.0, amp(rng));
    z *= std::pow(10.0, amp(rng));
    violations += excess(y, z) > 2.0 * c_fit;
  }
  CHECK(violations == 0);
}

TEST_CASE("polynomial growth of ‖F(x)‖_γ at γ = 1.2") {
  std::mt19937_64 rng(17);
  auto s = build_spectrum(1, 16);
  const int Mq = 4 * 17;
  double max_ratio = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto base = testutil::random_field(s, rng, 1.0);
    for (double a = 1e-2; a <= 1e3; a *= 10.0) {
      const auto x = a * base;
      const double r = norm_alpha(galerkin_F(x, Mq), 1.2) / (1.0 + std::pow(norm_alpha(x, 1.2), 3.0));
      max_ratio = std::max(max_ratio, r);
    }
    const auto big = 1e3 * base;
    const auto bigger = 1e4 * base;
    const double r3 = norm_alpha(galerkin_F(big, Mq), 1.2) / (1.0 + std::pow(norm_alpha(big, 1.2), 3.0));
    const double r4 = norm_alpha(galerkin_F(bigger, Mq), 1.2) / (1.0 + std::pow(norm_alpha(bigger, 1.2), 3.0));
    CHECK(r4 <= 1.01 * r3);
  }
  MESSAGE("max ||F(x)||_1.2 / (1 + ||x||_1.2^3) = " << max_ratio);
  CHECK(std::isfinite(max_ratio));
}
