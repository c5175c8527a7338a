#include "chs/noise.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "chs/errors.hpp"
#include "chs/operators.hpp"
#include "chs/rng.hpp"

namespace chs {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::array<double, 2> normal_pair(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key) {
  const auto x = philox4x32(counter, key);
  constexpr double kTwoPow53 = 1.0 / 9007199254740992.0;
  const std::uint64_t a = (static_cast<std::uint64_t>(x[0]) << 32 | x[1]) >> 11;
  const std::uint64_t b = (static_cast<std::uint64_t>(x[2]) << 32 | x[3]) >> 11;
  const double u1 = (static_cast<double>(a) + 1.0) * kTwoPow53;  // (0, 1]
  const double u2 = static_cast<double>(b) * kTwoPow53;          // [0, 1)
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

NoiseModel NoiseModel::white_noise(int d, bool q0_zero) {
  if (d != 1) throw ParameterError("noise: white noise requires d = 1, got d = " + std::to_string(d));
  return NoiseModel(NoiseKind::white, d, 0.0, q0_zero, 1.0);
}

NoiseModel NoiseModel::trace_class(int d, double s, bool q0_zero) {
  if (d < 1 || d > 3) throw ParameterError("noise: dimension must be 1, 2 or 3");
  if (!(s > d / 2.0)) {
    throw ParameterError("noise: trace-class exponent s must exceed d/2 for summable q_j");
  }
  return NoiseModel(NoiseKind::trace_class, d, s, q0_zero, 1.0);
}

NoiseModel NoiseModel::zero(int d) {
  if (d < 1 || d > 3) throw ParameterError("noise: dimension must be 1, 2 or 3");
  return NoiseModel(NoiseKind::trace_class, d, 0.0, true, 0.0);
}

double NoiseModel::gamma_max() const { return kind_ == NoiseKind::white ? 1.5 : 2.0; }

double NoiseModel::gamma_floor() const { return kind_ == NoiseKind::white ? 1.0 : 1.0 + d_ / 4.0; }

bool NoiseModel::admissible_gamma(double gamma) const { return gamma > gamma_floor() && gamma < gamma_max(); }

std::vector<double> NoiseModel::variances(const OperatorSpectrum& spectrum) const {
  if (spectrum.dimension() != d_) throw ShapeError("noise: model and spectrum dimensions differ");
  std::vector<double> q(spectrum.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (scale_ == 0.0) {
      q[k] = 0.0;
    } else if (kind_ == NoiseKind::white) {
      q[k] = 1.0;
    } else {
      q[k] = scale_ * std::pow(1.0 + spectrum.lambda(k), -s_);
    }
  }
  if (q0_zero_) q[0] = 0.0;
  return q;
}

std::uint32_t mode_code(const MultiIndex& j, int d) {
  switch (d) {
    case 1:
      return static_cast<std::uint32_t>(j[0]);
    case 2:
      if (j[0] >= (1 << 16) || j[1] >= (1 << 16)) throw ParameterError("noise: cutoff too large for d = 2");
      return static_cast<std::uint32_t>(j[0]) | static_cast<std::uint32_t>(j[1]) << 16;
    default:
      if (j[0] >= (1 << 10) || j[1] >= (1 << 10) || j[2] >= (1 << 10)) {
        throw ParameterError("noise: cutoff too large for d = 3");
      }
      return static_cast<std::uint32_t>(j[0]) | static_cast<std::uint32_t>(j[1]) << 10 |
             static_cast<std::uint32_t>(j[2]) << 20;
  }
}

SpectralField standard_normals(const SpectrumPtr& spectrum, const RngStream& stream) {
  if (stream.step > std::numeric_limits<std::uint32_t>::max()) throw ParameterError("noise: step index overflow");
  const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(stream.master_seed),
                                         static_cast<std::uint32_t>(stream.master_seed >> 32)};
  const int d = spectrum->dimension();
  SpectralField out(spectrum);
  // Two modes share one Philox block; consecutive flat indices usually do too.
  std::uint32_t cached_block = std::numeric_limits<std::uint32_t>::max();
  std::array<double, 2> pair{};
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::uint32_t code = mode_code(spectrum->multi_index(k), d);
    const std::uint32_t block = code >> 1;
    if (block != cached_block) {
      pair = normal_pair({block, static_cast<std::uint32_t>(stream.step), static_cast<std::uint32_t>(stream.sample),
                          static_cast<std::uint32_t>(stream.sample >> 32)},
                         key);
      cached_block = block;
    }
    out[k] = pair[code & 1u];
  }
  return out;
}

NoiseSampler::NoiseSampler(const NoiseModel& model, SpectrumPtr spectrum)
    : spectrum_(std::move(spectrum)), q_(model.variances(*spectrum_)), sqrt_q_(q_.size()) {
  for (std::size_t k = 0; k < q_.size(); ++k) sqrt_q_[k] = std::sqrt(q_[k]);
}

SpectralField NoiseSampler::increment(double dt, const RngStream& stream) const {
  if (!(dt > 0.0)) throw ParameterError("sample_increment: step must be > 0");
  SpectralField xi = standard_normals(spectrum_, stream);
  const double sdt = std::sqrt(dt);
  for (std::size_t k = 0; k < xi.size(); ++k) xi[k] *= sqrt_q_[k] * sdt;
  return xi;
}

SpectralField sample_increment(const NoiseModel& model, const SpectrumPtr& spectrum, double dt,
                               const RngStream& stream) {
  return NoiseSampler(model, spectrum).increment(dt, stream);
}

SpectralField step_Ztilde(const SpectralField& z, const SpectralField& dW, double dt) {
  return semigroup_apply(z + dW, dt);
}

}  // namespace chs
