#include "chs/transform.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

#include "chs/errors.hpp"

#ifdef CHS_HAVE_FFTW
#include <fftw3.h>
#endif

namespace chs {
namespace {

// c(j) cos(j π (k+½)/M) for k < M, j ≤ N, row-major in k.
class CosineTable {
 public:
  CosineTable(int M, int N) : M_(M), N_(N), table_(static_cast<std::size_t>(M) * (N + 1)) {
    for (int k = 0; k < M; ++k) {
      for (int j = 0; j <= N; ++j) {
        // Reduce the integer phase j(2k+1) mod 4M before scaling by π/(2M).
        const long long phase = (static_cast<long long>(j) * (2 * k + 1)) % (4LL * M);
        const double c = j == 0 ? 1.0 : std::numbers::sqrt2;
        table_[static_cast<std::size_t>(k) * (N + 1) + j] =
            c * std::cos(std::numbers::pi * static_cast<double>(phase) / (2.0 * M));
      }
    }
  }
  double at(int k, int j) const { return table_[static_cast<std::size_t>(k) * (N_ + 1) + j]; }
  int M() const { return M_; }
  int N() const { return N_; }

 private:
  int M_;
  int N_;
  std::vector<double> table_;
};

std::shared_ptr<const CosineTable> cosine_table(int M, int N) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const CosineTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{M, N}];
  if (!slot) slot = std::make_shared<const CosineTable>(M, N);
  return slot;
}

// Applies the per-axis map out[..., r, ...] = Σ_c weight(r, c) in[..., c, ...]
// along `axis` of a tensor stored first-axis fastest.
template <class Weight>
std::vector<double> apply_axis(const std::vector<double>& in, std::vector<int>& dims, int axis, int out_n,
                               Weight weight) {
  std::size_t inner = 1;
  for (int a = 0; a < axis; ++a) inner *= static_cast<std::size_t>(dims[a]);
  std::size_t outer = 1;
  for (std::size_t a = axis + 1; a < dims.size(); ++a) outer *= static_cast<std::size_t>(dims[a]);
  const int in_n = dims[axis];
  std::vector<double> out(inner * out_n * outer, 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    for (int r = 0; r < out_n; ++r) {
      double* dst = out.data() + (o * out_n + r) * inner;
      for (int c = 0; c < in_n; ++c) {
        const double w = weight(r, c);
        const double* src = in.data() + (o * in_n + c) * inner;
        for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
      }
    }
  }
  dims[axis] = out_n;
  return out;
}

void check_grid_shape(int d, int M, const OperatorSpectrum& s) {
  if (d != s.dimension()) throw ShapeError("transform: grid and spectrum dimensions differ");
  if (M < s.cutoff() + 1) {
    throw ShapeError("transform: grid of " + std::to_string(M) + " points cannot resolve cutoff " +
                     std::to_string(s.cutoff()));
  }
}

GridField to_grid_direct(const SpectralField& f, int M) {
  const OperatorSpectrum& s = f.spectrum();
  const int d = s.dimension();
  const int N = s.cutoff();
  const auto table = cosine_table(M, N);
  std::vector<int> dims(d, N + 1);
  std::vector<double> data(f.coeffs().begin(), f.coeffs().end());
  for (int axis = 0; axis < d; ++axis) {
    data = apply_axis(data, dims, axis, M, [&](int k, int j) { return table->at(k, j); });
  }
  GridField g;
  g.d = d;
  g.M = M;
  g.values = std::move(data);
  return g;
}

SpectralField to_spectral_direct(const GridField& g, const SpectrumPtr& spectrum) {
  const int d = g.d;
  const int M = g.M;
  const int N = spectrum->cutoff();
  const auto table = cosine_table(M, N);
  const double inv_m = 1.0 / M;
  std::vector<int> dims(d, M);
  std::vector<double> data(g.values);
  for (int axis = 0; axis < d; ++axis) {
    data = apply_axis(data, dims, axis, N + 1, [&](int j, int k) { return table->at(k, j) * inv_m; });
  }
  return SpectralField(spectrum, std::move(data));
}

#ifdef CHS_HAVE_FFTW

// Calls fn(flat, grid_position, nonzero_axes) for every mode, walking the
// multi-index with a carry counter instead of dividing per mode.
template <class Fn>
void for_each_mode(const OperatorSpectrum& s, int M, Fn fn) {
  const int d = s.dimension();
  const int n = s.cutoff() + 1;
  MultiIndex j{0, 0, 0};
  for (std::size_t k = 0; k < s.size(); ++k) {
    std::size_t pos = 0;
    std::size_t stride = 1;
    int nonzero = 0;
    for (int axis = 0; axis < d; ++axis) {
      pos += static_cast<std::size_t>(j[axis]) * stride;
      stride *= static_cast<std::size_t>(M);
      nonzero += j[axis] != 0;
    }
    fn(k, pos, nonzero);
    for (int axis = 0; axis < d && ++j[axis] == n; ++axis) j[axis] = 0;
  }
}

double axis_scale(int nonzero, double factor) {
  double s = 1.0;
  for (int i = 0; i < nonzero; ++i) s *= factor;
  return s;
}

// In-place r2r plans, created once per (d, M, kind) and executed on caller
// buffers with fftw_execute_r2r, which is safe to call concurrently.
fftw_plan cosine_plan(int d, int M, fftw_r2r_kind kind) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  std::lock_guard lock(mutex);
  auto& plan = cache[{d, M, static_cast<int>(kind)}];
  if (!plan) {
    std::size_t count = 1;
    for (int i = 0; i < d; ++i) count *= static_cast<std::size_t>(M);
    double* scratch = fftw_alloc_real(count);
    std::vector<int> n(d, M);
    std::vector<fftw_r2r_kind> kinds(d, kind);
    plan = fftw_plan_r2r(d, n.data(), scratch, scratch, kinds.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (!plan) throw Error("transform: FFTW planning failed");
  }
  return plan;
}

GridField to_grid_fast(const SpectralField& f, int M) {
  const OperatorSpectrum& s = f.spectrum();
  const int d = s.dimension();
  GridField g(d, M);
  // REDFT01 computes X_0 + 2 Σ_{j≥1} X_j cos(...) per axis; the orthonormal
  // basis wants √2 on every nonzero axis mode, hence the 1/√2 scaling.
  for_each_mode(s, M, [&](std::size_t k, std::size_t pos, int nonzero) {
    g.values[pos] = f[k] * axis_scale(nonzero, std::numbers::sqrt2 / 2.0);
  });
  fftw_execute_r2r(cosine_plan(d, M, FFTW_REDFT01), g.values.data(), g.values.data());
  return g;
}

SpectralField to_spectral_fast(const GridField& g, const SpectrumPtr& spectrum) {
  const int d = g.d;
  const int M = g.M;
  std::vector<double> work(g.values);
  fftw_execute_r2r(cosine_plan(d, M, FFTW_REDFT10), work.data(), work.data());
  SpectralField out(spectrum);
  const double base = 1.0 / (2.0 * M);
  const double lead = std::pow(base, d);
  for_each_mode(*spectrum, M, [&](std::size_t k, std::size_t pos, int nonzero) {
    out[k] = work[pos] * lead * axis_scale(nonzero, std::numbers::sqrt2);
  });
  return out;
}

#endif

bool use_fast(TransformBackend backend) {
  switch (backend) {
    case TransformBackend::direct:
      return false;
    case TransformBackend::fast:
      if (!fast_transform_available()) throw ParameterError("transform: fast backend not compiled in");
      return true;
    case TransformBackend::automatic:
      break;
  }
  return fast_transform_available();
}

}  // namespace

bool fast_transform_available() {
#ifdef CHS_HAVE_FFTW
  return true;
#else
  return false;
#endif
}

GridField to_grid(const SpectralField& f, int M, TransformBackend backend) {
  check_grid_shape(f.spectrum().dimension(), M, f.spectrum());
#ifdef CHS_HAVE_FFTW
  if (use_fast(backend)) return to_grid_fast(f, M);
#else
  use_fast(backend);
#endif
  return to_grid_direct(f, M);
}

SpectralField to_spectral(const GridField& g, const SpectrumPtr& spectrum, TransformBackend backend) {
  check_grid_shape(g.d, g.M, *spectrum);
  std::size_t expected = 1;
  for (int i = 0; i < g.d; ++i) expected *= static_cast<std::size_t>(g.M);
  if (g.values.size() != expected) throw ShapeError("to_spectral: grid value count mismatch");
#ifdef CHS_HAVE_FFTW
  if (use_fast(backend)) return to_spectral_fast(g, spectrum);
#else
  use_fast(backend);
#endif
  return to_spectral_direct(g, spectrum);
}

}  // namespace chs
