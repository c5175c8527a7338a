#include "chs/nonlinearity.hpp"

#include <string>

#include "chs/errors.hpp"
#include "chs/operators.hpp"

namespace chs {

int dealiased_points(int N) { return 2 * (N + 1); }

void require_dealiased(const OperatorSpectrum& s, int Mq) {
  if (Mq < dealiased_points(s.cutoff())) {
    throw ParameterError("nonlinearity: Mq = " + std::to_string(Mq) + " is below the dealiasing threshold " +
                         std::to_string(dealiased_points(s.cutoff())));
  }
}

GridField eval_F_grid(const GridField& g) {
  GridField out(g);
  for (double& v : out.values) v = v * v * v - v;
  return out;
}

SpectralField galerkin_F(const SpectralField& x, int Mq) {
  require_dealiased(x.spectrum(), Mq);
  return to_spectral(eval_F_grid(to_grid(x, Mq)), x.spectrum_ptr());
}

SpectralField apply_Fprime(const SpectralField& x, const SpectralField& h, int Mq) {
  require_same_spectrum(x, h, "apply_Fprime");
  require_dealiased(x.spectrum(), Mq);
  GridField xg = to_grid(x, Mq);
  const GridField hg = to_grid(h, Mq);
  for (std::size_t i = 0; i < xg.size(); ++i) {
    const double v = xg.values[i];
    xg.values[i] = (3.0 * v * v - 1.0) * hg.values[i];
  }
  return to_spectral(xg, x.spectrum_ptr());
}

SpectralField apply_Fsecond(const SpectralField& x, const SpectralField& h, const SpectralField& k, int Mq) {
  require_same_spectrum(x, h, "apply_Fsecond");
  require_same_spectrum(x, k, "apply_Fsecond");
  require_dealiased(x.spectrum(), Mq);
  GridField xg = to_grid(x, Mq);
  const GridField hg = to_grid(h, Mq);
  const GridField kg = to_grid(k, Mq);
  for (std::size_t i = 0; i < xg.size(); ++i) xg.values[i] = 6.0 * xg.values[i] * hg.values[i] * kg.values[i];
  return to_spectral(xg, x.spectrum_ptr());
}

double l4_norm_pow4(const SpectralField& x, int Mq) {
  require_dealiased(x.spectrum(), Mq);
  GridField g = to_grid(x, Mq);
  for (double& v : g.values) v = v * v * v * v;
  return grid_mean(g);
}

double eval_energy(const SpectralField& x, int Mq) {
  const double l2sq = dot(x, x);
  const double semi1 = seminorm_alpha(x, 1.0);
  const double h1sq = l2sq + semi1 * semi1;
  return 0.5 * h1sq + 0.25 * l4_norm_pow4(x, Mq) - 0.5 * l2sq;
}

}  // namespace chs
