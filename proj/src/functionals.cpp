#include "chs/functionals.hpp"

#include <cmath>

#include "chs/errors.hpp"

namespace chs {

namespace {

class ExpSquared final : public TestFunctional {
 public:
  std::string name() const override { return "exp_sq"; }

  double value(const SpectralField& x) const override { return std::exp(-dot(x, x)); }

  double first(const SpectralField& x, const SpectralField& h) const override {
    return -2.0 * std::exp(-dot(x, x)) * dot(x, h);
  }

  double second(const SpectralField& x, const SpectralField& h, const SpectralField& k) const override {
    return std::exp(-dot(x, x)) * (4.0 * dot(x, h) * dot(x, k) - 2.0 * dot(h, k));
  }
};

// ⟨g, x⟩ evaluated on the spectrum of x, so one instance serves every level
// of a coupled run.
class WeightedLinear : public TestFunctional {
 protected:
  static double project(const SpectralField& x) {
    const auto lambdas = x.spectrum().lambdas();
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] / (1.0 + lambdas[k]);
    return s;
  }
};

class Linear final : public WeightedLinear {
 public:
  std::string name() const override { return "linear"; }
  double value(const SpectralField& x) const override { return project(x); }
  double first(const SpectralField&, const SpectralField& h) const override { return project(h); }
  double second(const SpectralField&, const SpectralField&, const SpectralField&) const override { return 0.0; }
};

class Sine final : public WeightedLinear {
 public:
  std::string name() const override { return "sin"; }
  double value(const SpectralField& x) const override { return std::sin(project(x)); }
  double first(const SpectralField& x, const SpectralField& h) const override {
    return std::cos(project(x)) * project(h);
  }
  double second(const SpectralField& x, const SpectralField& h, const SpectralField& k) const override {
    return -std::sin(project(x)) * project(h) * project(k);
  }
};

}  // namespace

SpectralField smoothing_weights(const SpectrumPtr& spectrum) {
  SpectralField g(spectrum);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = 1.0 / (1.0 + spectrum->lambda(k));
  return g;
}

FunctionalPtr make_exp_sq() { return std::make_shared<ExpSquared>(); }

FunctionalPtr make_linear() { return std::make_shared<Linear>(); }

FunctionalPtr make_sin() { return std::make_shared<Sine>(); }

FunctionalPtr make_functional(const std::string& name) {
  if (name == "exp_sq") return make_exp_sq();
  if (name == "linear") return make_linear();
  if (name == "sin") return make_sin();
  throw ParameterError("unknown test functional '" + name + "' (expected exp_sq, linear or sin)");
}

}  // namespace chs
