#include "pseudospec/presets.hpp"

#include <cmath>

#include "pseudospec/errors.hpp"

namespace pseudospec {

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = {
      {"example1", "exp(-x^2)", 0.0, 0.0, 0.0, -6.0, 6.0, true},
      // beta = -1/4 reproduces the printed Hamiltonian -2i cosh x - sinh^2 x
      {"example2", "sinh(x)", 1.0, -0.25, -1.0, -4.0, 4.0, false},
      {"example3", "tanh(x)", 1.0, 0.0, -1.0, -12.0, 12.0, false},
  };
  return table;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw ConfigError("unknown preset '" + std::string(name) +
                    "' (expected example1, example2 or example3)");
}

ModelSpec preset_spec(const Preset& p, std::optional<double> alpha,
                      std::optional<double> e_imag, std::optional<double> beta) {
  if (!p.alpha_configurable && (alpha || e_imag))
    throw ConfigError("preset " + p.name + " pins alpha and e_imag");
  ModelSpec spec;
  spec.g = parse(p.g_source);
  spec.alpha = p.alpha;
  spec.beta = beta.value_or(p.beta);
  spec.e_imag = p.e_imag;
  if (alpha || e_imag) {
    if (e_imag && !alpha) {
      spec.alpha = *e_imag * *e_imag;
      spec.e_imag = e_imag;
    } else {
      spec.alpha = *alpha;
      if (e_imag) {
        if (std::fabs(*e_imag * *e_imag - *alpha) > kKernelConsistencyTol)
          throw ConfigError("e_imag^2 must equal alpha");
        spec.e_imag = e_imag;
      } else if (*alpha > 0.0) {
        spec.e_imag = -std::sqrt(*alpha);
      } else if (*alpha == 0.0) {
        spec.e_imag = 0.0;
      } else {
        spec.e_imag.reset();
      }
    }
  }
  return spec;
}

std::complex<double> example1_potential(double x, double alpha, double beta,
                                        double im_sign) {
  const double x2 = x * x;
  const double re = x2 + 0.25 * alpha * std::exp(2.0 * x2) - std::exp(-2.0 * x2) +
                    beta - 1.0;
  return {re, im_sign * 4.0 * x * std::exp(-x2)};
}

std::complex<double> example2_potential(double x) {
  const double s = std::sinh(x);
  return {-s * s, -2.0 * std::cosh(x)};
}

std::complex<double> example3_potential(double x, double beta) {
  const double c = std::cosh(x);
  const double sech2 = 1.0 / (c * c);
  return std::complex<double>(0.25, -2.0) * sech2 + beta - 0.75;
}

}  // namespace pseudospec
