#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pseudospec/model.hpp"

namespace pseudospec {

// Built-in generating functions with their pinned parameters and default
// working domain.
struct Preset {
  std::string name;
  std::string g_source;
  double alpha;
  double beta;
  std::optional<double> e_imag;
  double x_min, x_max;
  // Only example1 leaves alpha (and the sign of e_imag) to the caller.
  bool alpha_configurable;
};

const std::vector<Preset>& presets();

// Throws ConfigError for unknown names.
const Preset& find_preset(std::string_view name);

// Spec for a preset. For example1, alpha and e_imag may be overridden; when
// only alpha is given and alpha > 0, e_imag defaults to -sqrt(alpha).
ModelSpec preset_spec(const Preset& p, std::optional<double> alpha = {},
                      std::optional<double> e_imag = {},
                      std::optional<double> beta = {});

// Closed-form potentials as printed for the three examples.
//   example1: x^2 + (alpha/4) e^{2x^2} - e^{-2x^2} + im_sign*4i x e^{-x^2} + beta - 1
//             (printed with im_sign = -1; the construction gives +1)
//   example2: -2i cosh x - sinh^2 x (beta = -1/4 absorbed)
//   example3: -(2i - 1/4)/cosh^2 x + beta - 3/4
std::complex<double> example1_potential(double x, double alpha, double beta,
                                        double im_sign);
std::complex<double> example2_potential(double x);
std::complex<double> example3_potential(double x, double beta);

}  // namespace pseudospec
