#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "pseudospec/cli.hpp"

namespace {

using pseudospec::OutputFormat;
using pseudospec::RunConfig;

void add_model_options(CLI::App& cmd, RunConfig& cfg) {
  auto* preset = cmd.add_option("--preset", cfg.preset,
                                "Built-in model: example1, example2 or example3");
  auto* g = cmd.add_option("--g", cfg.g_source, "Generating function g(x), e.g. \"tanh(x)\"");
  preset->excludes(g);
  cmd.add_option("--alpha", cfg.alpha, "Integration constant alpha");
  cmd.add_option("--beta", cfg.beta, "Real energy shift beta");
  cmd.add_option("--ei", cfg.e_imag, "Imaginary part E_i of the kernel eigenvalue");
  cmd.add_option("--xmin", cfg.x_min, "Left end of the box");
  cmd.add_option("--xmax", cfg.x_max, "Right end of the box");
  cmd.add_option("--n", cfg.n, "Number of grid points (odd, including the ends)");
  cmd.add_option("--margin", cfg.interior_margin,
                 "Nodes excluded at each end when measuring residuals")
      ->capture_default_str();
  cmd.add_option("--format", cfg.format, "Output format: json or csv")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, OutputFormat>{{"json", OutputFormat::Json},
                                              {"csv", OutputFormat::Csv}},
          CLI::ignore_case));
  cmd.add_option("--out", cfg.output_path, "Write the report to this file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-Hermitian Hamiltonians from a real generating function g(x)"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto* construct = app.add_subcommand("construct", "Sample V(x), f(x) and the kernel state");
  auto* verify = app.add_subcommand("verify", "Check identities and discretized relations");
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of the discretized Hamiltonian");
  auto* classify = app.add_subcommand("classify", "Reality verdict from the alpha trichotomy");
  for (auto* cmd : {construct, verify, spectrum, classify}) add_model_options(*cmd, cfg);
  spectrum->add_option("--im-threshold", cfg.im_threshold,
                       "Eigenvalues with |Im| above this are reported as complex")
      ->capture_default_str();
  spectrum->add_option("--ceiling", cfg.energy_ceiling,
                       "Only eigenvalues with Re below this are classified")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pseudospec::kExitConfig;
  }

  if (*construct) return pseudospec::run_construct(cfg, std::cout, std::cerr);
  if (*verify) return pseudospec::run_verify(cfg, std::cout, std::cerr);
  if (*spectrum) return pseudospec::run_spectrum(cfg, std::cout, std::cerr);
  return pseudospec::run_classify(cfg, std::cout, std::cerr);
}
