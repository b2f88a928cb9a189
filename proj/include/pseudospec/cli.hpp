#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "pseudospec/grid.hpp"
#include "pseudospec/model.hpp"

namespace pseudospec {

enum class OutputFormat { Csv, Json };

struct RunConfig {
  std::optional<std::string> g_source;
  std::optional<std::string> preset;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> e_imag;
  std::optional<double> x_min;
  std::optional<double> x_max;
  std::optional<std::size_t> n;
  std::size_t interior_margin = 2;
  double im_threshold = 1e-2;
  double energy_ceiling = 5.0;
  OutputFormat format = OutputFormat::Json;
  // Empty: write to the stream handed to the run_* function.
  std::string output_path;
};

inline constexpr std::size_t kDefaultPoints = 1601;
inline constexpr const char* kSchemaVersion = "pseudospec/1";

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfig = 2,
  kExitConstruction = 3,
  kExitSolver = 4,
};

struct ResolvedConfig {
  ModelSpec spec;
  Grid grid;
  std::string label;  // preset name or g source
};

// Validates the config and builds spec and grid. Throws ConfigError or
// ParseError.
ResolvedConfig resolve(const RunConfig& cfg);

// e_imag to use for f and phi: ModelSpec::e_imag when set, otherwise -sqrt(alpha)
// or +sqrt(alpha), whichever gives a regular f. Empty when alpha < 0 or
// neither sign is regular.
std::optional<double> resolve_kernel(const ModelSpec& spec, const Grid& grid);

// Subcommands. Reports go to cfg.output_path or `out`; diagnostics to `err`.
// The return value is the process exit code.
int run_construct(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_classify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace pseudospec
