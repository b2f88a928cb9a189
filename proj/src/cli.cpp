#include "pseudospec/cli.hpp"

#include <cfloat>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "pseudospec/eigen.hpp"
#include "pseudospec/errors.hpp"
#include "pseudospec/linop.hpp"
#include "pseudospec/presets.hpp"

namespace pseudospec {

using nlohmann::json;

namespace {

constexpr double kIdentityTol = 1e-8;
constexpr double kOrderMin = 1.7;
constexpr double kOrderMax = 2.3;
constexpr double kPtPotentialTol = 1e-12;
// Edge potential this far below the central minimum means the box walls,
// not the potential, confine the low-lying states.
constexpr double kTruncationMargin = 1.0;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json model_json(const ModelSpec& spec, const std::string& label) {
  json j{{"label", label},
         {"g", to_string(spec.g)},
         {"alpha", spec.alpha},
         {"beta", spec.beta}};
  j["e_imag"] = spec.e_imag ? json(*spec.e_imag) : json(nullptr);
  return j;
}

json grid_json(const Grid& g) {
  return json{{"x_min", g.x_min()},
              {"x_max", g.x_max()},
              {"n", g.size()},
              {"h", g.spacing()},
              {"interior_margin", g.interior_margin()}};
}

json header(const char* command) {
  return json{{"schema", kSchemaVersion}, {"command", command}};
}

// Writes to cfg.output_path when set, otherwise to `out`.
void emit(const RunConfig& cfg, std::ostream& out,
          const std::function<void(std::ostream&)>& writer) {
  if (cfg.output_path.empty()) {
    writer(out);
    return;
  }
  std::ofstream file(cfg.output_path);
  if (!file) throw ConfigError("cannot open output file " + cfg.output_path);
  writer(file);
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConstructionError& e) {
    err << "construction error: " << e.what() << '\n';
    return kExitConstruction;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const DimensionMismatch& e) {
    err << "construction error: " << e.what() << '\n';
    return kExitConstruction;
  } catch (const ZeroVector& e) {
    err << "construction error: " << e.what() << '\n';
    return kExitConstruction;
  }
}

// Kernel e_imag for f and phi. An explicit e_imag must be usable; a derived
// one may be absent.
std::optional<double> kernel_for(const ModelSpec& spec, const Grid& grid) {
  if (spec.e_imag) return spec.e_imag;
  return resolve_kernel(spec, grid);
}

std::vector<CVector> smooth_probes(const Grid& grid) {
  const double c = 0.5 * (grid.x_min() + grid.x_max());
  std::vector<CVector> probes(3, CVector(grid.size() - 2));
  for (std::size_t k = 0; k + 2 < grid.size(); ++k) {
    const double t = grid.x(k + 1) - c;
    const double wide = std::exp(-t * t / 4.0);
    probes[0][k] = wide;
    probes[1][k] = t * wide;
    probes[2][k] = std::sin(t) * std::exp(-t * t / 2.0);
  }
  return probes;
}

// Action residuals on one grid.
struct GridResiduals {
  ResidualReport pseudo_hermiticity;
  std::optional<ResidualReport> kernel, eigen;
};

GridResiduals residuals_on(const ModelSpec& spec, const Grid& grid) {
  const Model model(spec, grid);
  const SampledFields fields = sample_fields(model, grid);
  const ComplexMatrix H = discretize_hamiltonian(ComplexField(grid, fields.potential));
  const ComplexMatrix O = discretize_O(fields.f, fields.g, grid, false);
  const ComplexMatrix eta = build_eta(fields.f, fields.g, grid, EtaMode::Composed);

  GridResiduals r{pseudo_hermiticity_residual(H, eta, smooth_probes(grid), grid),
                  std::nullopt, std::nullopt};
  const KernelState kernel = candidate_eigenfunction(model, grid, grid.midpoint_index());
  r.kernel = ResidualReport{"O phi = 0", grid.spacing(), kernel_residual(O, kernel.phi), {}, {}};
  r.eigen = ResidualReport{"H phi = E phi", grid.spacing(),
                           eigen_residual(H, kernel.phi, kernel.energy), {}, {}};
  return r;
}

json residual_check(const std::string& name, const ResidualReport& coarse,
                    const ResidualReport& fine, bool& all_pass) {
  const ResidualReport c = convergence(coarse, fine);
  const bool pass = c.order && *c.order >= kOrderMin && *c.order <= kOrderMax;
  all_pass = all_pass && pass;
  return json{{"name", name},
              {"relation", coarse.relation},
              {"pass", pass},
              {"residual", finite_or_null(coarse.residual)},
              {"residual_fine", finite_or_null(fine.residual)},
              {"ratio", finite_or_null(c.ratio.value_or(NAN))},
              {"order", finite_or_null(c.order.value_or(NAN))}};
}

// Largest half-width around the domain centre on which |V| h^2 stays within
// the double-precision range of the kinetic stencil.
double representable_half_width(const Grid& grid, std::span<const cplx> v,
                                 double limit) {
  const std::size_t mid = grid.midpoint_index();
  std::size_t reach = 0;
  while (reach < mid && std::abs(v[mid - reach - 1]) <= limit &&
         std::abs(v[mid + reach + 1]) <= limit)
    ++reach;
  return static_cast<double>(reach) * grid.spacing();
}

bool truncation_dominated(const Grid& grid, std::span<const cplx> v) {
  const double c = 0.5 * (grid.x_min() + grid.x_max());
  const double quarter = 0.25 * (grid.x_max() - grid.x_min());
  double inner_min = INFINITY;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::fabs(grid.x(i) - c) <= quarter) inner_min = std::min(inner_min, v[i].real());
  const double edge = std::min(v.front().real(), v.back().real());
  return edge < inner_min - kTruncationMargin;
}

}  // namespace

// ---------------------------------------------------------------------------

ResolvedConfig resolve(const RunConfig& cfg) {
  if (cfg.preset && cfg.g_source)
    throw ConfigError("--preset and --g are mutually exclusive");
  if (!cfg.preset && !cfg.g_source)
    throw ConfigError("one of --preset or --g is required");
  if (!(cfg.im_threshold > 0.0)) throw ConfigError("im_threshold must be positive");

  ModelSpec spec;
  std::string label;
  double x_min = -10.0, x_max = 10.0;
  if (cfg.preset) {
    const Preset& p = find_preset(*cfg.preset);
    spec = preset_spec(p, cfg.alpha, cfg.e_imag, cfg.beta);
    label = p.name;
    x_min = p.x_min;
    x_max = p.x_max;
  } else {
    spec.g = parse(*cfg.g_source);
    spec.beta = cfg.beta.value_or(0.0);
    spec.e_imag = cfg.e_imag;
    if (cfg.alpha) {
      spec.alpha = *cfg.alpha;
      if (cfg.e_imag &&
          std::fabs(*cfg.e_imag * *cfg.e_imag - *cfg.alpha) > kKernelConsistencyTol)
        throw ConfigError("e_imag^2 must equal alpha");
    } else if (cfg.e_imag) {
      spec.alpha = *cfg.e_imag * *cfg.e_imag;
    }
    label = *cfg.g_source;
  }
  Grid grid(cfg.x_min.value_or(x_min), cfg.x_max.value_or(x_max),
            cfg.n.value_or(kDefaultPoints), cfg.interior_margin);
  return {std::move(spec), grid, std::move(label)};
}

std::optional<double> resolve_kernel(const ModelSpec& spec, const Grid& grid) {
  if (spec.e_imag) {
    if (std::fabs(*spec.e_imag * *spec.e_imag - spec.alpha) > kKernelConsistencyTol)
      return std::nullopt;
    return spec.e_imag;
  }
  if (spec.alpha < 0.0) return std::nullopt;
  const Model model(spec, grid);
  const double root = std::sqrt(spec.alpha);
  if (model.superpotential_regular(-root)) return -root;
  if (model.superpotential_regular(root)) return root;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

int run_construct(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ResolvedConfig rc = resolve(cfg);
    const Grid& grid = rc.grid;
    ModelSpec spec = rc.spec;
    const std::optional<double> ei = kernel_for(spec, grid);
    if (ei) {
      spec.e_imag = ei;
      spec.alpha = rc.spec.e_imag ? spec.alpha : *ei * *ei;
    }
    const Model model(spec, grid);
    const std::size_t n = grid.size();
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = model.potential(grid.x(i));
    std::vector<double> f;
    std::optional<KernelState> kernel;
    if (ei) {
      f.resize(n);
      for (std::size_t i = 0; i < n; ++i) f[i] = model.superpotential(grid.x(i));
      kernel = candidate_eigenfunction(model, grid, grid.midpoint_index());
    }

    emit(cfg, out, [&](std::ostream& os) {
      if (cfg.format == OutputFormat::Csv) {
        os << "x,re_V,im_V";
        if (kernel) os << ",f,re_phi,im_phi";
        os << '\n';
        for (std::size_t i = 0; i < n; ++i) {
          os << fmt17(grid.x(i)) << ',' << fmt17(v[i].real()) << ',' << fmt17(v[i].imag());
          if (kernel)
            os << ',' << fmt17(f[i]) << ',' << fmt17(kernel->phi.values[i].real()) << ','
               << fmt17(kernel->phi.values[i].imag());
          os << '\n';
        }
        return;
      }
      json j = header("construct");
      j["model"] = model_json(spec, rc.label);
      j["grid"] = grid_json(grid);
      json samples;
      samples["x"] = grid.points();
      std::vector<double> re(n), im(n);
      for (std::size_t i = 0; i < n; ++i) {
        re[i] = v[i].real();
        im[i] = v[i].imag();
      }
      samples["re_V"] = re;
      samples["im_V"] = im;
      if (kernel) {
        samples["f"] = f;
        for (std::size_t i = 0; i < n; ++i) {
          re[i] = kernel->phi.values[i].real();
          im[i] = kernel->phi.values[i].imag();
        }
        samples["re_phi"] = re;
        samples["im_phi"] = im;
        j["energy"] = complex_json(kernel->energy);
      } else {
        j["energy"] = nullptr;
      }
      j["samples"] = std::move(samples);
      os << j.dump(2) << '\n';
    });
    return static_cast<int>(kExitOk);
  });
}

int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ResolvedConfig rc = resolve(cfg);
    const Grid& grid = rc.grid;
    ModelSpec spec = rc.spec;
    const std::optional<double> ei = kernel_for(spec, grid);
    bool all_pass = true;
    json checks = json::array();

    if (ei) {
      spec.e_imag = ei;
      if (!rc.spec.e_imag) spec.alpha = *ei * *ei;
      // Explicit but inconsistent e_imag is a construction error.
      if (std::fabs(*ei * *ei - spec.alpha) > kKernelConsistencyTol)
        throw InvalidSpec("e_imag^2 must equal alpha for the kernel checks");
      const IdentityReport id = check_identities(spec, grid);
      const bool a_ok = id.integrated_residual <= kIdentityTol;
      const bool b_ok = id.unintegrated_residual <= kIdentityTol;
      all_pass = all_pass && a_ok && b_ok;
      checks.push_back({{"name", "integrated_identity"},
                        {"relation", "f^2 - f' = (2gg'' - g'^2 + E_i^2)/(4g^2)"},
                        {"pass", a_ok},
                        {"residual", id.integrated_residual},
                        {"tolerance", kIdentityTol}});
      checks.push_back({{"name", "unintegrated_identity"},
                        {"relation", "4g'Q + 2gQ' = g''', Q = f^2 - f'"},
                        {"pass", b_ok},
                        {"residual", id.unintegrated_residual},
                        {"tolerance", kIdentityTol}});
      const bool pt_ok = !id.pt_symmetric || id.pt_potential_residual <= kPtPotentialTol;
      all_pass = all_pass && pt_ok;
      checks.push_back({{"name", "pt_symmetry"},
                        {"pass", pt_ok},
                        {"pt_symmetric", id.pt_symmetric},
                        {"evenness_residual", id.evenness_residual},
                        {"residual", id.pt_potential_residual},
                        {"tolerance", kPtPotentialTol}});

      const GridResiduals coarse = residuals_on(spec, grid);
      const GridResiduals fine = residuals_on(spec, grid.refined());
      checks.push_back(residual_check("pseudo_hermiticity", coarse.pseudo_hermiticity,
                                      fine.pseudo_hermiticity, all_pass));
      checks.push_back(residual_check("kernel_residual", *coarse.kernel, *fine.kernel,
                                      all_pass));
      checks.push_back(residual_check("eigen_residual", *coarse.eigen, *fine.eigen,
                                      all_pass));
    } else {
      checks.push_back({{"name", "kernel_checks"},
                        {"pass", nullptr},
                        {"skipped", "no regular real f from e_imag^2 = alpha "
                                    "(alpha < 0 or f singular at a zero of g)"}});
    }

    emit(cfg, out, [&](std::ostream& os) {
      if (cfg.format == OutputFormat::Csv) {
        os << "check,pass,residual,order\n";
        for (const auto& c : checks) {
          os << c["name"].get<std::string>() << ','
             << (c["pass"].is_null() ? "skipped" : (c["pass"].get<bool>() ? "true" : "false"))
             << ',';
          if (c.contains("residual") && c["residual"].is_number())
            os << fmt17(c["residual"].get<double>());
          os << ',';
          if (c.contains("order") && c["order"].is_number())
            os << fmt17(c["order"].get<double>());
          os << '\n';
        }
        return;
      }
      json j = header("verify");
      j["model"] = model_json(spec, rc.label);
      j["grid"] = grid_json(grid);
      j["checks"] = checks;
      j["pass"] = all_pass;
      os << j.dump(2) << '\n';
    });
    return static_cast<int>(all_pass ? kExitOk : kExitCheckFailed);
  });
}

int run_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ResolvedConfig rc = resolve(cfg);
    const Grid& grid = rc.grid;
    const Model model(rc.spec, grid);
    std::vector<cplx> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = model.potential(grid.x(i));

    const double h2 = grid.spacing() * grid.spacing();
    const double limit = 1.0 / (DBL_EPSILON * h2);
    double worst = 0.0;
    std::size_t worst_at = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (std::abs(v[i]) > worst) {
        worst = std::abs(v[i]);
        worst_at = i;
      }
    if (worst > limit) {
      const double half = representable_half_width(grid, v, limit);
      const double c = 0.5 * (grid.x_min() + grid.x_max());
      std::ostringstream msg;
      msg << "potential magnitude " << worst << " at x = " << grid.x(worst_at)
          << " exceeds the double-precision range of the discretized operator (|V| h^2 > "
             "1/eps); suggested domain: --xmin "
          << c - half << " --xmax " << c + half;
      throw OverflowError(msg.str());
    }

    const ComplexMatrix H = discretize_hamiltonian(ComplexField(grid, v));
    const SpectrumReport report =
        spectrum_report(eigenvalues(H), cfg.im_threshold, cfg.energy_ceiling);
    const bool truncated = truncation_dominated(grid, v);

    emit(cfg, out, [&](std::ostream& os) {
      if (cfg.format == OutputFormat::Csv) {
        os << "re,im,class\n";
        auto rows = [&](const std::vector<cplx>& zs, const char* cls) {
          for (const cplx& z : zs)
            os << fmt17(z.real()) << ',' << fmt17(z.imag()) << ',' << cls << '\n';
        };
        rows(report.real_subset, "real");
        rows(report.complex_subset, "complex");
        rows(report.above_ceiling, "above_ceiling");
        return;
      }
      auto list = [](const std::vector<cplx>& zs) {
        json a = json::array();
        for (const cplx& z : zs) a.push_back(complex_json(z));
        return a;
      };
      json j = header("spectrum");
      j["model"] = model_json(rc.spec, rc.label);
      j["grid"] = grid_json(grid);
      j["im_threshold"] = report.im_threshold;
      j["energy_ceiling"] = report.energy_ceiling;
      j["truncation_dominated"] = truncated;
      j["eigenvalues"] = list(report.eigenvalues);
      j["real"] = list(report.real_subset);
      j["complex"] = list(report.complex_subset);
      j["above_ceiling"] = list(report.above_ceiling);
      os << j.dump(2) << '\n';
    });
    if (truncated)
      err << "note: spectrum is truncation-dominated (the potential falls off "
             "toward the box walls)\n";
    return static_cast<int>(kExitOk);
  });
}

int run_classify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ResolvedConfig rc = resolve(cfg);
    const Classification cls = classify(rc.spec);

    std::ostringstream verdict;
    verdict << to_string(cls.kind);
    if (cls.energy) {
      verdict << "{E=" << fmt17(cls.energy->real());
      if (cls.energy->imag() != 0.0)
        verdict << (cls.energy->imag() < 0.0 ? "-" : "+") << fmt17(std::fabs(cls.energy->imag()))
                << 'i';
      verdict << '}';
    }
    out << verdict.str() << '\n';

    emit(cfg, out, [&](std::ostream& os) {
      if (cfg.format == OutputFormat::Csv) {
        os << "e_imag,regular,width,integral\n";
        for (const auto& cand : cls.candidates) {
          if (!cand.l2) {
            os << fmt17(cand.e_imag) << ',' << (cand.regular ? "true" : "false") << ",,\n";
            continue;
          }
          for (std::size_t k = 0; k < cand.l2->integrals.size(); ++k)
            os << fmt17(cand.e_imag) << ",true," << fmt17(cand.l2->widths[k]) << ','
               << fmt17(cand.l2->integrals[k]) << '\n';
        }
        return;
      }
      json j = header("classify");
      j["model"] = model_json(rc.spec, rc.label);
      j["verdict"] = to_string(cls.kind);
      j["energy"] = cls.energy ? complex_json(*cls.energy) : json(nullptr);
      j["reason"] = cls.reason;
      j["basis"] = "reported claim: kernel-state analysis only; completeness of "
                   "the biorthonormal eigenbasis is assumed, not checked";
      json cands = json::array();
      for (const auto& cand : cls.candidates) {
        json c{{"e_imag", cand.e_imag}, {"regular", cand.regular}};
        if (cand.l2) {
          c["normalizability"] = {{"verdict", to_string(cand.l2->verdict)},
                                  {"widths", cand.l2->widths},
                                  {"integrals", cand.l2->integrals},
                                  {"overflowed", cand.l2->overflowed},
                                  {"reason", cand.l2->reason}};
        } else {
          c["normalizability"] = nullptr;
        }
        cands.push_back(std::move(c));
      }
      j["candidates"] = std::move(cands);
      os << j.dump(2) << '\n';
    });
    (void)err;
    return static_cast<int>(kExitOk);
  });
}

}  // namespace pseudospec
