// Command-line front end: existence reports, soliton profiles, classified
// spectra, omega sweeps, and bifurcation refinement.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <gapspec/gapspec.hpp>

namespace {

using namespace gapspec;
using nlohmann::json;

/// Flag values layered on top of a config file.
struct FlagOverrides {
  std::string config_path;
  std::optional<double> omega;
  std::vector<double> range;
  std::optional<int> steps;
  std::optional<int> n_points;
  std::optional<double> halfwidth;
  std::optional<int> jobs;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  std::string kind;
  double tol_omega = 1e-3;
};

RunConfig resolve_config(const FlagOverrides& f) {
  RunConfig cfg;
  if (!f.config_path.empty()) cfg = load_config(f.config_path);
  if (f.n_points) cfg.grid.N = *f.n_points;
  if (f.halfwidth) {
    cfg.grid.fixed_L = true;
    cfg.grid.L = *f.halfwidth;
  }
  if (f.jobs) cfg.jobs = *f.jobs;
  if (f.out_dir) cfg.output.directory = *f.out_dir;
  if (f.format) {
    if (*f.format == "csv")
      cfg.output.format = OutputFormat::csv;
    else if (*f.format == "json")
      cfg.output.format = OutputFormat::json;
    else
      throw ConfigError("unknown format: " + *f.format);
  }
  cfg.validate();
  return cfg;
}

double require_omega(const FlagOverrides& f) {
  if (!f.omega) throw ConfigError("--omega is required for this subcommand");
  return *f.omega;
}

std::pair<double, double> require_range(const FlagOverrides& f) {
  if (f.range.size() != 2) throw ConfigError("--range LO HI is required for this subcommand");
  return {f.range[0], f.range[1]};
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  ensure_directory(cfg.output.directory);
  return cfg.output.directory + "/" + name;
}

json existence_json(const ExistenceReport& rep) {
  json intervals = json::array();
  for (const ExistenceInterval& iv : rep.omega_domain)
    intervals.push_back({{"lo", iv.lo},
                         {"hi", iv.hi},
                         {"branch", to_string(iv.branch)},
                         {"lo_behavior", to_string(iv.lo_behavior)},
                         {"hi_behavior", to_string(iv.hi_behavior)}});
  return json{{"A", rep.A},
              {"B", rep.B},
              {"C", rep.C},
              {"phi_roots", rep.phi_roots},
              {"case", to_string(rep.case_label)},
              {"omega_domain", intervals}};
}

int cmd_exists(const FlagOverrides& f) {
  const RunConfig cfg = resolve_config(f);
  const ExistenceReport rep = classify_existence(cfg.potential);
  std::cout << "case " << to_string(rep.case_label) << "\n";
  std::cout << "A=" << fmt15(rep.A) << " B=" << fmt15(rep.B) << " C=" << fmt15(rep.C) << "\n";
  for (const ExistenceInterval& iv : rep.omega_domain)
    std::cout << "branch Q" << (iv.branch == Branch::plus ? "+" : "-") << " on ("
              << fmt15(iv.lo) << ", " << fmt15(iv.hi) << ")"
              << " endpoints: " << to_string(iv.lo_behavior) << " / "
              << to_string(iv.hi_behavior) << "\n";
  write_json(existence_json(rep), out_path(cfg, "existence.json"));
  return 0;
}

int cmd_soliton(const FlagOverrides& f) {
  const RunConfig cfg = resolve_config(f);
  const double omega = require_omega(f);
  const SolitonParams sp(omega);
  const ChebGrid grid = build_grid(cfg.grid.N, cfg.grid.halfwidth(omega));
  const SolitonProfile profile = cfg.model_alias
                                     ? soliton_closed_form(grid, sp, *cfg.model_alias)
                                     : soliton_appendix_a(grid, sp, cfg.potential);
  const double residual = ode_residual(profile, cfg.potential);
  const ConservedQuantities cons = conserved_quantities(profile, cfg.potential);

  json summary{{"omega", omega},
               {"branch", to_string(profile.branch)},
               {"source", to_string(profile.source)},
               {"N", cfg.grid.N},
               {"halfwidth", grid.halfwidth},
               {"ode_residual", residual},
               {"Q_total", cons.Q},
               {"P", cons.P},
               {"H", cons.H},
               {"Lambda", cons.Lambda},
               {"boundary_value", cons.boundary_value}};
  if (cfg.output.format == OutputFormat::json) {
    json out = profile_json(profile);
    out["summary"] = summary;
    write_json(out, out_path(cfg, "profile.json"));
  } else {
    write_profile_csv(profile, out_path(cfg, "profile.csv"));
    write_json(summary, out_path(cfg, "soliton_summary.json"));
  }
  std::cout << "omega=" << fmt15(omega) << " branch=" << to_string(profile.branch)
            << " source=" << to_string(profile.source) << "\n";
  std::cout << "ode_residual=" << fmt15(residual) << "\n";
  std::cout << "Q_total=" << fmt15(cons.Q) << " P=" << fmt15(cons.P) << " H="
            << fmt15(cons.H) << " Lambda=" << fmt15(cons.Lambda) << "\n";
  return 0;
}

int cmd_spectrum(const FlagOverrides& f) {
  const RunConfig cfg = resolve_config(f);
  const double omega = require_omega(f);
  const SolitonParams sp(omega);
  const ChebGrid grid = build_grid(cfg.grid.N, cfg.grid.halfwidth(omega));
  const SolitonProfile profile = soliton_appendix_a(grid, sp, cfg.potential);
  const int n = cfg.grid.N + 1;

  auto [Hp, Hm] = assemble_blocks(grid, profile, cfg.potential, omega);
  const Eigen::MatrixXcd Hpi = interior_matrix(Hp, n);
  const Eigen::MatrixXcd Hmi = interior_matrix(Hm, n);
  const Eigen::MatrixXcd L = assemble_L(Hpi, Hmi);
  auto [Mp, Mm] = product_blocks(Hpi, Hmi);
  (void)Mm;

  auto to_vec = [](const Eigen::VectorXcd& v) {
    return std::vector<cxd>(v.data(), v.data() + v.size());
  };
  const Spectrum sL = classify(to_vec(eig_general(L)), omega, OperatorTag::L, cfg.tolerances);
  const Spectrum sHp =
      classify(to_vec(eig_general(Hpi)), omega, OperatorTag::Hplus, cfg.tolerances);
  const Spectrum sHm =
      classify(to_vec(eig_general(Hmi)), omega, OperatorTag::Hminus, cfg.tolerances);
  const Spectrum sMp =
      classify(to_vec(eig_general(Mp)), omega, OperatorTag::Mplus, cfg.tolerances);
  const CrosscheckReport cross = crosscheck_gamma(sL, sMp);

  const std::pair<const Spectrum*, const char*> specs[] = {
      {&sL, "L"}, {&sHp, "Hplus"}, {&sHm, "Hminus"}, {&sMp, "Mplus"}};
  for (const auto& [s, name] : specs) {
    if (cfg.output.format == OutputFormat::json) {
      json j = *s;
      write_json(j, out_path(cfg, std::string("spectrum_") + name + ".json"));
    } else {
      write_spectrum_csv(*s, out_path(cfg, std::string("spectrum_") + name + ".csv"));
    }
  }
  json jc = json::array();
  for (const CrosscheckEntry& e : cross.entries)
    jc.push_back({{"lambda", {e.lambda.real(), e.lambda.imag()}},
                  {"gamma", {e.gamma.real(), e.gamma.imag()}},
                  {"error", e.error},
                  {"matched", e.matched}});
  write_json(json{{"entries", jc},
                  {"worst_matched", cross.worst_matched},
                  {"outliers", cross.outliers}},
             out_path(cfg, "crosscheck.json"));

  std::cout << "omega=" << fmt15(omega) << " isolated_L=" << sL.isolated.size()
            << " isolated_Hplus=" << sHp.isolated.size()
            << " isolated_Hminus=" << sHm.isolated.size() << "\n";
  std::cout << "crosscheck_worst_matched=" << fmt15(cross.worst_matched)
            << " outliers=" << cross.outliers << "\n";
  return 0;
}

int cmd_sweep(const FlagOverrides& f) {
  const RunConfig cfg = resolve_config(f);
  auto [lo, hi] = require_range(f);
  if (!f.steps || *f.steps <= 0) throw ConfigError("--steps must be a positive integer");
  const SweepResult result =
      sweep(cfg.potential, lo, hi, *f.steps, cfg, CountingPolicy{}, true, cfg.jobs);

  write_json(json(result.report), out_path(cfg, "sweep_report.json"));
  write_counts_csv(result.report, out_path(cfg, "counts.csv"));
  emit_frames(result.report, result.spectra, cfg.output.directory);

  for (size_t i = 0; i < result.report.omega_values.size(); ++i) {
    const Counts& c = result.report.counts[i];
    std::cout << "omega=" << fmt15(result.report.omega_values[i])
              << " ip=" << c.L_imag_pairs << " rp=" << c.L_real_pairs
              << " quartets=" << c.L_quartets << " Hplus=" << c.Hplus_isolated
              << " Hminus=" << c.Hminus_isolated << "\n";
  }
  for (const SweepEvent& e : result.report.events)
    std::cout << "event " << to_string(e.kind) << " bracket=(" << fmt15(e.bracket_lo)
              << ", " << fmt15(e.bracket_hi) << ") refined_omega="
              << fmt15(e.refined_omega) << "\n";
  for (const SweepSkipped& s : result.report.skipped)
    std::cout << "skipped omega=" << fmt15(s.omega) << " (" << s.reason << ")\n";
  return 0;
}

int cmd_bifurcate(const FlagOverrides& f) {
  const RunConfig cfg = resolve_config(f);
  auto [lo, hi] = require_range(f);
  const std::optional<EventKind> kind = parse_event_kind(f.kind);
  if (!kind)
    throw ConfigError("--kind must be one of quartet_birth, quartet_death, pair_birth, "
                      "edge_bifurcation_Hplus, edge_bifurcation_Hminus");
  const double refined =
      locate_bifurcation(cfg.potential, lo, hi, *kind, f.tol_omega, cfg);
  write_json(json{{"kind", to_string(*kind)},
                  {"bracket", {lo, hi}},
                  {"tol_omega", f.tol_omega},
                  {"refined_omega", refined}},
             out_path(cfg, "bifurcation.json"));
  std::cout << "kind=" << to_string(*kind) << " bracket=(" << fmt15(lo) << ", "
            << fmt15(hi) << ") tol_omega=" << fmt15(f.tol_omega) << "\n";
  std::cout << "refined_omega=" << fmt15(refined) << "\n";
  return 0;
}

void add_common_flags(CLI::App* sub, FlagOverrides& f) {
  sub->add_option("--config", f.config_path, "JSON config file");
  sub->add_option("--n-points", f.n_points, "grid resolution N");
  sub->add_option("--halfwidth", f.halfwidth, "fixed domain halfwidth L");
  sub->add_option("--jobs", f.jobs, "worker thread cap");
  sub->add_option("--out", f.out_dir, "output directory");
  sub->add_option("--format", f.format, "output format: csv or json");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"gap-soliton spectral stability toolkit"};
  app.require_subcommand(1);
  FlagOverrides f;

  CLI::App* exists = app.add_subcommand("exists", "existence classification report");
  add_common_flags(exists, f);

  CLI::App* soliton = app.add_subcommand("soliton", "stationary profile at one omega");
  add_common_flags(soliton, f);
  soliton->add_option("--omega", f.omega, "soliton frequency");

  CLI::App* spectrum = app.add_subcommand("spectrum", "classified spectra at one omega");
  add_common_flags(spectrum, f);
  spectrum->add_option("--omega", f.omega, "soliton frequency");

  CLI::App* sweepcmd = app.add_subcommand("sweep", "counts and events over an omega range");
  add_common_flags(sweepcmd, f);
  sweepcmd->add_option("--range", f.range, "omega range LO HI")->expected(2);
  sweepcmd->add_option("--steps", f.steps, "number of omega samples");

  CLI::App* bifurcate = app.add_subcommand("bifurcate", "bisect one bifurcation event");
  add_common_flags(bifurcate, f);
  bifurcate->add_option("--range", f.range, "bracket LO HI")->expected(2);
  bifurcate->add_option("--kind", f.kind, "event kind to refine");
  bifurcate->add_option("--tol-omega", f.tol_omega, "bracket width target");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (exists->parsed()) return cmd_exists(f);
    if (soliton->parsed()) return cmd_soliton(f);
    if (spectrum->parsed()) return cmd_spectrum(f);
    if (sweepcmd->parsed()) return cmd_sweep(f);
    if (bifurcate->parsed()) return cmd_bifurcate(f);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const EigensolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
