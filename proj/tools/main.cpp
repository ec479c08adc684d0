#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "study.hpp"

namespace {

enum Exit { kOk = 0, kTolerance = 1, kConfig = 2, kSolver = 3 };

struct RawOptions {
  std::string domain = "square";
  std::string form = "fem2";
  std::string backend = "dense";
  std::vector<int> levels;
  std::vector<double> check_rate;
  std::vector<int> spurious_levels;
};

void add_common(CLI::App* app, ccx::cli::StudyConfig& cfg, RawOptions& raw) {
  app->add_option("--domain", raw.domain, "square | lshape | square-perturbed")->capture_default_str();
  app->add_option("-k,--degree", cfg.degree, "polynomial degree k")->capture_default_str();
  app->add_option("--form", raw.form, "fem1 | fem2 | primal")->capture_default_str();
  app->add_option("--levels", raw.levels, "refinement levels n (comma separated)")->delimiter(',');
  app->add_option("--neigs", cfg.n_eigs, "number of nonzero eigenvalues")->capture_default_str();
  app->add_option("--backend", raw.backend, "dense | lanczos")->capture_default_str();
  app->add_option("--sigma", cfg.sigma, "shift for the lanczos backend")->capture_default_str();
  app->add_option("--tol-zero", cfg.tol_zero, "relative kernel threshold")->capture_default_str();
  app->add_option("--tol", cfg.tol, "lanczos backward-error tolerance")->capture_default_str();
  app->add_option("--seed", cfg.seed, "seed for perturbation and lanczos start")->capture_default_str();
  app->add_option("--perturb", cfg.perturb, "jitter amplitude for square-perturbed")->capture_default_str();
  app->add_option("--out", cfg.out, "CSV output path (default stdout table only)");
  app->add_option("--export-mesh", cfg.export_mesh, "write the criss-cross mesh");
  app->add_option("--export-matrices", cfg.export_matrices, "MatrixMarket prefix");
  app->add_option("--exact", cfg.exact, "exact eigenvalues overriding the domain targets")->delimiter(',');
  app->add_option("--check-rate", raw.check_rate, "LO,HI bounds for the first-eigenvalue rate")
      ->delimiter(',')
      ->expected(2);
  app->add_option("--max-error", cfg.max_error, "fail if any error (or gap in compare) reaches this value");
}

void finish_config(ccx::cli::StudyConfig& cfg, const RawOptions& raw) {
  cfg.domain = ccx::cli::parse_domain(raw.domain);
  cfg.form = ccx::cli::parse_form(raw.form);
  cfg.backend = ccx::cli::parse_backend(raw.backend);
  if (!raw.levels.empty()) cfg.levels = raw.levels;
  if (raw.check_rate.size() == 2) cfg.check_rate = std::make_pair(raw.check_rate[0], raw.check_rate[1]);
  if (!raw.spurious_levels.empty()) cfg.spurious_levels = raw.spurious_levels;
}

template <class Report>
void emit_csv(const ccx::cli::StudyConfig& cfg, const Report& rep) {
  if (cfg.out.empty()) return;
  std::ofstream os(cfg.out);
  if (!os) throw std::runtime_error("cannot open " + cfg.out);
  ccx::cli::write_csv(os, rep);
}

void report_failures(const std::vector<std::string>& failures) {
  for (const auto& f : failures) std::cerr << "FAIL: " << f << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Criss-cross Lagrange eigenvalue studies"};
  app.require_subcommand(1);

  ccx::cli::StudyConfig cfg;
  RawOptions raw;

  auto* mesh = app.add_subcommand("mesh", "build meshes and print statistics");
  auto* eig = app.add_subcommand("eig", "eigenvalues on one level");
  auto* conv = app.add_subcommand("converge", "errors and rates over refinement levels");
  auto* audit = app.add_subcommand("audit", "complex, W_h and spurious-mode audits");
  auto* compare = app.add_subcommand("compare", "mixed vs primal eigenvalues");
  for (auto* sub : {mesh, eig, conv, audit, compare}) add_common(sub, cfg, raw);
  audit->add_option("--spurious-levels", raw.spurious_levels, "levels for the spurious scan")->delimiter(',');
  audit->add_option("--spurious-threshold", cfg.spurious_threshold, "distance threshold")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    finish_config(cfg, raw);
    if (mesh->parsed()) {
      for (const auto& line : ccx::cli::cmd_mesh(cfg)) std::cout << line << '\n';
      return kOk;
    }
    if (eig->parsed() || conv->parsed()) {
      const auto rep = eig->parsed() ? ccx::cli::cmd_eig(cfg) : ccx::cli::cmd_converge(cfg);
      ccx::cli::print_table(std::cout, rep);
      emit_csv(cfg, rep);
      report_failures(rep.failures);
      return rep.ok() ? kOk : kTolerance;
    }
    if (compare->parsed()) {
      const auto rep = ccx::cli::cmd_compare(cfg);
      ccx::cli::print_table(std::cout, rep);
      emit_csv(cfg, rep);
      report_failures(rep.failures);
      return rep.ok() ? kOk : kTolerance;
    }
    if (audit->parsed()) {
      const auto rep = ccx::cli::cmd_audit(cfg);
      for (const auto& line : rep.lines) std::cout << line << '\n';
      report_failures(rep.failures);
      std::cout << "result=" << (rep.ok() ? "pass" : "fail") << '\n';
      return rep.ok() ? kOk : kTolerance;
    }
  } catch (const ccx::cli::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kConfig;
  } catch (const ccx::cli::ApiError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.status == CCX_ERR_INVALID_ARGUMENT ? kConfig : kSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolver;
  }
  return kOk;
}
