#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ccx/ccx.h"

namespace ccx::cli {

enum class DomainKind { Square, LShape, SquarePerturbed };

/// Bad user configuration; maps to exit code 2.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A C API call failed; carries its status.
struct ApiError : std::runtime_error {
  ApiError(ccx_status s, const std::string& what) : std::runtime_error(what), status(s) {}
  ccx_status status;
};

struct StudyConfig {
  DomainKind domain = DomainKind::Square;
  int degree = 2;
  ccx_form form = CCX_FORM_FEM2;
  std::vector<int> levels{8};
  std::size_t n_eigs = 10;
  ccx_backend backend = CCX_BACKEND_DENSE;
  double sigma = 1.0;
  double tol_zero = 1e-9;
  double tol = 1e-10;
  std::uint64_t seed = 42;
  double perturb = 0.15;
  std::string out;
  std::string export_mesh;
  std::string export_matrices;
  /// Overrides the exact targets (required for rates off the square).
  std::vector<double> exact;
  std::optional<std::pair<double, double>> check_rate;
  std::optional<double> max_error;
  /// Levels for the spurious scan in `audit`.
  std::vector<int> spurious_levels{4, 8};
  double spurious_threshold = 0.5;
};

void validate(const StudyConfig& cfg, bool multi_level);

DomainKind parse_domain(const std::string& s);
ccx_form parse_form(const std::string& s);
ccx_backend parse_backend(const std::string& s);
const char* domain_name(DomainKind d);

struct StudyRow {
  int level = 0;
  double h = 0.0;
  std::size_t index = 0;  // 1-based
  double lambda_h = 0.0;
  std::optional<double> exact;
  std::optional<double> abs_error;
  std::optional<double> rate;
  int cluster = 0;
};

struct LevelInfo {
  int level = 0;
  double h = 0.0;
  long long zero_count = -1;
  double seconds = 0.0;
};

struct StudyReport {
  std::vector<StudyRow> rows;
  std::vector<LevelInfo> levels;
  std::vector<std::string> failures;  // tolerance failures
  bool ok() const { return failures.empty(); }
};

struct CompareRow {
  int level = 0;
  double h = 0.0;
  std::size_t index = 0;
  double lambda_mixed = 0.0;
  double lambda_primal = 0.0;
  double gap = 0.0;
};

struct CompareReport {
  std::vector<CompareRow> rows;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

struct AuditSummary {
  std::vector<std::string> lines;  // key=value records
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Exact eigenvalues for the configured domain, or empty when unknown.
std::vector<double> exact_targets(const StudyConfig& cfg, std::size_t count);

StudyReport cmd_eig(const StudyConfig& cfg);
StudyReport cmd_converge(const StudyConfig& cfg);
AuditSummary cmd_audit(const StudyConfig& cfg);
CompareReport cmd_compare(const StudyConfig& cfg);
/// Mesh statistics per level as key=value lines.
std::vector<std::string> cmd_mesh(const StudyConfig& cfg);

void write_csv(std::ostream& os, const StudyReport& rep);
void write_csv(std::ostream& os, const CompareReport& rep);
void print_table(std::ostream& os, const StudyReport& rep);
void print_table(std::ostream& os, const CompareReport& rep);

/// 17 significant digits.
std::string fmt17(double v);

}  // namespace ccx::cli
