#ifndef CONFCURV_CLI_HPP
#define CONFCURV_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "confcurv/chart.hpp"
#include "confcurv/construct.hpp"

namespace confcurv {

inline constexpr const char* kToolName = "confcurv";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Exit codes of `confcurv verify` / `confcurv dump`.
enum ExitCode : int {
  kExitVerified = 0,
  kExitNotVerified = 1,
  kExitInputError = 2,
  kExitPrecondition = 3,
};

/// Invalid or inconsistent manifest.
class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RunMode { VerifyAtN, Search, SectionalDim3, CurvatureDump };

std::string to_string(RunMode mode);

struct MetricSpec {
  std::string builtin;  ///< empty for an explicit expression matrix
  BuiltinParams params;
  std::vector<std::vector<std::string>> expressions;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct PotentialSpec {
  std::vector<double> linear;  ///< v = c0 + c1 x1 + ... + cn xn
  std::string expression;
};

/// A validated run description (schema 1).
struct Manifest {
  int dimension = 3;
  MetricSpec metric;
  PotentialSpec potential;
  double tau = 2.0;
  int alpha = 1;
  int cone_k = 1;
  int grid = 9;
  RunMode mode = RunMode::Search;
  int n_max = 64;
  bool enforce_v_shift = false;
  std::optional<double> n_factor;  ///< "N", required by verify-at-N
  int planes_per_point = 100;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> points;  ///< optional dump points
  nlohmann::json source;                    ///< manifest as read, echoed into reports
};

Manifest parse_manifest(const nlohmann::json& j);
Manifest load_manifest(const std::string& path);

ChartMetric build_metric(const Manifest& m);
ScalarField build_potential(const Manifest& m);

nlohmann::json report_to_json(const VerificationReport& r);
VerificationReport report_from_json(const nlohmann::json& j);

struct RunOptions {
  std::optional<int> grid;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  bool timing = false;
};

/// Full report document: schema, tool, manifest echo, run settings, status, result.
nlohmann::json run_report(const Manifest& m, const RunOptions& opt, int& exit_code);

/**
 * Executes a manifest and writes the report to `output` (or to `out` when
 * `output` is empty). Diagnostics go to `diag` only. Returns an ExitCode.
 */
int run(const std::string& manifest_path, const std::string& output, const RunOptions& opt,
        std::ostream& out, std::ostream& diag);

/**
 * Per-point CSV of the background metric: Christoffels, Ricci, scalar
 * curvature, α A^τ_g, its eigenvalues relative to g and the cone margin.
 * Column schema is documented in docs/curvature-dump.md.
 */
void curvature_dump(const Manifest& m, const std::vector<VectorXd>& points, std::ostream& out);

/// Points named in the manifest, or the grid when none are given.
std::vector<VectorXd> dump_points(const Manifest& m, const RunOptions& opt);

int dump(const std::string& manifest_path, const std::string& output, const RunOptions& opt,
         std::ostream& out, std::ostream& diag);

}  // namespace confcurv

#endif  // CONFCURV_CLI_HPP
