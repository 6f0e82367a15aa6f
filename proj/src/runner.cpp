#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "confcurv/cli.hpp"
#include "confcurv/spectrum.hpp"

namespace confcurv {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

VerifyConfig config_for(const Manifest& m, const RunOptions& opt) {
  VerifyConfig cfg;
  cfg.tau = m.tau;
  cfg.alpha = m.alpha;
  cfg.cone = Cone(m.dimension, m.cone_k);
  cfg.jobs = opt.jobs;
  cfg.shift_v = m.enforce_v_shift;
  return cfg;
}

// Maps library exceptions onto exit codes; `body` returns an exit code.
template <typename Body>
int guarded(std::ostream& diag, const Body& body) {
  try {
    return body();
  } catch (const PreconditionError& e) {
    diag << "precondition violated (" << to_string(e.code()) << "): " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const MetricNotSPD& e) {
    diag << "precondition violated (metric_not_spd): " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const ManifestError& e) {
    diag << e.what() << "\n";
    return kExitInputError;
  } catch (const ParseError& e) {
    diag << "expression error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const DomainError& e) {
    diag << "evaluation error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    diag << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const nlohmann::json::exception& e) {
    diag << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
}

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ManifestError("cannot open output file " + path);
  f << content;
}

}  // namespace

json run_report(const Manifest& m, const RunOptions& opt, int& exit_code) {
  const int resolution = opt.grid.value_or(m.grid);
  const std::uint64_t seed = opt.seed.value_or(m.seed);
  const ChartMetric chart = build_metric(m);
  const SampleGrid grid = make_grid(chart.domain, resolution);
  const ScalarField v = build_potential(m);
  const VerifyConfig cfg = config_for(m, opt);

  VerificationReport report;
  switch (m.mode) {
    case RunMode::VerifyAtN:
      report = verify_at_N(chart.metric, v, *m.n_factor, cfg, grid);
      break;
    case RunMode::Search:
      report = search_min_N(chart.metric, v, cfg, grid, m.n_max).report;
      break;
    case RunMode::SectionalDim3: {
      bool have_n = true;
      if (m.n_factor) {
        report = verify_at_N(chart.metric, v, *m.n_factor, cfg, grid);
      } else {
        SearchResult s = search_min_N(chart.metric, v, cfg, grid, m.n_max);
        have_n = s.found;
        report = std::move(s.report);
      }
      if (have_n) {
        const Potential pot(chart.metric, v, report.N, grid, cfg.shift_v);
        report.sectional = verify_negative_sectional_dim3(chart.metric, pot.u(), grid,
                                                          m.planes_per_point, seed, opt.jobs);
      }
      break;
    }
    case RunMode::CurvatureDump:
      throw ManifestError("manifest: mode curvature-dump is run with `confcurv dump`");
  }

  exit_code = report.verified() ? kExitVerified : kExitNotVerified;
  json doc;
  doc["schema"] = kSchemaVersion;
  doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  doc["manifest"] = m.source;
  doc["run"] = {{"mode", to_string(m.mode)}, {"grid", resolution}, {"seed", seed}};
  doc["status"] = exit_code == kExitVerified ? "verified" : "not_verified";
  doc["result"] = report_to_json(report);
  return doc;
}

int run(const std::string& manifest_path, const std::string& output, const RunOptions& opt,
        std::ostream& out, std::ostream& diag) {
  return guarded(diag, [&] {
    const auto start = std::chrono::steady_clock::now();
    const Manifest m = load_manifest(manifest_path);
    if (m.mode == RunMode::CurvatureDump) return dump(manifest_path, output, opt, out, diag);
    int code = kExitNotVerified;
    json doc = run_report(m, opt, code);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (opt.timing) doc["wall_time_s"] = seconds;
    write_output(output, doc.dump(2) + "\n", out);
    diag << "status: " << doc["status"].get<std::string>() << ", N = " << doc["result"]["N"]
         << ", min margin = " << doc["result"]["min_margin"] << " (" << seconds << " s)\n";
    return code;
  });
}

std::vector<VectorXd> dump_points(const Manifest& m, const RunOptions& opt) {
  std::vector<VectorXd> pts;
  if (!m.points.empty()) {
    for (const auto& p : m.points)
      pts.push_back(Eigen::Map<const VectorXd>(p.data(), static_cast<Eigen::Index>(p.size())));
    return pts;
  }
  const ChartMetric chart = build_metric(m);
  return make_grid(chart.domain, opt.grid.value_or(m.grid)).points();
}

void curvature_dump(const Manifest& m, const std::vector<VectorXd>& points, std::ostream& out) {
  const int n = m.dimension;
  const ChartMetric chart = build_metric(m);
  const Cone cone(n, m.cone_k);
  auto pair = [](int i, int j) { return std::to_string(i + 1) + std::to_string(j + 1); };

  out << "point";
  for (int i = 0; i < n; ++i) out << ",x" << i + 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) out << ",Gamma_" << k + 1 << "_" << pair(i, j);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out << ",Ric_" << pair(i, j);
  out << ",R";
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out << ",A_" << pair(i, j);
  for (int i = 0; i < n; ++i) out << ",lambda_" << i + 1;
  out << ",margin,member\n";

  for (std::size_t p = 0; p < points.size(); ++p) {
    const VectorXd& x = points[p];
    if (x.size() != n) throw ManifestError("manifest: dump point has the wrong dimension");
    const MetricJets<double> jets = metric_jets(chart.metric, x);
    const CurvaturePoint<double> c = riemann(jets);
    const MatrixXd a = modified_schouten(c.ric, c.scal, jets.value, m.tau, m.alpha);
    const VectorXd lambda = generalized_eigs(a, jets.value);
    Membership mem{false, 0.0};
    if (lambda.norm() != 0.0) mem = contains(cone, lambda);

    out << p;
    for (int i = 0; i < n; ++i) out << ',' << fmt(x(i));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) out << ',' << fmt(c.gamma(k, i, j));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) out << ',' << fmt(c.ric(i, j));
    out << ',' << fmt(c.scal);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) out << ',' << fmt(a(i, j));
    for (int i = 0; i < n; ++i) out << ',' << fmt(lambda(i));
    out << ',' << fmt(mem.margin) << ',' << (mem.member ? 1 : 0) << '\n';
  }
}

int dump(const std::string& manifest_path, const std::string& output, const RunOptions& opt,
         std::ostream& out, std::ostream& diag) {
  return guarded(diag, [&] {
    const Manifest m = load_manifest(manifest_path);
    std::ostringstream csv;
    curvature_dump(m, dump_points(m, opt), csv);
    write_output(output, csv.str(), out);
    return static_cast<int>(kExitVerified);
  });
}

}  // namespace confcurv
