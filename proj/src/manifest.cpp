#include <cmath>
#include <fstream>
#include <set>

#include "confcurv/cli.hpp"

namespace confcurv {

using nlohmann::json;

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::VerifyAtN: return "verify-at-N";
    case RunMode::Search: return "search";
    case RunMode::SectionalDim3: return "sectional-dim3";
    case RunMode::CurvatureDump: return "curvature-dump";
  }
  return "unknown";
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw ManifestError("manifest: " + what); }

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) bad("unknown key \"" + k + "\" in " + where);
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) bad(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(what + " must be finite");
  return v;
}

int integer(const json& j, const std::string& what) {
  if (!j.is_number_integer()) bad(what + " must be an integer");
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& what) {
  if (!j.is_array()) bad(what + " must be an array of numbers");
  std::vector<double> out;
  for (const json& e : j) out.push_back(number(e, what));
  return out;
}

std::string text(const json& j, const std::string& what) {
  if (!j.is_string()) bad(what + " must be a string");
  return j.get<std::string>();
}

RunMode parse_mode(const std::string& s) {
  if (s == "verify-at-N") return RunMode::VerifyAtN;
  if (s == "search") return RunMode::Search;
  if (s == "sectional-dim3") return RunMode::SectionalDim3;
  if (s == "curvature-dump") return RunMode::CurvatureDump;
  bad("unknown mode \"" + s + "\"");
}

MetricSpec parse_metric(const json& j, int n) {
  if (!j.is_object()) bad("\"metric\" must be an object");
  MetricSpec m;
  m.params.n = n;
  if (j.contains("builtin")) {
    only_keys(j, "metric", {"builtin", "radius", "epsilon", "perturbation", "phi"});
    m.builtin = text(j.at("builtin"), "metric.builtin");
    if (j.contains("radius")) m.params.radius = number(j.at("radius"), "metric.radius");
    if (j.contains("epsilon")) m.params.epsilon = number(j.at("epsilon"), "metric.epsilon");
    if (j.contains("phi")) m.params.phi = text(j.at("phi"), "metric.phi");
    if (j.contains("perturbation")) {
      if (!j.at("perturbation").is_array()) bad("metric.perturbation must be an array of strings");
      for (const json& e : j.at("perturbation"))
        m.params.perturbation.push_back(text(e, "metric.perturbation entry"));
    }
    return m;
  }
  if (j.contains("expressions")) {
    only_keys(j, "metric", {"expressions", "domain"});
    const json& rows = j.at("expressions");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
      bad("metric.expressions must be an n x n array of strings");
    for (const json& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        bad("metric.expressions must be an n x n array of strings");
      std::vector<std::string> r;
      for (const json& e : row) r.push_back(text(e, "metric.expressions entry"));
      m.expressions.push_back(std::move(r));
    }
    if (j.contains("domain")) {
      const json& d = j.at("domain");
      if (!d.is_object()) bad("metric.domain must be an object");
      only_keys(d, "metric.domain", {"lower", "upper"});
      m.lower = numbers(d.at("lower"), "metric.domain.lower");
      m.upper = numbers(d.at("upper"), "metric.domain.upper");
      if (static_cast<int>(m.lower.size()) != n || static_cast<int>(m.upper.size()) != n)
        bad("metric.domain bounds must have length n");
    }
    return m;
  }
  bad("metric needs \"builtin\" or \"expressions\"");
}

PotentialSpec parse_potential(const json& j, int n) {
  if (!j.is_object()) bad("\"potential\" must be an object");
  only_keys(j, "potential", {"linear", "expression"});
  PotentialSpec p;
  if (j.contains("linear") == j.contains("expression"))
    bad("potential needs exactly one of \"linear\" or \"expression\"");
  if (j.contains("linear")) {
    p.linear = numbers(j.at("linear"), "potential.linear");
    if (static_cast<int>(p.linear.size()) != n + 1)
      bad("potential.linear needs n + 1 = " + std::to_string(n + 1) + " coefficients");
  } else {
    p.expression = text(j.at("expression"), "potential.expression");
  }
  return p;
}

}  // namespace

Manifest parse_manifest(const json& j) {
  if (!j.is_object()) bad("top level must be an object");
  only_keys(j, "manifest",
            {"schema", "dimension", "metric", "potential", "tau", "alpha", "cone", "grid", "mode",
             "search", "N", "planes_per_point", "seed", "points"});
  Manifest m;
  m.source = j;
  if (j.contains("schema") && integer(j.at("schema"), "schema") != kSchemaVersion)
    bad("unsupported schema version");
  if (!j.contains("dimension")) bad("missing \"dimension\"");
  m.dimension = integer(j.at("dimension"), "dimension");
  if (m.dimension < 3 || m.dimension > 9) bad("dimension must be between 3 and 9");
  const int n = m.dimension;

  if (!j.contains("metric")) bad("missing \"metric\"");
  m.metric = parse_metric(j.at("metric"), n);

  m.mode = parse_mode(j.contains("mode") ? text(j.at("mode"), "mode") : std::string("search"));

  if (j.contains("potential"))
    m.potential = parse_potential(j.at("potential"), n);
  else if (m.mode != RunMode::CurvatureDump)
    bad("missing \"potential\"");

  if (j.contains("tau")) m.tau = number(j.at("tau"), "tau");
  if (j.contains("alpha")) m.alpha = integer(j.at("alpha"), "alpha");
  if (m.alpha != 1 && m.alpha != -1) bad("alpha must be 1 or -1");

  if (!j.contains("cone")) bad("missing \"cone\"");
  const json& cone = j.at("cone");
  if (!cone.is_object()) bad("\"cone\" must be an object");
  only_keys(cone, "cone", {"kind", "k"});
  if (text(cone.value("kind", json("gamma_k")), "cone.kind") != "gamma_k")
    bad("cone.kind must be \"gamma_k\"");
  if (!cone.contains("k")) bad("missing cone.k");
  m.cone_k = integer(cone.at("k"), "cone.k");
  if (m.cone_k < 1 || m.cone_k > n)
    bad("cone.k = " + std::to_string(m.cone_k) + " must satisfy 1 <= k <= n = " +
        std::to_string(n));

  if (j.contains("grid")) m.grid = integer(j.at("grid"), "grid");
  if (m.grid < 2) bad("grid resolution must be >= 2");

  if (j.contains("search")) {
    const json& s = j.at("search");
    if (!s.is_object()) bad("\"search\" must be an object");
    only_keys(s, "search", {"N_max", "enforce_v_shift"});
    if (s.contains("N_max")) m.n_max = integer(s.at("N_max"), "search.N_max");
    if (m.n_max < 1) bad("search.N_max must be >= 1");
    if (s.contains("enforce_v_shift")) {
      if (!s.at("enforce_v_shift").is_boolean()) bad("search.enforce_v_shift must be a boolean");
      m.enforce_v_shift = s.at("enforce_v_shift").get<bool>();
    }
  }

  if (j.contains("N")) {
    m.n_factor = number(j.at("N"), "N");
    if (*m.n_factor < 0.0) bad("N must be non-negative");
  }
  if (m.mode == RunMode::VerifyAtN && !m.n_factor) bad("mode verify-at-N needs \"N\"");
  if (m.mode == RunMode::SectionalDim3 && n != 3) bad("mode sectional-dim3 needs dimension 3");

  if (j.contains("planes_per_point"))
    m.planes_per_point = integer(j.at("planes_per_point"), "planes_per_point");
  if (m.planes_per_point < 1) bad("planes_per_point must be >= 1");

  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_integer() || s.get<long long>() < 0) bad("seed must be a non-negative integer");
    m.seed = s.get<std::uint64_t>();
  }

  if (j.contains("points")) {
    if (!j.at("points").is_array()) bad("\"points\" must be an array of coordinate arrays");
    for (const json& p : j.at("points")) {
      std::vector<double> x = numbers(p, "points entry");
      if (static_cast<int>(x.size()) != n) bad("every point needs n coordinates");
      m.points.push_back(std::move(x));
    }
  }
  return m;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ManifestError("manifest " + path + " is not valid JSON: " + e.what());
  }
  return parse_manifest(j);
}

ChartMetric build_metric(const Manifest& m) {
  const int n = m.dimension;
  if (!m.metric.builtin.empty()) return builtin_metric(m.metric.builtin, m.metric.params);

  std::vector<std::vector<ScalarField>> fields;
  for (const auto& row : m.metric.expressions) {
    std::vector<ScalarField> r;
    for (const std::string& s : row) r.push_back(ScalarField::parse(s, n));
    fields.push_back(std::move(r));
  }
  ChartDomain domain = m.metric.lower.empty()
                           ? ChartDomain::unit_cube(n)
                           : ChartDomain(Eigen::Map<const VectorXd>(m.metric.lower.data(), n),
                                         Eigen::Map<const VectorXd>(m.metric.upper.data(), n));
  MetricField metric = MetricField::from_matrix(fields, "explicit");
  check_spd_on_grid(metric, make_grid(domain, 5));
  return {std::move(domain), std::move(metric)};
}

ScalarField build_potential(const Manifest& m) {
  const int n = m.dimension;
  if (!m.potential.expression.empty()) return ScalarField::parse(m.potential.expression, n);
  if (m.potential.linear.empty()) throw ManifestError("manifest: no potential given");
  Expr e = Expr::constant(m.potential.linear[0]);
  for (int i = 0; i < n; ++i) {
    const double c = m.potential.linear[static_cast<std::size_t>(i) + 1];
    if (c == 0.0) continue;
    e = e + Expr::constant(c) * Expr::variable(i);
  }
  return ScalarField(e, n);
}

}  // namespace confcurv
