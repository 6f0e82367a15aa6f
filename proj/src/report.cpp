#include "confcurv/cli.hpp"

namespace confcurv {

using nlohmann::json;

namespace {

json probe_json(const ProbeRecord& p) { return {{"N", p.N}, {"min_margin", p.min_margin}}; }

ProbeRecord probe_from(const json& j) {
  return {j.at("N").get<double>(), j.at("min_margin").get<double>()};
}

}  // namespace

json report_to_json(const VerificationReport& r) {
  json j;
  j["metric"] = r.metric;
  j["potential"] = r.potential;
  j["grid"] = {{"lower", r.lower}, {"upper", r.upper}, {"resolution", r.resolution},
               {"points", r.margins.size()}};
  j["tau"] = r.tau;
  j["alpha"] = r.alpha;
  j["cone"] = {{"kind", "gamma_k"}, {"n", r.cone_n}, {"k", r.cone_k}};
  j["v_shifted"] = r.v_shifted;
  j["N"] = r.N;
  j["min_margin"] = r.min_margin;
  j["min_margin_point"] = r.min_margin_point;
  j["cross_check_residual"] = r.cross_check_residual;
  j["margins"] = r.margins;
  if (r.search) {
    const SearchSummary& s = *r.search;
    json probes = json::array();
    for (const ProbeRecord& p : s.probes) probes.push_back(probe_json(p));
    j["search"] = {{"found", s.found},   {"N_max", s.N_max},
                   {"N_cap", s.N_cap},   {"probes", probes},
                   {"recheck", s.recheck ? probe_json(*s.recheck) : json(nullptr)},
                   {"non_monotone", s.non_monotone}};
  }
  if (r.sectional) {
    const SectionalSummary& s = *r.sectional;
    j["sectional"] = {{"planes_per_point", s.planes_per_point},
                      {"seed", s.seed},
                      {"max_sectional", s.max_sectional},
                      {"max_sectional_point", s.max_sectional_point},
                      {"min_einstein_eig", s.min_einstein_eig},
                      {"min_einstein_point", s.min_einstein_point},
                      {"max_identity_residual", s.max_identity_residual},
                      {"normalization", "pointwise exp(2u(x))"}};
  }
  return j;
}

VerificationReport report_from_json(const json& j) {
  VerificationReport r;
  r.metric = j.at("metric").get<std::string>();
  r.potential = j.at("potential").get<std::string>();
  const json& g = j.at("grid");
  r.lower = g.at("lower").get<std::vector<double>>();
  r.upper = g.at("upper").get<std::vector<double>>();
  r.resolution = g.at("resolution").get<int>();
  r.tau = j.at("tau").get<double>();
  r.alpha = j.at("alpha").get<int>();
  r.cone_n = j.at("cone").at("n").get<int>();
  r.cone_k = j.at("cone").at("k").get<int>();
  r.v_shifted = j.at("v_shifted").get<bool>();
  r.N = j.at("N").get<double>();
  r.min_margin = j.at("min_margin").get<double>();
  r.min_margin_point = j.at("min_margin_point").get<std::size_t>();
  r.cross_check_residual = j.at("cross_check_residual").get<double>();
  r.margins = j.at("margins").get<std::vector<double>>();
  if (j.contains("search")) {
    const json& s = j.at("search");
    SearchSummary out;
    out.found = s.at("found").get<bool>();
    out.N_max = s.at("N_max").get<double>();
    out.N_cap = s.at("N_cap").get<double>();
    for (const json& p : s.at("probes")) out.probes.push_back(probe_from(p));
    if (!s.at("recheck").is_null()) out.recheck = probe_from(s.at("recheck"));
    out.non_monotone = s.at("non_monotone").get<bool>();
    r.search = out;
  }
  if (j.contains("sectional")) {
    const json& s = j.at("sectional");
    SectionalSummary out;
    out.planes_per_point = s.at("planes_per_point").get<int>();
    out.seed = s.at("seed").get<std::uint64_t>();
    out.max_sectional = s.at("max_sectional").get<double>();
    out.max_sectional_point = s.at("max_sectional_point").get<std::size_t>();
    out.min_einstein_eig = s.at("min_einstein_eig").get<double>();
    out.min_einstein_point = s.at("min_einstein_point").get<std::size_t>();
    out.max_identity_residual = s.at("max_identity_residual").get<double>();
    r.sectional = out;
  }
  return r;
}

}  // namespace confcurv
