#include "dfq/report_json.hpp"

#include <ostream>

namespace dfq {

Json to_json(const Operator& op) {
  Json entries = Json::array();
  const Mat& m = op.mat();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      entries.push_back({m(r, c).real(), m(r, c).imag()});
  Json j{{"dim", m.rows()}, {"entries", std::move(entries)}};
  if (!op.label().empty()) j["label"] = op.label();
  return j;
}

Json to_json(const RelationReport& report) {
  Json j{{"set_name", report.set_name},
         {"max_su2_violation", report.max_su2_violation},
         {"casimir_value", report.casimir_value},
         {"casimir_expected", report.casimir_expected},
         {"casimir_deviation", report.casimir_deviation},
         {"df_condition_violation", report.df_condition_violation}};
  if (report.anticommutator_deviation)
    j["anticommutator_deviation"] = *report.anticommutator_deviation;
  return j;
}

Json to_json(const TrajectoryReport& report) {
  Json points = Json::array();
  for (const auto& pt : report.points)
    points.push_back({{"t", pt.t},
                      {"df_fidelity", pt.df_fidelity},
                      {"df_purity", pt.df_purity},
                      {"system_purity", pt.system_purity},
                      {"leakage", pt.leakage},
                      {"bath_entropy", pt.bath_entropy}});
  Json assertions = Json::array();
  for (const auto& a : report.assertions)
    assertions.push_back({{"name", a.name},
                          {"passed", a.passed},
                          {"value", a.value},
                          {"threshold", a.threshold}});
  Json summary{{"min_df_fidelity", report.min_df_fidelity},
               {"min_df_purity", report.min_df_purity},
               {"min_system_purity", report.min_system_purity},
               {"max_leakage", report.max_leakage},
               {"max_bath_entropy", report.max_bath_entropy}};
  for (const auto& [key, value] : report.extras) summary[key] = value;
  return Json{{"scenario", report.scenario},
              {"seed", report.seed},
              {"fidelity_convention", "uhlmann-squared"},
              {"summary", std::move(summary)},
              {"assertions", std::move(assertions)},
              {"passed", report.passed()},
              {"points", std::move(points)}};
}

Json decomposition_summary(const CGDecomposition& d, bool include_basis) {
  Json blocks = Json::array();
  for (const auto& block : d.blocks) {
    Json entry{{"j", spin_label(block.two_j)},
               {"multiplicity", block.multiplicity},
               {"dimension", block.dim()}};
    if (include_basis) {
      Json columns = Json::array();
      for (Eigen::Index c = 0; c < block.basis.cols(); ++c) {
        Json column = Json::array();
        for (Eigen::Index r = 0; r < block.basis.rows(); ++r)
          column.push_back({block.basis(r, c).real(), block.basis(r, c).imag()});
        columns.push_back(std::move(column));
      }
      entry["basis"] = std::move(columns);
    }
    blocks.push_back(std::move(entry));
  }
  return Json{{"n_qubits", d.n_qubits}, {"blocks", std::move(blocks)}};
}

Json gns_summary(const std::string& algebra_name, const GNSRepresentation& rep,
                 double hom_residual) {
  return Json{{"algebra_name", algebra_name},
              {"gns_dimension", rep.dimension},
              {"gram_rank", rep.gram_rank},
              {"homomorphism_residual", hom_residual}};
}

void write_csv(const TrajectoryReport& report, std::ostream& out) {
  out << "t,df_fidelity,df_purity,system_purity,leakage,bath_entropy\n";
  out.precision(17);
  for (const auto& pt : report.points)
    out << pt.t << ',' << pt.df_fidelity << ',' << pt.df_purity << ','
        << pt.system_purity << ',' << pt.leakage << ',' << pt.bath_entropy << '\n';
}

ScenarioConfig parse_scenario_config(const Json& config) {
  if (!config.contains("scenario"))
    throw std::invalid_argument("config: missing \"scenario\"");
  ScenarioConfig c = default_scenario_config(config.at("scenario").get<std::string>());

  if (config.contains("universe")) {
    const Json& u = config.at("universe");
    if (u.contains("n_qubits") && u.at("n_qubits").get<int>() != c.n_qubits)
      throw std::invalid_argument("config: n_qubits is fixed by the scenario");
    if (u.contains("j") && !u.at("j").is_null()) {
      const int two_j = parse_spin_label(u.at("j").get<std::string>());
      if (two_j != c.two_j)
        throw std::invalid_argument("config: j is fixed by the scenario");
    }
    if (u.contains("d_b")) c.d_b = u.at("d_b").get<Eigen::Index>();
    if (u.contains("seed")) c.seed = u.at("seed").get<std::uint64_t>();
    if (u.contains("coupling_strength"))
      c.coupling_strength = u.at("coupling_strength").get<double>();
  }
  if (config.contains("hamiltonian")) {
    const Json& h = config.at("hamiltonian");
    if (h.contains("epsilon")) c.h_sys.epsilon = h.at("epsilon").get<double>();
    if (h.contains("alpha")) c.h_sys.alpha = h.at("alpha").get<std::vector<double>>();
    if (h.contains("beta")) c.h_sys.beta = h.at("beta").get<std::vector<double>>();
    if (h.contains("exchange")) {
      c.h_sys.exchange.clear();
      for (const auto& term : h.at("exchange")) {
        const auto sites = term.at("sites").get<std::vector<int>>();
        if (sites.size() != 2)
          throw std::invalid_argument("config: exchange term needs two sites");
        c.h_sys.exchange.push_back(
            ExchangeTerm{sites[0], sites[1], term.at("strength").get<double>()});
      }
    }
  }
  if (config.contains("schedule")) {
    const Json& s = config.at("schedule");
    if (s.contains("t_max")) c.t_max = s.at("t_max").get<double>();
    if (s.contains("steps")) c.steps = s.at("steps").get<int>();
  }
  return c;
}

Json scenario_config_json(const ScenarioConfig& c) {
  Json universe{{"n_qubits", c.n_qubits},
                {"d_b", c.d_b},
                {"seed", c.seed},
                {"coupling_strength", c.coupling_strength}};
  if (c.two_j >= 0) universe["j"] = spin_label(c.two_j);
  Json exchange = Json::array();
  for (const auto& term : c.h_sys.exchange)
    exchange.push_back(
        {{"sites", {term.site_a, term.site_b}}, {"strength", term.strength}});
  return Json{{"scenario", c.scenario},
              {"universe", std::move(universe)},
              {"hamiltonian",
               {{"epsilon", c.h_sys.epsilon},
                {"alpha", c.h_sys.alpha},
                {"beta", c.h_sys.beta},
                {"exchange", std::move(exchange)}}},
              {"schedule", {{"t_max", c.t_max}, {"steps", c.steps}}}};
}

std::string config_digest(const Json& config) {
  const std::string canonical = config.dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace dfq
