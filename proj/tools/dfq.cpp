// Command-line front door: relation verification suites, Clebsch-Gordan
// tables, commutants, GNS summaries and open-system scenario runs, all
// emitting machine-readable JSON (plus CSV time series).

#include <ctime>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dfq/report_json.hpp"

using namespace dfq;

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

Json make_manifest(const std::string& command, const Json& config, std::uint64_t seed,
                   const std::vector<std::string>& outputs) {
  return Json{{"command", command},
              {"config_digest", config_digest(config)},
              {"seed", seed},
              {"tool_version", kVersion},
              {"timestamp", utc_timestamp()},
              {"outputs", outputs}};
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << contents;
}

void emit(const Json& payload, const std::string& json_path, bool quiet) {
  const std::string text = payload.dump(2) + "\n";
  if (!json_path.empty()) write_file(json_path, text);
  if (!quiet) std::cout << text;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  Json j;
  in >> j;
  return j;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

std::vector<RelationReport> verify_target(const std::string& target) {
  if (target == "two-qubit") {
    auto [pi, tau] = two_qubit_pi_tau();
    return {verify_relations(pi), verify_relations(tau)};
  }
  if (target == "three-qubit")
    return {verify_relations(three_qubit_tau(decompose(total_spin(3))))};
  if (target == "four-qubit-j0")
    return {verify_relations(four_qubit_tau_j0(decompose(total_spin(4))))};
  if (target == "four-qubit-j1")
    return {verify_relations(four_qubit_tau_j1(decompose(total_spin(4))))};
  throw CLI::ValidationError("verify", "unknown target " + target);
}

int cmd_verify(const std::string& target, double tol, const std::string& json_path,
               bool quiet) {
  std::vector<std::string> targets;
  if (target == "all")
    targets = {"two-qubit", "three-qubit", "four-qubit-j0", "four-qubit-j1"};
  else
    targets = {target};

  std::vector<std::future<std::vector<RelationReport>>> futures;
  futures.reserve(targets.size());
  for (const auto& t : targets)
    futures.push_back(std::async(std::launch::async, verify_target, t));

  Json reports = Json::array();
  double worst = 0;
  for (auto& f : futures)
    for (const auto& report : f.get()) {
      worst = std::max(worst, report.worst());
      reports.push_back(to_json(report));
    }

  const bool passed = worst <= tol;
  const Json config{{"target", target}, {"tolerance", tol}};
  Json payload{{"manifest", make_manifest("verify", config, 0, {})},
               {"tolerance", tol},
               {"worst_deviation", worst},
               {"reports", std::move(reports)},
               {"passed", passed}};
  emit(payload, json_path, quiet);
  return passed ? 0 : 1;
}

// ---------------------------------------------------------------------------
// decompose / commutant / gns
// ---------------------------------------------------------------------------

int cmd_decompose(int n_qubits, bool dump_basis, const std::string& json_path,
                  bool quiet) {
  const Json summary = decomposition_summary(decompose(total_spin(n_qubits)), dump_basis);
  const Json config{{"n_qubits", n_qubits}};
  Json payload{{"manifest", make_manifest("decompose", config, 0, {})},
               {"decomposition", summary}};
  emit(payload, json_path, quiet);
  return 0;
}

int cmd_commutant(const Json& config, const std::string& json_path, bool quiet) {
  const int n_qubits = config.at("n_qubits").get<int>();
  const bool dump_basis = config.value("dump_basis", false);

  const SpinOperators s = total_spin(n_qubits);
  const std::vector<Mat> errors = {s.s1, s.s2, s.s3};

  std::optional<Mat> isometry;
  Eigen::Index expected = 0;
  if (config.contains("j") && !config.at("j").is_null()) {
    const int two_j = parse_spin_label(config.at("j").get<std::string>());
    isometry = factorize(decompose(s), two_j).isometry;
    const Eigen::Index n_j = multiplicity_formula(n_qubits, two_j);
    expected = n_j * n_j;
  } else {
    for (int two_j = n_qubits; two_j >= 0; two_j -= 2) {
      const Eigen::Index n_j = multiplicity_formula(n_qubits, two_j);
      expected += n_j * n_j;
    }
  }

  const CommutantBasis basis = commutant(errors, isometry);
  Json payload{{"manifest", make_manifest("commutant", config, 0, {})},
               {"n_qubits", n_qubits},
               {"dimension", basis.dimension()},
               {"expected_dimension", expected}};
  if (config.contains("j") && !config.at("j").is_null())
    payload["j"] = config.at("j");
  if (dump_basis) {
    Json dump = Json::array();
    for (size_t i = 0; i < basis.basis.size(); ++i)
      dump.push_back(to_json(Operator(basis.basis[i], "c" + std::to_string(i))));
    payload["basis"] = std::move(dump);
  }
  emit(payload, json_path, quiet);
  return basis.dimension() == expected ? 0 : 1;
}

int cmd_gns(const Json& config, const std::string& json_path, bool quiet) {
  const std::string algebra_name = config.at("algebra").get<std::string>();

  MatrixAlgebra algebra;
  Mat generator3;  // the diagonal generator the "ground" state refers to
  if (algebra_name == "two-qubit-pi" || algebra_name == "two-qubit-tau") {
    auto [pi, tau] = two_qubit_pi_tau();
    const GeneratorSet& set = algebra_name == "two-qubit-pi" ? pi : tau;
    algebra = generated_algebra(algebra_name, set.generators);
    generator3 = set.generators[2].mat();
  } else if (algebra_name.rfind("full-", 0) == 0) {
    const int n = std::stoi(algebra_name.substr(5));
    if (n < 1 || n > 3)
      throw CLI::ValidationError("gns", "full-N algebras support N in 1..3");
    algebra = pauli_string_algebra(n);
  } else {
    throw CLI::ValidationError("gns", "unknown algebra " + algebra_name);
  }
  const Eigen::Index d = algebra.ambient_dim;

  Mat density;
  std::uint64_t seed = 0;
  const Json& state = config.at("state");
  if (state.is_string() && state.get<std::string>() == "ground") {
    if (generator3.size() == 0)
      throw CLI::ValidationError("gns", "\"ground\" needs a generator triple");
    density = (Mat::Identity(d, d) - generator3) / static_cast<double>(d);
  } else if (state.is_string() && state.get<std::string>() == "maximally-mixed") {
    density = Mat::Identity(d, d) / static_cast<double>(d);
  } else if (state.is_object() && state.value("type", "") == "random") {
    seed = state.at("seed").get<std::uint64_t>();
    GaussianSource source(seed);
    const Mat w = source.complex_matrix(d);
    density = w * w.adjoint();
    density /= density.trace().real();
  } else {
    throw CLI::ValidationError(
        "gns", "state must be \"ground\", \"maximally-mixed\" or {type: random, seed}");
  }

  const StateFunctional f = make_state(std::move(algebra), std::move(density));
  const GNSRepresentation rep = gns_construct(f);
  Json payload{{"manifest", make_manifest("gns", config, seed, {})},
               {"summary", gns_summary(algebra_name, rep, homomorphism_residual(rep, f))}};
  emit(payload, json_path, quiet);
  return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const std::string& name, const std::string& config_path,
                 std::optional<std::uint64_t> seed_override, const std::string& csv_path,
                 const std::string& json_path, bool quiet) {
  ScenarioConfig config;
  if (!config_path.empty())
    config = parse_scenario_config(load_json(config_path));
  else if (!name.empty())
    config = default_scenario_config(name);
  else
    throw CLI::ValidationError("simulate", "give a scenario name or --config");
  if (seed_override) config.seed = *seed_override;

  const TrajectoryReport report = run_scenario(config);
  const Json config_json = scenario_config_json(config);

  std::vector<std::string> outputs;
  if (!csv_path.empty()) {
    std::ostringstream csv;
    write_csv(report, csv);
    write_file(csv_path, csv.str());
    outputs.push_back(csv_path);
  }
  if (!json_path.empty()) outputs.push_back(json_path);

  Json payload{{"manifest", make_manifest("simulate", config_json, config.seed, outputs)},
               {"config", config_json},
               {"report", to_json(report)}};
  emit(payload, json_path, quiet);
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decoherence-free algebra workbench"};
  app.require_subcommand(1);

  std::string target = "all", config_path, json_path, csv_path, scenario;
  double tol = 1e-12;
  bool quiet = false;
  bool dump_basis = false;
  int n_qubits = 3;
  std::optional<std::uint64_t> seed_override;

  auto* verify = app.add_subcommand("verify", "check the generator-set relations");
  verify->add_option("target", target,
                     "two-qubit | three-qubit | four-qubit-j0 | four-qubit-j1 | all");
  verify->add_option("--tol", tol, "tolerance for every reported deviation");
  verify->add_option("--json", json_path, "write the JSON report here");
  verify->add_flag("--quiet", quiet, "suppress stdout");

  auto* decompose_cmd = app.add_subcommand("decompose", "Clebsch-Gordan block table");
  decompose_cmd->add_option("n_qubits", n_qubits, "array size (1..6)")->required();
  decompose_cmd->add_flag("--dump-basis", dump_basis, "include the eigenbasis columns");
  decompose_cmd->add_option("--json", json_path, "write the JSON report here");
  decompose_cmd->add_flag("--quiet", quiet, "suppress stdout");

  auto* commutant_cmd =
      app.add_subcommand("commutant", "commutant of the collective error generators");
  commutant_cmd->add_option("--config", config_path, "JSON config { n_qubits, j?, dump_basis? }");
  commutant_cmd->add_option("--n", n_qubits, "number of qubits (without --config)");
  std::string j_label;
  commutant_cmd->add_option("--j", j_label, "restrict to the S^2 eigenspace, e.g. 1/2");
  commutant_cmd->add_flag("--dump-basis", dump_basis, "include the basis matrices");
  commutant_cmd->add_option("--json", json_path, "write the JSON report here");
  commutant_cmd->add_flag("--quiet", quiet, "suppress stdout");

  auto* gns_cmd = app.add_subcommand("gns", "GNS construction summary");
  gns_cmd->add_option("--config", config_path, "JSON config { algebra, state }")
      ->required();
  gns_cmd->add_option("--json", json_path, "write the JSON report here");
  gns_cmd->add_flag("--quiet", quiet, "suppress stdout");

  auto* simulate = app.add_subcommand("simulate", "run an open-system scenario");
  simulate->add_option("scenario", scenario,
                       "scenario name (defaults config); see --list");
  simulate->add_option("--config", config_path, "scenario config file");
  simulate->add_option("--seed", seed_override, "override the config seed");
  simulate->add_option("--csv", csv_path, "write the time series here");
  simulate->add_option("--json", json_path, "write the JSON report here");
  simulate->add_flag("--quiet", quiet, "suppress stdout");
  bool list_scenarios = false;
  simulate->add_flag("--list", list_scenarios, "list scenario names and exit");

  auto* version = app.add_subcommand("version", "print the tool version");

  try {
    app.parse(argc, argv);

    if (version->parsed()) {
      std::cout << "dfq " << kVersion << "\n";
      return 0;
    }
    if (verify->parsed()) return cmd_verify(target, tol, json_path, quiet);
    if (decompose_cmd->parsed()) return cmd_decompose(n_qubits, dump_basis, json_path, quiet);
    if (commutant_cmd->parsed()) {
      Json config;
      if (!config_path.empty()) {
        config = load_json(config_path);
      } else {
        config = Json{{"n_qubits", n_qubits}, {"dump_basis", dump_basis}};
        if (!j_label.empty()) config["j"] = j_label;
      }
      return cmd_commutant(config, json_path, quiet);
    }
    if (gns_cmd->parsed()) return cmd_gns(load_json(config_path), json_path, quiet);
    if (simulate->parsed()) {
      if (list_scenarios) {
        for (const auto& name : scenario_names()) std::cout << name << "\n";
        return 0;
      }
      return cmd_simulate(scenario, config_path, seed_override, csv_path, json_path,
                          quiet);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
