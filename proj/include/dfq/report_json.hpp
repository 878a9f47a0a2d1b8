#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "dfq/commutant.hpp"
#include "dfq/gns.hpp"
#include "dfq/sim.hpp"

// JSON forms for every reportable result, the scenario config file format
// (sections universe / hamiltonian / schedule), and the CSV time series.

namespace dfq {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

// { dim, entries: [[re, im], ...] row-major, label when present }
Json to_json(const Operator& op);
Json to_json(const RelationReport& report);
Json to_json(const TrajectoryReport& report);

// list of { j: "p/2", multiplicity, dimension }; optionally the basis
// columns of every block
Json decomposition_summary(const CGDecomposition& d, bool include_basis = false);

// { algebra_name, gns_dimension, gram_rank, homomorphism_residual }
Json gns_summary(const std::string& algebra_name, const GNSRepresentation& rep,
                 double hom_residual);

// header: t,df_fidelity,df_purity,system_purity,leakage,bath_entropy
void write_csv(const TrajectoryReport& report, std::ostream& out);

// Scenario configs. Parsing starts from the scenario's defaults and
// overlays whatever fields are present; contradictory fixed fields
// (n_qubits, j) are rejected.
ScenarioConfig parse_scenario_config(const Json& config);
Json scenario_config_json(const ScenarioConfig& config);

// FNV-1a over the canonical dump; stable across platforms.
std::string config_digest(const Json& config);

}  // namespace dfq
