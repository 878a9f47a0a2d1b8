#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "dfq/commutant.hpp"
#include "dfq/gns.hpp"

// Exact system+bath dynamics: assemble H = H_S (x) 1 + 1 (x) H_B + H_I,
// evolve by eigendecomposition, trace out the bath and measure whether
// the DF-reduced state evolves unitarily while the complementary factor
// decoheres.

namespace dfq {

// Deterministic gaussian draws (Box-Muller over mt19937_64), so seeded
// runs are byte-reproducible independent of the standard library's
// distribution implementations.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}
  double operator()();
  Mat complex_matrix(Eigen::Index dim);
  // (A + A^dagger)/2, rescaled to the given spectral norm.
  Mat hermitian(Eigen::Index dim, double spectral_norm);
  Vec unit_vector(Eigen::Index dim);

 private:
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0;
};

struct BathSpec {
  Eigen::Index dim = 2;
  Mat h_bath;                 // Hermitian, spectral norm 1 when random
  std::vector<Mat> couplings; // B_i, Hermitian, spectral norm = coupling_strength
  std::uint64_t seed = 0;
  double coupling_strength = 1.0;
};

// GUE-style bath drawn from the given source; n_couplings operators.
BathSpec random_bath(Eigen::Index d_b, int n_couplings, double coupling_strength,
                     GaussianSource& source);
BathSpec random_bath(Eigen::Index d_b, int n_couplings, double coupling_strength,
                     std::uint64_t seed);

// Purification |p> of a bath density matrix on a doubled register, and the
// matching doubled BathSpec (operators act on the first copy).
Vec purify(const Mat& rho_bath);
BathSpec purified_bath(const BathSpec& bath);

struct ExchangeTerm {
  int site_a = 0;
  int site_b = 0;
  double strength = 0;
};

struct SystemHamiltonianSpec {
  double epsilon = 0;                 // coefficient of S_3
  std::vector<ExchangeTerm> exchange; // scalar couplings strength * b_{jk}
  std::vector<double> alpha;          // coefficients on the DF generators
  std::vector<double> beta;           // coefficients on the error generators
};

struct UniverseModel {
  int n_qubits = 0;
  BathSpec bath;
  SystemHamiltonianSpec h_sys_spec;
  Mat h_system;                      // on 2^N
  Mat h_total;                       // on 2^N * d_B
  std::vector<Mat> error_generators; // system operators coupled to the bath
  std::vector<Mat> df_generators;    // ambient operators the alpha terms use
  FactoredSpace factored;            // working eigenspace factorization

  Eigen::Index system_dim() const { return Eigen::Index(1) << n_qubits; }
  Eigen::Index universe_dim() const { return system_dim() * bath.dim; }
};

inline constexpr Eigen::Index kUniverseDimBudget = 256;

// Collective coupling H_I = sum_i S_i (x) B_i with the working S^2
// eigenspace two_j. The DF generators are the tau triples where defined
// (N=3 j=1/2; N=4 j=0 and j=1).
UniverseModel build_universe(int n_qubits, const BathSpec& bath,
                             const SystemHamiltonianSpec& h_sys, int two_j);

// Two-qubit model: bath couples to the tau triple, the pi triple is DF,
// the full space factors through the Bell basis.
UniverseModel build_two_qubit_pi_universe(const BathSpec& bath,
                                          const SystemHamiltonianSpec& h_sys);

// Propagator from one eigendecomposition of h_total, reused across the grid.
class UniverseEvolution {
 public:
  explicit UniverseEvolution(const Mat& h_total);
  Vec apply(const Vec& psi0, double t) const;
  Mat apply(const Mat& rho0, double t) const;

 private:
  Mat vectors_;
  Eigen::VectorXd eigenvalues_;
};

std::vector<Vec> evolve(const UniverseModel& u, const Vec& psi0,
                        const std::vector<double>& times);
std::vector<Mat> evolve(const UniverseModel& u, const Mat& rho0,
                        const std::vector<double>& times);

struct DFReduction {
  Mat rho_df;      // on the multiplicity factor, renormalized
  double leakage;  // weight outside the working eigenspace
};
DFReduction df_reduce(const Vec& universe_state, const UniverseModel& u);
DFReduction df_reduce(const Mat& universe_density, const UniverseModel& u);

// The DF part of H_S on the multiplicity factor. Throws NotDFCompatible
// when H_S either moves weight out of the working eigenspace or has a
// cross term on it that is neither DF nor commutant.
Mat df_hamiltonian(const UniverseModel& u, double tol = 1e-9);

// rho_df(t) = exp(-i H_df t) rho_df(0) exp(+i H_df t)
std::vector<Mat> unitary_prediction(const Mat& rho_df0, const UniverseModel& u,
                                    const std::vector<double>& times);

// Uhlmann fidelity, squared convention: (tr sqrt(sqrt(r) s sqrt(r)))^2.
double state_fidelity(const Mat& rho, const Mat& sigma);
double von_neumann_entropy(const Mat& rho);

struct TrajectoryPoint {
  double t = 0;
  double df_fidelity = 0;
  double df_purity = 0;
  double system_purity = 0;
  double leakage = 0;
  double bath_entropy = 0;
};

struct ScenarioAssertion {
  std::string name;
  bool passed = false;
  double value = 0;
  double threshold = 0;
};

struct TrajectoryReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<TrajectoryPoint> points;
  std::vector<ScenarioAssertion> assertions;
  double min_df_fidelity = 1;
  double min_df_purity = 1;
  double min_system_purity = 1;
  double max_leakage = 0;
  double max_bath_entropy = 0;
  std::map<std::string, double> extras;

  bool passed() const;
};

struct ScenarioConfig {
  std::string scenario;
  int n_qubits = 0;
  int two_j = 0;
  Eigen::Index d_b = 3;
  std::uint64_t seed = 42;
  double coupling_strength = 1.0;
  SystemHamiltonianSpec h_sys;
  double t_max = 5.0;
  int steps = 50;
};

// Shipped scenario names: two-qubit-pi, three-qubit-j12, four-qubit-j0,
// four-qubit-j1, negative-control-single-qubit,
// negative-control-superposition.
const std::vector<std::string>& scenario_names();
ScenarioConfig default_scenario_config(const std::string& name);
TrajectoryReport run_scenario(const ScenarioConfig& config);
TrajectoryReport run_scenario(const std::string& name);

}  // namespace dfq
