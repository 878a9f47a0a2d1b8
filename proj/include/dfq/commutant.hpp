#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dfq/spin.hpp"

// Decoherence-free algebras as commutants of error generators, and the
// explicit generator sets for two, three and four qubits together with
// their su(2) relation checks.

namespace dfq {

// A named family of Hermitian generators, possibly restricted to an S^2
// eigenspace (in which case the matrices live on the factored coordinates
// and `restriction` holds the isometry back to the ambient space).
struct GeneratorSet {
  std::string name;
  std::vector<Operator> generators;
  // Operators every generator must commute with (the DF condition);
  // same coordinates as the generators.
  std::vector<Operator> error_checks;
  Eigen::Index ambient_dim = 0;
  std::optional<FactoredSpace> restriction;
  // True when the set claims the spin-1/2 structure tau_i^2 = 1,
  // [tau_j, tau_k]_+ = 2 delta_jk.
  bool pauli_like = false;
  double expected_casimir = 3.0;
};

struct RelationReport {
  std::string set_name;
  // max over (i,j) of || [t_i, t_j] - 2i sum_k eps_ijk t_k ||, max-entry norm
  double max_su2_violation = 0;
  double casimir_value = 0;      // fitted c = tr(sum t_i^2) / dim
  double casimir_expected = 0;   // the value the set claims
  double casimir_deviation = 0;  // || sum t_i^2 - c 1 ||
  // max over pairs of || [t_j, t_k]_+ - 2 delta_jk || ; only for pauli-like sets
  std::optional<double> anticommutator_deviation;
  // max over generators x error_checks of || [t_i, e_k] ||
  double df_condition_violation = 0;

  // the largest deviation from any claimed relation
  double worst() const;
};

RelationReport verify_relations(const GeneratorSet& g);

// The two commuting gl(2) triples of the two-qubit array:
// pi = (1 (x) s1, s3 (x) s2, s3 (x) s3), tau = (s2 (x) s1, s3 (x) 1, s1 (x) s1).
// Each set carries the other as its error_checks.
std::pair<GeneratorSet, GeneratorSet> two_qubit_pi_tau();

// Joint (pi_3, tau_3) eigenbasis, phase-fixed so the first nonzero
// amplitude is positive real. Ordered (+1,+1), (+1,-1), (-1,+1), (-1,-1).
struct BellVector {
  int pi3 = 0;
  int tau3 = 0;
  Vec state;
};
std::array<BellVector, 4> bell_identification();

// The two-qubit full-space factorization: first factor pi, second tau,
// assembled column-wise from the Bell table.
FactoredSpace two_qubit_factored_space();

// b_{jk} = 4 S^j . S^k = sum_i sigma_i^{(j)} sigma_i^{(k)}; symmetric in
// its (1-based, distinct) sites.
Mat bond_operator(int site_a, int site_b, int n_qubits);

// E_{jkl} = sum eps_{abc} sigma_a^{(j)} sigma_b^{(k)} sigma_c^{(l)} with
// identity on uninvolved sites; sites 1-based and distinct.
Mat epsilon_operator(const std::array<int, 3>& sites, int n_qubits);

// Ambient preimages of the restricted DF generators; restricting these to
// the named eigenspace yields the generator sets below.
std::array<Mat, 3> three_qubit_tau_ambient();
std::array<Mat, 3> four_qubit_tau_j0_ambient();
std::array<Mat, 3> four_qubit_tau_j1_ambient();

// DF generator triples restricted to their eigenspaces, with the
// restricted total-spin components attached as error checks.
GeneratorSet three_qubit_tau(const CGDecomposition& d);   // on H_{1/2}
GeneratorSet four_qubit_tau_j0(const CGDecomposition& d); // on H_0
GeneratorSet four_qubit_tau_j1(const CGDecomposition& d); // on H_1

// Basis of { X : [X, G] = 0 for all generators G }, computed from the
// null space of the stacked vectorized commutator maps. When a subspace
// isometry is given, generators are compressed onto it first. Basis
// elements are orthonormal in the Hilbert-Schmidt inner product.
struct CommutantBasis {
  std::vector<Mat> basis;
  Eigen::Index dimension() const { return static_cast<Eigen::Index>(basis.size()); }
};

CommutantBasis commutant(const std::vector<Mat>& error_generators,
                         const std::optional<Mat>& subspace_isometry = std::nullopt,
                         double singular_value_tol = 1e-9);

}  // namespace dfq
