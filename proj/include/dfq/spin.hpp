#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dfq/pauli.hpp"

// Total-pseudospin operators and the Clebsch-Gordan structure of the
// N-qubit space: S^2 eigenspaces with multiplicities, and the isometries
// identifying each eigenspace with (multiplicity space) (x) (spin-j space).

namespace dfq {

// Half-integer spin labels are carried as 2j (an exact integer), rendered
// as "p/2" for odd p and as a plain integer otherwise.
std::string spin_label(int two_j);
// Parses "3/2", "2" or "0"; throws std::invalid_argument on anything else.
int parse_spin_label(const std::string& label);

struct SpinOperators {
  int n_qubits = 0;
  Mat s1, s2, s3;   // S_i = (1/2) sum over sites of sigma_i
  Mat s_squared;    // sum S_i^2
  Mat s_plus;       // S_1 + i S_2
  Mat s_minus;      // S_1 - i S_2

  const Mat& component(int i) const;  // i in 1..3
};

// 1 <= n_qubits <= 6.
SpinOperators total_spin(int n_qubits);

struct CGBlock {
  int two_j = 0;         // 2j
  int multiplicity = 0;  // n_j
  // Columns are |k,m>, k-major with m descending within each copy.
  Mat basis;
  Mat projector;

  double j() const { return 0.5 * two_j; }
  double casimir() const { return j() * (j() + 1.0); }
  Eigen::Index irrep_dim() const { return two_j + 1; }
  Eigen::Index dim() const { return multiplicity * irrep_dim(); }
};

struct CGDecomposition {
  int n_qubits = 0;
  std::vector<CGBlock> blocks;  // j descending

  const CGBlock& block(int two_j) const;  // throws std::out_of_range
  bool has_block(int two_j) const;
};

// Ladder construction: orthonormal highest-weight vectors from the kernel
// of S_+ on each weight space, lowered with S_- and normalized.
CGDecomposition decompose(const SpinOperators& s);

// Closed-form multiplicity n_j = C(N, N/2 - j) - C(N, N/2 - j - 1);
// the cross-check for decompose. two_j must have the parity of N and
// satisfy 0 <= 2j <= N.
int multiplicity_formula(int n_qubits, int two_j);

// An isometry V : C^{mult_dim} (x) C^{irrep_dim} -> ambient space with
// orthonormal columns; V|k>(x)|m> = |k,m>. The left factor carries the
// DF algebra, the right one the error algebra.
struct FactoredSpace {
  Eigen::Index mult_dim = 0;
  Eigen::Index irrep_dim = 0;
  Mat isometry;
  std::optional<int> two_j;  // set when this factors an S^2 eigenspace

  Eigen::Index dim() const { return mult_dim * irrep_dim; }
  Mat projector() const { return isometry * isometry.adjoint(); }
  // V^dagger O V, the representation of an ambient operator on the
  // factored coordinates.
  Mat compress(const Mat& ambient_op) const;
};

FactoredSpace factorize(const CGDecomposition& d, int two_j);

// Checks that conjugation by exp(-i t S_i) acts as 1 (x) (unitary) on the
// factored coordinates, i.e. that the error algebra only touches the
// right factor.
struct FactorActionReport {
  double t = 0;
  double max_cross_deviation = 0;     // worst || V' U V - 1 (x) q || over i
  std::array<Mat, 3> irrep_factors;   // the extracted q_i
  bool ok = false;
};

FactorActionReport conjugation_action_check(const SpinOperators& s,
                                            const FactoredSpace& f, double t,
                                            double tol = 1e-9);

// Splits an operator on C^a (x) C^b as A (x) 1 + 1 (x) B + R with the
// scalar part assigned to A; returns (A, B, max_abs(R)). The workhorse
// behind DF-compatibility checks and unitary predictions.
struct ProductSplit {
  Mat left;
  Mat right;
  double cross_residual = 0;
};
ProductSplit split_product_operator(const Mat& op, Eigen::Index dim_left,
                                    Eigen::Index dim_right);

}  // namespace dfq
