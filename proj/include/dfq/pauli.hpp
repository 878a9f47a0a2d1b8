#pragma once

#include <initializer_list>
#include <vector>

#include "dfq/types.hpp"

// Dense numerical kernel: Pauli strings and their realizations as
// 2^N x 2^N matrices, plus the matrix operations the rest of the
// workbench is built from.

namespace dfq {

// A length-N word over {0,1,2,3}; label 0 is the identity factor.
class PauliString {
 public:
  PauliString(std::initializer_list<int> labels)
      : PauliString(std::vector<int>(labels)) {}

  explicit PauliString(std::vector<int> labels);

  int n_qubits() const { return static_cast<int>(labels_.size()); }
  // site is 1-based, matching the physics convention used throughout.
  int label(int site) const { return labels_.at(site - 1); }
  const std::vector<int>& labels() const { return labels_; }

  bool is_identity() const;

 private:
  std::vector<int> labels_;
};

// sigma_0 = identity, sigma_1 real off-diagonal, sigma_2 imaginary
// antisymmetric, sigma_3 = diag(1,-1).
Mat pauli_matrix(int i);

// Kronecker product of the single-site factors, qubit 1 leftmost / most
// significant.
Mat realize(const PauliString& p);

// sigma_i acting at `site` (1-based) of an N-qubit register, identity
// elsewhere.
Mat site_operator(int n_qubits, int site, int i);

Mat multiply(const Mat& a, const Mat& b);
Mat adjoint(const Mat& a);
Mat commutator(const Mat& a, const Mat& b);      // ab - ba
Mat anticommutator(const Mat& a, const Mat& b);  // ab + ba
double frobenius_norm(const Mat& a);

// exp(-i t h) for Hermitian h, via eigendecomposition so the result is
// unitary up to eigensolver error. Throws ContractViolation if h fails the
// Hermiticity check.
Mat matrix_exponential(const Mat& h, double t,
                       double hermiticity_tol = kStructuralTol);

// Partial trace of a density-like matrix on C^{dim_left} (x) C^{dim_right};
// keeps the named factor.
enum class Factor { left, right };
Mat partial_trace(const Mat& rho, Eigen::Index dim_left,
                  Eigen::Index dim_right, Factor keep);

}  // namespace dfq
