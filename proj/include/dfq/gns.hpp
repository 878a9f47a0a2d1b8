#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dfq/spin.hpp"

// Finite-dimensional GNS construction: from a state functional on a
// concrete matrix algebra, the quotient inner-product space, the
// represented operators, and purity diagnostics relative to a factor.

namespace dfq {

// A linearly independent, adjoint-closed operator basis containing the
// identity in its span. Closure residuals are measured at construction.
struct MatrixAlgebra {
  std::string name;
  Eigen::Index ambient_dim = 0;
  std::vector<Operator> basis;
  double adjoint_closure_residual = 0;
  double product_closure_residual = -1;  // -1 when closure was not checked

  Eigen::Index dim() const { return static_cast<Eigen::Index>(basis.size()); }
};

// Verifies the invariants above; throws std::invalid_argument on a
// dependent basis, missing identity, or closure failure.
MatrixAlgebra make_algebra(std::string name, std::vector<Operator> basis,
                           bool check_product_closure = true, double tol = 1e-9);

// The full operator algebra of N qubits, in the Pauli-string basis.
MatrixAlgebra pauli_string_algebra(int n_qubits);

// Smallest product-closed span containing the identity and the given
// generators.
MatrixAlgebra generated_algebra(std::string name, const std::vector<Operator>& generators,
                                double tol = 1e-9);

// f(A) = trace(density * A). The density realizes the functional on the
// ambient space.
struct StateFunctional {
  MatrixAlgebra algebra;
  Mat density;
};

// Validates trace 1, Hermiticity, and positivity (min eigenvalue >= -1e-10).
StateFunctional make_state(MatrixAlgebra algebra, Mat density);

Complex evaluate(const StateFunctional& f, const Mat& a);
// f(a^dagger c b)
Complex transition_amplitude(const StateFunctional& f, const Mat& a, const Mat& c,
                             const Mat& b);
// true iff f((a-b)^dagger (a-b)) <= tol
bool equivalence_class_check(const StateFunctional& f, const Mat& a, const Mat& b,
                             double tol = 1e-12);

struct GNSRepresentation {
  Eigen::Index dimension = 0;
  Eigen::Index gram_rank = 0;
  Mat gram;            // G_ab = f(A_a^dagger A_b) on the algebra basis
  Mat class_basis;     // columns: orthonormal classes, algebra-basis coords
  std::vector<Mat> rep_map;  // one matrix on the GNS space per basis element
  Vec cyclic;          // the class of the identity
  Mat basis_vecs;      // vec'd algebra basis, for coordinate solves

  // Coefficients of an ambient operator in the algebra basis; throws if
  // the operator is outside the span.
  Vec algebra_coords(const Mat& a, double tol = 1e-8) const;
  // The equivalence class of a, in the orthonormal class basis.
  Vec class_coords(const Mat& a) const;
  // The represented operator, extended linearly from the basis.
  Mat represent(const Mat& a) const;
};

// Gram matrix, quotient by its null space (relative threshold), classes
// orthonormalized through the eigen-factorization of the Gram matrix.
// Throws PositivityViolation if the Gram matrix fails positivity.
GNSRepresentation gns_construct(const StateFunctional& f, double quotient_rel_tol = 1e-9);

// Worst multiplicativity / adjoint-compatibility defect of the GNS
// representation over sampled basis pairs.
double homomorphism_residual(const GNSRepresentation& rep, const StateFunctional& f,
                             int samples = 64, std::uint64_t seed = 1);

struct PurityReport {
  double purity = 0;
  bool is_pure = false;
  double leakage = 0;
};

// Compresses the density onto the factored eigenspace, renormalizes,
// traces out the complementary factor and reports trace(rho^2). Throws
// LeakageError when more than leakage_tol of the weight lies outside.
PurityReport purity_on_subalgebra(const Mat& density, const FactoredSpace& f,
                                  Factor which, double leakage_tol = 1e-6);

}  // namespace dfq
