#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

// Core dense types and error categories shared by every module.
//
// Qubit ordering convention (used everywhere): the leftmost tensor factor
// is qubit 1 and occupies the most significant block of the index, i.e.
// realize((i1,...,iN)) = kron(sigma_i1, kron(sigma_i2, ...)).

namespace dfq {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Structural checks (Hermiticity, unitarity of built operators).
inline constexpr double kStructuralTol = 1e-10;
// Algebraic identity assertions, max-entry norm.
inline constexpr double kAlgebraicTol = 1e-12;

// Max-entry (Chebyshev) norm; the metric for algebraic identity checks.
inline double max_abs(const Mat& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline bool all_finite(const Mat& a) {
  return a.allFinite();
}

inline bool is_hermitian(const Mat& a, double tol = kStructuralTol) {
  return a.rows() == a.cols() && max_abs(Mat(a - a.adjoint())) <= tol;
}

inline bool is_unitary(const Mat& a, double tol = kStructuralTol) {
  if (a.rows() != a.cols()) return false;
  Mat gram = a.adjoint() * a;
  gram -= Mat::Identity(a.rows(), a.cols());
  return max_abs(gram) <= tol;
}

// Thrown when an operator handed to a routine violates its stated contract
// (e.g. a non-Hermitian Hamiltonian).
class ContractViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown by the GNS construction when a Gram matrix has a negative
// eigenvalue beyond tolerance, i.e. the input functional is not a state.
class PositivityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a density matrix carries too much weight outside the
// subspace a reduction was asked for.
class LeakageError : public std::runtime_error {
 public:
  LeakageError(const std::string& what, double leaked_weight)
      : std::runtime_error(what), weight(leaked_weight) {}
  double weight;
};

// Thrown when a system Hamiltonian has a cross term that is neither in the
// DF algebra nor in its commutant, so no unitary prediction exists.
class NotDFCompatible : public std::runtime_error {
 public:
  NotDFCompatible(const std::string& what, double cross_residual)
      : std::runtime_error(what), residual(cross_residual) {}
  double residual;
};

// A dense square complex matrix with a label and optional verified
// structure flags. The flag factories check the claimed property at
// construction and throw ContractViolation on failure.
class Operator {
 public:
  Operator() = default;

  explicit Operator(Mat m, std::string label = "")
      : m_(std::move(m)), label_(std::move(label)) {
    if (m_.rows() != m_.cols())
      throw std::invalid_argument("Operator: matrix must be square");
    if (!all_finite(m_))
      throw std::invalid_argument("Operator: entries must be finite");
  }

  static Operator hermitian(Mat m, std::string label = "",
                            double tol = kAlgebraicTol) {
    Operator op(std::move(m), std::move(label));
    if (max_abs(Mat(op.m_ - op.m_.adjoint())) > tol)
      throw ContractViolation("Operator '" + op.label_ +
                              "' tagged Hermitian but is not");
    op.hermitian_ = true;
    return op;
  }

  static Operator unitary(Mat m, std::string label = "",
                          double tol = kAlgebraicTol) {
    Operator op(std::move(m), std::move(label));
    Mat gram = op.m_.adjoint() * op.m_;
    gram -= Mat::Identity(op.dim(), op.dim());
    if (max_abs(gram) > tol)
      throw ContractViolation("Operator '" + op.label_ +
                              "' tagged unitary but is not");
    op.unitary_ = true;
    return op;
  }

  Eigen::Index dim() const { return m_.rows(); }
  const Mat& mat() const { return m_; }
  const std::string& label() const { return label_; }
  bool hermitian_flag() const { return hermitian_; }
  bool unitary_flag() const { return unitary_; }

 private:
  Mat m_;
  std::string label_;
  bool hermitian_ = false;
  bool unitary_ = false;
};

}  // namespace dfq
