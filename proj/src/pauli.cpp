#include "dfq/pauli.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace dfq {

PauliString::PauliString(std::vector<int> labels) : labels_(std::move(labels)) {
  if (labels_.empty())
    throw std::invalid_argument("PauliString: needs at least one qubit");
  for (int l : labels_) {
    if (l < 0 || l > 3)
      throw std::invalid_argument("PauliString: labels must be in {0,1,2,3}");
  }
}

bool PauliString::is_identity() const {
  for (int l : labels_)
    if (l != 0) return false;
  return true;
}

Mat pauli_matrix(int i) {
  Mat s(2, 2);
  const Complex im(0, 1);
  switch (i) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -im, im, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default:
      throw std::invalid_argument("pauli_matrix: index must be in 0..3");
  }
  return s;
}

Mat realize(const PauliString& p) {
  Mat out = Mat::Identity(1, 1);
  for (int site = 1; site <= p.n_qubits(); ++site)
    out = Eigen::kroneckerProduct(out, pauli_matrix(p.label(site))).eval();
  return out;
}

Mat site_operator(int n_qubits, int site, int i) {
  if (site < 1 || site > n_qubits)
    throw std::invalid_argument("site_operator: site out of range");
  std::vector<int> labels(static_cast<size_t>(n_qubits), 0);
  labels[static_cast<size_t>(site - 1)] = i;
  return realize(PauliString(std::move(labels)));
}

namespace {
void check_same_dim(const Mat& a, const Mat& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}
}  // namespace

Mat multiply(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("multiply: dimension mismatch");
  return a * b;
}

Mat adjoint(const Mat& a) { return a.adjoint(); }

Mat commutator(const Mat& a, const Mat& b) {
  check_same_dim(a, b, "commutator");
  return a * b - b * a;
}

Mat anticommutator(const Mat& a, const Mat& b) {
  check_same_dim(a, b, "anticommutator");
  return a * b + b * a;
}

double frobenius_norm(const Mat& a) { return a.norm(); }

Mat matrix_exponential(const Mat& h, double t, double hermiticity_tol) {
  if (h.rows() != h.cols())
    throw std::invalid_argument("matrix_exponential: matrix must be square");
  if (max_abs(Mat(h - h.adjoint())) > hermiticity_tol)
    throw ContractViolation("matrix_exponential: input is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("matrix_exponential: eigensolver failed");

  const Complex im(0, 1);
  Vec phases = (-im * t * es.eigenvalues().cast<Complex>().array()).exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Mat partial_trace(const Mat& rho, Eigen::Index dim_left, Eigen::Index dim_right,
                  Factor keep) {
  if (rho.rows() != rho.cols() || rho.rows() != dim_left * dim_right)
    throw std::invalid_argument("partial_trace: dimensions do not match");
  if (keep == Factor::left) {
    Mat out = Mat::Zero(dim_left, dim_left);
    for (Eigen::Index a = 0; a < dim_left; ++a)
      for (Eigen::Index b = 0; b < dim_left; ++b)
        for (Eigen::Index k = 0; k < dim_right; ++k)
          out(a, b) += rho(a * dim_right + k, b * dim_right + k);
    return out;
  }
  Mat out = Mat::Zero(dim_right, dim_right);
  for (Eigen::Index a = 0; a < dim_right; ++a)
    for (Eigen::Index b = 0; b < dim_right; ++b)
      for (Eigen::Index k = 0; k < dim_left; ++k)
        out(a, b) += rho(k * dim_right + a, k * dim_right + b);
  return out;
}

}  // namespace dfq
