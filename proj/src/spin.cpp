#include "dfq/spin.hpp"

#include <bit>
#include <stdexcept>

#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

namespace dfq {

std::string spin_label(int two_j) {
  if (two_j < 0) throw std::invalid_argument("spin_label: negative 2j");
  if (two_j % 2 != 0) return std::to_string(two_j) + "/2";
  return std::to_string(two_j / 2);
}

int parse_spin_label(const std::string& label) {
  const auto slash = label.find('/');
  try {
    if (slash == std::string::npos) {
      const int j = std::stoi(label);
      if (j < 0) throw std::invalid_argument("");
      return 2 * j;
    }
    const int num = std::stoi(label.substr(0, slash));
    const int den = std::stoi(label.substr(slash + 1));
    if (den != 2 || num < 0) throw std::invalid_argument("");
    return num;
  } catch (const std::exception&) {
    throw std::invalid_argument("parse_spin_label: expected \"p/2\" or an integer, got \"" +
                                label + "\"");
  }
}

const Mat& SpinOperators::component(int i) const {
  switch (i) {
    case 1: return s1;
    case 2: return s2;
    case 3: return s3;
    default: throw std::invalid_argument("SpinOperators: component index must be 1..3");
  }
}

SpinOperators total_spin(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 6)
    throw std::invalid_argument("total_spin: n_qubits must be in 1..6");
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;

  SpinOperators s;
  s.n_qubits = n_qubits;
  s.s1 = Mat::Zero(dim, dim);
  s.s2 = Mat::Zero(dim, dim);
  s.s3 = Mat::Zero(dim, dim);
  for (int site = 1; site <= n_qubits; ++site) {
    s.s1 += 0.5 * site_operator(n_qubits, site, 1);
    s.s2 += 0.5 * site_operator(n_qubits, site, 2);
    s.s3 += 0.5 * site_operator(n_qubits, site, 3);
  }
  s.s_squared = s.s1 * s.s1 + s.s2 * s.s2 + s.s3 * s.s3;
  const Complex im(0, 1);
  s.s_plus = s.s1 + im * s.s2;
  s.s_minus = s.s1 - im * s.s2;
  return s;
}

const CGBlock& CGDecomposition::block(int two_j) const {
  for (const auto& b : blocks)
    if (b.two_j == two_j) return b;
  throw std::out_of_range("CGDecomposition: no block with j = " + spin_label(two_j));
}

bool CGDecomposition::has_block(int two_j) const {
  for (const auto& b : blocks)
    if (b.two_j == two_j) return true;
  return false;
}

namespace {

// Computational-basis indices with 2m = n_qubits - 2 popcount(index).
std::vector<Eigen::Index> weight_space_indices(int n_qubits, int two_m) {
  std::vector<Eigen::Index> idx;
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  for (Eigen::Index x = 0; x < dim; ++x) {
    const int pc = std::popcount(static_cast<unsigned>(x));
    if (n_qubits - 2 * pc == two_m) idx.push_back(x);
  }
  return idx;
}

// Rotate a vector so its largest-magnitude entry is positive real.
void fix_phase(Vec& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const Complex z = v(imax);
  if (std::abs(z) > 0) v *= std::abs(z) / z;
}

}  // namespace

CGDecomposition decompose(const SpinOperators& s) {
  const int n = s.n_qubits;
  const Eigen::Index dim = Eigen::Index(1) << n;
  const double kernel_tol = 1e-8;  // spectral gaps here are O(1)

  CGDecomposition d;
  d.n_qubits = n;

  Eigen::Index total_cols = 0;
  for (int two_j = n; two_j >= 0; two_j -= 2) {
    const auto w = weight_space_indices(n, two_j);
    const auto w_up = weight_space_indices(n, two_j + 2);

    // Highest-weight vectors: kernel of S_+ restricted to the m = j
    // weight space, orthonormal from the SVD.
    Mat kernel;
    if (w_up.empty()) {
      kernel = Mat::Identity(static_cast<Eigen::Index>(w.size()),
                             static_cast<Eigen::Index>(w.size()));
    } else {
      Mat restricted(w_up.size(), w.size());
      for (size_t r = 0; r < w_up.size(); ++r)
        for (size_t c = 0; c < w.size(); ++c)
          restricted(r, c) = s.s_plus(w_up[r], w[c]);
      Eigen::JacobiSVD<Mat> svd(restricted, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      const double cutoff = kernel_tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
      Eigen::Index rank = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
      kernel = svd.matrixV().rightCols(restricted.cols() - rank);
    }

    const int n_j = static_cast<int>(kernel.cols());
    if (n_j == 0) continue;

    CGBlock block;
    block.two_j = two_j;
    block.multiplicity = n_j;
    block.basis = Mat::Zero(dim, Eigen::Index(n_j) * (two_j + 1));

    for (int k = 0; k < n_j; ++k) {
      Vec hw = Vec::Zero(dim);
      for (size_t r = 0; r < w.size(); ++r) hw(w[r]) = kernel(r, k);
      fix_phase(hw);

      // |k,m> = normalized (S_-)^{j-m} |k,j>; normalizing each step keeps
      // the lowering phases positive.
      Vec v = hw;
      for (int step = 0; step <= two_j; ++step) {
        block.basis.col(Eigen::Index(k) * (two_j + 1) + step) = v;
        if (step == two_j) break;
        v = (s.s_minus * v).eval();
        const double nrm = v.norm();
        if (nrm < 1e-12)
          throw std::runtime_error(
              "decompose: lowering chain collapsed at N=" + std::to_string(n) +
              ", j=" + spin_label(two_j) + " (eigensolver failure?)");
        v /= nrm;
      }
    }

    block.projector = block.basis * block.basis.adjoint();
    total_cols += block.basis.cols();
    d.blocks.push_back(std::move(block));
  }

  if (total_cols != dim)
    throw std::runtime_error("decompose: blocks span " + std::to_string(total_cols) +
                             " of " + std::to_string(dim) + " dimensions at N=" +
                             std::to_string(n));
  return d;
}

namespace {
long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}
}  // namespace

int multiplicity_formula(int n_qubits, int two_j) {
  if (n_qubits < 1)
    throw std::invalid_argument("multiplicity_formula: n_qubits must be positive");
  if (two_j < 0 || two_j > n_qubits || (n_qubits - two_j) % 2 != 0)
    throw std::invalid_argument("multiplicity_formula: j = " + spin_label(two_j) +
                                " is not admissible for N = " + std::to_string(n_qubits));
  const int k = (n_qubits - two_j) / 2;
  return static_cast<int>(binom(n_qubits, k) - binom(n_qubits, k - 1));
}

Mat FactoredSpace::compress(const Mat& ambient_op) const {
  if (ambient_op.rows() != isometry.rows())
    throw std::invalid_argument("FactoredSpace::compress: dimension mismatch");
  return isometry.adjoint() * ambient_op * isometry;
}

FactoredSpace factorize(const CGDecomposition& d, int two_j) {
  const CGBlock& b = d.block(two_j);  // throws std::out_of_range if absent
  FactoredSpace f;
  f.mult_dim = b.multiplicity;
  f.irrep_dim = b.irrep_dim();
  f.isometry = b.basis;
  f.two_j = two_j;
  return f;
}

FactorActionReport conjugation_action_check(const SpinOperators& s,
                                            const FactoredSpace& f, double t,
                                            double tol) {
  FactorActionReport report;
  report.t = t;
  const Mat id_mult = Mat::Identity(f.mult_dim, f.mult_dim);
  for (int i = 1; i <= 3; ++i) {
    const Mat u = matrix_exponential(s.component(i), t);
    const Mat w = f.compress(u);
    // Average the diagonal blocks to extract the right-factor action.
    Mat q = Mat::Zero(f.irrep_dim, f.irrep_dim);
    for (Eigen::Index k = 0; k < f.mult_dim; ++k)
      q += w.block(k * f.irrep_dim, k * f.irrep_dim, f.irrep_dim, f.irrep_dim);
    q /= static_cast<double>(f.mult_dim);
    const double dev = max_abs(Mat(w - Eigen::kroneckerProduct(id_mult, q)));
    report.max_cross_deviation = std::max(report.max_cross_deviation, dev);
    report.irrep_factors[static_cast<size_t>(i - 1)] = std::move(q);
  }
  report.ok = report.max_cross_deviation <= tol;
  return report;
}

ProductSplit split_product_operator(const Mat& op, Eigen::Index dim_left,
                                    Eigen::Index dim_right) {
  if (op.rows() != op.cols() || op.rows() != dim_left * dim_right)
    throw std::invalid_argument("split_product_operator: dimensions do not match");

  const Complex scalar = op.trace() / static_cast<double>(dim_left * dim_right);
  Mat left = partial_trace(op, dim_left, dim_right, Factor::left) /
                 static_cast<double>(dim_right) -
             scalar * Mat::Identity(dim_left, dim_left);
  Mat right = partial_trace(op, dim_left, dim_right, Factor::right) /
                  static_cast<double>(dim_left) -
              scalar * Mat::Identity(dim_right, dim_right);

  Mat approx = Eigen::kroneckerProduct(left, Mat::Identity(dim_right, dim_right));
  approx += Eigen::kroneckerProduct(Mat::Identity(dim_left, dim_left), right);
  approx += scalar * Mat::Identity(op.rows(), op.cols());

  ProductSplit split;
  split.cross_residual = max_abs(Mat(op - approx));
  split.left = left + scalar * Mat::Identity(dim_left, dim_left);
  split.right = std::move(right);
  return split;
}

}  // namespace dfq
