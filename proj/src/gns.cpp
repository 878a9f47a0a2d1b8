#include "dfq/gns.hpp"

#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace dfq {

namespace {

Vec vectorize(const Mat& a) {
  return Eigen::Map<const Vec>(a.data(), a.size());
}

Mat basis_matrix(const std::vector<Operator>& ops) {
  Mat b(ops[0].dim() * ops[0].dim(), static_cast<Eigen::Index>(ops.size()));
  for (size_t i = 0; i < ops.size(); ++i) b.col(static_cast<Eigen::Index>(i)) = vectorize(ops[i].mat());
  return b;
}

// Residual of v against the column span of q (orthonormal columns).
double span_residual(const Mat& q, const Vec& v) {
  return (v - q * (q.adjoint() * v)).norm();
}

}  // namespace

MatrixAlgebra make_algebra(std::string name, std::vector<Operator> basis,
                           bool check_product_closure, double tol) {
  if (basis.empty()) throw std::invalid_argument("make_algebra: empty basis");
  const Eigen::Index d = basis[0].dim();
  for (const auto& op : basis)
    if (op.dim() != d)
      throw std::invalid_argument("make_algebra: basis dimensions disagree");

  const Mat b = basis_matrix(basis);
  Eigen::ColPivHouseholderQR<Mat> qr(b);
  qr.setThreshold(tol);
  if (qr.rank() != b.cols())
    throw std::invalid_argument("make_algebra: basis is linearly dependent");
  const Mat q = qr.householderQ() * Mat::Identity(b.rows(), b.cols());

  if (span_residual(q, vectorize(Mat::Identity(d, d))) > tol * std::sqrt(double(d)))
    throw std::invalid_argument("make_algebra: identity is not in the span");

  MatrixAlgebra alg;
  alg.name = std::move(name);
  alg.ambient_dim = d;

  for (const auto& op : basis) {
    const double res = span_residual(q, vectorize(Mat(op.mat().adjoint())));
    alg.adjoint_closure_residual = std::max(alg.adjoint_closure_residual, res);
  }
  if (alg.adjoint_closure_residual > tol)
    throw std::invalid_argument("make_algebra: basis is not adjoint-closed");

  if (check_product_closure) {
    alg.product_closure_residual = 0;
    for (const auto& a : basis)
      for (const auto& c : basis) {
        const double res = span_residual(q, vectorize(Mat(a.mat() * c.mat())));
        alg.product_closure_residual = std::max(alg.product_closure_residual, res);
      }
    if (alg.product_closure_residual > tol)
      throw std::invalid_argument("make_algebra: basis is not closed under products");
  }

  alg.basis = std::move(basis);
  return alg;
}

MatrixAlgebra pauli_string_algebra(int n_qubits) {
  std::vector<Operator> basis;
  const int count = 1 << (2 * n_qubits);
  basis.reserve(static_cast<size_t>(count));
  for (int code = 0; code < count; ++code) {
    std::vector<int> labels(static_cast<size_t>(n_qubits));
    int c = code;
    std::string label;
    for (int qubit = 0; qubit < n_qubits; ++qubit) {
      labels[static_cast<size_t>(qubit)] = c & 3;
      label += "IXYZ"[c & 3];
      c >>= 2;
    }
    basis.emplace_back(realize(PauliString(labels)), label);
  }
  // trace-orthogonal, so closure holds by construction; skip the n^2 sweep
  return make_algebra("pauli-" + std::to_string(n_qubits), std::move(basis),
                      /*check_product_closure=*/n_qubits <= 2);
}

MatrixAlgebra generated_algebra(std::string name, const std::vector<Operator>& generators,
                                double tol) {
  if (generators.empty())
    throw std::invalid_argument("generated_algebra: no generators");
  const Eigen::Index d = generators[0].dim();

  std::vector<Operator> basis;
  Mat q(d * d, 0);  // orthonormal span, grown column by column
  auto try_add = [&](const Mat& m, const std::string& label) {
    Vec v = vectorize(m);
    Vec res = v - q * (q.adjoint() * v);
    if (res.norm() <= tol * std::max(1.0, v.norm())) return false;
    q.conservativeResize(Eigen::NoChange, q.cols() + 1);
    q.col(q.cols() - 1) = res / res.norm();
    basis.emplace_back(m, label);
    return true;
  };

  try_add(Mat::Identity(d, d), "1");
  for (const auto& g : generators) {
    try_add(g.mat(), g.label());
    try_add(g.mat().adjoint(), g.label() + "*");
  }

  // multiply out until the span stops growing
  bool grew = true;
  while (grew) {
    grew = false;
    const size_t current = basis.size();
    for (size_t a = 0; a < current; ++a)
      for (size_t b = 0; b < current; ++b)
        if (try_add(basis[a].mat() * basis[b].mat(),
                    basis[a].label() + "." + basis[b].label()))
          grew = true;
  }

  return make_algebra(std::move(name), std::move(basis), true, tol);
}

StateFunctional make_state(MatrixAlgebra algebra, Mat density) {
  if (density.rows() != algebra.ambient_dim || density.cols() != algebra.ambient_dim)
    throw std::invalid_argument("make_state: density dimension mismatch");
  if (!is_hermitian(density, kStructuralTol))
    throw std::invalid_argument("make_state: density must be Hermitian");
  if (std::abs(density.trace() - Complex(1, 0)) > kStructuralTol)
    throw std::invalid_argument("make_state: density must have unit trace");
  Eigen::SelfAdjointEigenSolver<Mat> es(density);
  if (es.eigenvalues().minCoeff() < -kStructuralTol)
    throw PositivityViolation("make_state: density has a negative eigenvalue");
  return StateFunctional{std::move(algebra), std::move(density)};
}

Complex evaluate(const StateFunctional& f, const Mat& a) {
  return (f.density * a).trace();
}

Complex transition_amplitude(const StateFunctional& f, const Mat& a, const Mat& c,
                             const Mat& b) {
  return (f.density * a.adjoint() * c * b).trace();
}

bool equivalence_class_check(const StateFunctional& f, const Mat& a, const Mat& b,
                             double tol) {
  const Mat diff = a - b;
  return std::abs(evaluate(f, diff.adjoint() * diff)) <= tol;
}

Vec GNSRepresentation::algebra_coords(const Mat& a, double tol) const {
  const Vec v = Eigen::Map<const Vec>(a.data(), a.size());
  const Vec x = basis_vecs.colPivHouseholderQr().solve(v);
  if ((basis_vecs * x - v).norm() > tol * std::max(1.0, v.norm()))
    throw std::invalid_argument("GNS: operator is not in the algebra span");
  return x;
}

Vec GNSRepresentation::class_coords(const Mat& a) const {
  return class_basis.adjoint() * gram * algebra_coords(a);
}

Mat GNSRepresentation::represent(const Mat& a) const {
  const Vec x = algebra_coords(a);
  Mat out = Mat::Zero(dimension, dimension);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    out += x(i) * rep_map[static_cast<size_t>(i)];
  return out;
}

GNSRepresentation gns_construct(const StateFunctional& f, double quotient_rel_tol) {
  const auto& basis = f.algebra.basis;
  const Eigen::Index n = f.algebra.dim();
  const Eigen::Index d = f.algebra.ambient_dim;

  Mat gram(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      gram(a, b) = evaluate(f, basis[static_cast<size_t>(a)].mat().adjoint() *
                                   basis[static_cast<size_t>(b)].mat());
  gram = 0.5 * (gram + gram.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  const Vec evals = es.eigenvalues().cast<Complex>();
  const double max_eval = es.eigenvalues().maxCoeff();
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw PositivityViolation("gns_construct: Gram matrix has eigenvalue " +
                              std::to_string(es.eigenvalues().minCoeff()));

  // surviving classes, orthonormalized by scaling the Gram eigenvectors
  const double cutoff = quotient_rel_tol * std::max(max_eval, 0.0);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < n; ++i)
    if (es.eigenvalues()(i) > cutoff) kept.push_back(i);

  GNSRepresentation rep;
  rep.dimension = static_cast<Eigen::Index>(kept.size());
  rep.gram_rank = rep.dimension;
  rep.gram = gram;
  rep.class_basis = Mat(n, rep.dimension);
  for (size_t i = 0; i < kept.size(); ++i)
    rep.class_basis.col(static_cast<Eigen::Index>(i)) =
        es.eigenvectors().col(kept[i]) / std::sqrt(es.eigenvalues()(kept[i]));

  // rep(C)_{uv} = <u~| C |v~> = sum_ab conj(X_au) X_bv f(A_a^t C A_b)
  std::vector<Mat> sandwich(static_cast<size_t>(n * n));
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      sandwich[static_cast<size_t>(a * n + b)] =
          basis[static_cast<size_t>(b)].mat() * f.density *
          basis[static_cast<size_t>(a)].mat().adjoint();

  rep.rep_map.reserve(static_cast<size_t>(n));
  for (Eigen::Index c = 0; c < n; ++c) {
    Mat t(n, n);
    const Mat& cm = basis[static_cast<size_t>(c)].mat();
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b)
        t(a, b) = (sandwich[static_cast<size_t>(a * n + b)] * cm).trace();
    rep.rep_map.push_back(rep.class_basis.adjoint() * t * rep.class_basis);
  }

  rep.basis_vecs = basis_matrix(basis);
  rep.cyclic = rep.class_coords(Mat::Identity(d, d));
  return rep;
}

double homomorphism_residual(const GNSRepresentation& rep, const StateFunctional& f,
                             int samples, std::uint64_t seed) {
  const auto& basis = f.algebra.basis;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, basis.size() - 1);

  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    const size_t a = pick(rng), b = pick(rng);
    const Mat lhs = rep.represent(basis[a].mat() * basis[b].mat());
    const Mat rhs = rep.rep_map[a] * rep.rep_map[b];
    worst = std::max(worst, max_abs(Mat(lhs - rhs)));

    const Mat adj = rep.represent(basis[a].mat().adjoint());
    worst = std::max(worst, max_abs(Mat(adj - rep.rep_map[a].adjoint())));
  }
  return worst;
}

PurityReport purity_on_subalgebra(const Mat& density, const FactoredSpace& f,
                                  Factor which, double leakage_tol) {
  if (density.rows() != f.isometry.rows())
    throw std::invalid_argument("purity_on_subalgebra: density dimension mismatch");

  const double total = density.trace().real();
  Mat compressed = f.compress(density);
  const double weight = compressed.trace().real();

  PurityReport report;
  report.leakage = 1.0 - weight / total;
  if (report.leakage > leakage_tol)
    throw LeakageError("purity_on_subalgebra: state leaks " +
                           std::to_string(report.leakage) + " outside the eigenspace",
                       report.leakage);

  compressed /= weight;
  const Mat reduced = partial_trace(compressed, f.mult_dim, f.irrep_dim,
                                    which == Factor::left ? Factor::left : Factor::right);
  report.purity = (reduced * reduced).trace().real();
  report.is_pure = report.purity >= 1.0 - 1e-8;
  return report;
}

}  // namespace dfq
