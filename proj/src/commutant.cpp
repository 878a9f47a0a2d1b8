#include "dfq/commutant.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

namespace dfq {

namespace {

constexpr int kEps[3][3][3] = {
    {{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
    {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
    {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}},
};

Mat expected_su2_rhs(const GeneratorSet& g, int i, int j) {
  const Complex two_i(0, 2);
  Mat rhs = Mat::Zero(g.generators[0].dim(), g.generators[0].dim());
  for (int k = 0; k < 3; ++k)
    if (kEps[i][j][k] != 0)
      rhs += two_i * static_cast<double>(kEps[i][j][k]) *
             g.generators[static_cast<size_t>(k)].mat();
  return rhs;
}

}  // namespace

double RelationReport::worst() const {
  double w = std::max({max_su2_violation, casimir_deviation, df_condition_violation,
                       std::abs(casimir_value - casimir_expected)});
  if (anticommutator_deviation) w = std::max(w, *anticommutator_deviation);
  return w;
}

RelationReport verify_relations(const GeneratorSet& g) {
  if (g.generators.size() != 3)
    throw std::invalid_argument("verify_relations: expected exactly 3 generators");
  const Eigen::Index dim = g.generators[0].dim();

  RelationReport report;
  report.set_name = g.name;
  report.casimir_expected = g.expected_casimir;

  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Mat lhs = commutator(g.generators[static_cast<size_t>(i)].mat(),
                                 g.generators[static_cast<size_t>(j)].mat());
      report.max_su2_violation =
          std::max(report.max_su2_violation, max_abs(Mat(lhs - expected_su2_rhs(g, i, j))));
    }
  }

  Mat casimir = Mat::Zero(dim, dim);
  for (const auto& t : g.generators) casimir += t.mat() * t.mat();
  report.casimir_value = casimir.trace().real() / static_cast<double>(dim);
  report.casimir_deviation =
      max_abs(Mat(casimir - report.casimir_value * Mat::Identity(dim, dim)));

  if (g.pauli_like) {
    double dev = 0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        Mat ac = anticommutator(g.generators[static_cast<size_t>(i)].mat(),
                                g.generators[static_cast<size_t>(j)].mat());
        if (i == j) ac -= 2.0 * Mat::Identity(dim, dim);
        dev = std::max(dev, max_abs(ac));
      }
    }
    report.anticommutator_deviation = dev;
  }

  for (const auto& t : g.generators)
    for (const auto& e : g.error_checks)
      report.df_condition_violation =
          std::max(report.df_condition_violation, max_abs(commutator(t.mat(), e.mat())));

  return report;
}

std::pair<GeneratorSet, GeneratorSet> two_qubit_pi_tau() {
  const Mat s0 = pauli_matrix(0), s1 = pauli_matrix(1), s2 = pauli_matrix(2),
            s3 = pauli_matrix(3);
  auto kp = [](const Mat& a, const Mat& b) {
    return Mat(Eigen::kroneckerProduct(a, b));
  };

  GeneratorSet pi;
  pi.name = "two-qubit-pi";
  pi.ambient_dim = 4;
  pi.pauli_like = true;
  pi.generators = {Operator::hermitian(kp(s0, s1), "pi_1", kStructuralTol),
                   Operator::hermitian(kp(s3, s2), "pi_2", kStructuralTol),
                   Operator::hermitian(kp(s3, s3), "pi_3", kStructuralTol)};

  GeneratorSet tau;
  tau.name = "two-qubit-tau";
  tau.ambient_dim = 4;
  tau.pauli_like = true;
  tau.generators = {Operator::hermitian(kp(s2, s1), "tau_1", kStructuralTol),
                    Operator::hermitian(kp(s3, s0), "tau_2", kStructuralTol),
                    Operator::hermitian(kp(s1, s1), "tau_3", kStructuralTol)};

  // Each triple is the other's error algebra.
  pi.error_checks = tau.generators;
  tau.error_checks = pi.generators;
  return {pi, tau};
}

std::array<BellVector, 4> bell_identification() {
  auto [pi, tau] = two_qubit_pi_tau();
  const Mat& pi3 = pi.generators[2].mat();
  const Mat& tau3 = tau.generators[2].mat();
  const Mat id = Mat::Identity(4, 4);

  std::array<BellVector, 4> table;
  size_t slot = 0;
  for (int j : {+1, -1}) {
    for (int k : {+1, -1}) {
      // Rank-1 joint projector; its unit eigenvector is the Bell state.
      const Mat proj = 0.25 * (id + double(j) * pi3) * (id + double(k) * tau3);
      Eigen::SelfAdjointEigenSolver<Mat> es(proj);
      Vec v = es.eigenvectors().col(3);  // eigenvalue 1 is the largest

      for (Eigen::Index r = 0; r < 4; ++r) {
        if (std::abs(v(r)) > 1e-8) {
          v *= std::abs(v(r)) / v(r);  // first nonzero amplitude positive real
          break;
        }
      }
      table[slot++] = BellVector{j, k, std::move(v)};
    }
  }
  return table;
}

FactoredSpace two_qubit_factored_space() {
  const auto table = bell_identification();
  FactoredSpace f;
  f.mult_dim = 2;
  f.irrep_dim = 2;
  f.isometry = Mat(4, 4);
  for (size_t c = 0; c < 4; ++c) f.isometry.col(static_cast<Eigen::Index>(c)) = table[c].state;
  return f;
}

Mat bond_operator(int site_a, int site_b, int n_qubits) {
  if (site_a < 1 || site_a > n_qubits || site_b < 1 || site_b > n_qubits ||
      site_a == site_b)
    throw std::invalid_argument("bond_operator: sites must be distinct and in 1..N");
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  Mat out = Mat::Zero(dim, dim);
  for (int i = 1; i <= 3; ++i)
    out += site_operator(n_qubits, site_a, i) * site_operator(n_qubits, site_b, i);
  return out;
}

Mat epsilon_operator(const std::array<int, 3>& sites, int n_qubits) {
  if (sites[0] == sites[1] || sites[0] == sites[2] || sites[1] == sites[2])
    throw std::invalid_argument("epsilon_operator: sites must be distinct");
  for (int s : sites)
    if (s < 1 || s > n_qubits)
      throw std::invalid_argument("epsilon_operator: site out of range");

  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  Mat out = Mat::Zero(dim, dim);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        if (kEps[a][b][c] != 0)
          out += static_cast<double>(kEps[a][b][c]) *
                 site_operator(n_qubits, sites[0], a + 1) *
                 site_operator(n_qubits, sites[1], b + 1) *
                 site_operator(n_qubits, sites[2], c + 1);
  return out;
}

std::array<Mat, 3> three_qubit_tau_ambient() {
  const Mat b12 = bond_operator(1, 2, 3);
  const Mat b23 = bond_operator(2, 3, 3);
  const Mat b31 = bond_operator(3, 1, 3);
  const Mat e123 = epsilon_operator({1, 2, 3}, 3);
  return {(b12 - b23) / std::sqrt(12.0), e123 / std::sqrt(12.0),
          (b23 - 2.0 * b31 + b12) / 6.0};
}

std::array<Mat, 3> four_qubit_tau_j0_ambient() {
  const Mat b12 = bond_operator(1, 2, 4), b13 = bond_operator(1, 3, 4),
            b14 = bond_operator(1, 4, 4), b23 = bond_operator(2, 3, 4),
            b24 = bond_operator(2, 4, 4), b34 = bond_operator(3, 4, 4);
  const Mat e123 = epsilon_operator({1, 2, 3}, 4), e124 = epsilon_operator({1, 2, 4}, 4),
            e134 = epsilon_operator({1, 3, 4}, 4), e234 = epsilon_operator({2, 3, 4}, 4);
  // tau_3 restricts on H_0 to -i tau_1 tau_2, closing the su(2) triple;
  // it is the four-qubit analogue of (b23 - 2 b31 + b12)/6.
  return {(b14 + b23 - b12 - b34) / (4.0 * std::sqrt(3.0)),
          (e234 + e124 - e134 - e123) / (8.0 * std::sqrt(3.0)),
          (b12 + b34 + b14 + b23 - 2.0 * b13 - 2.0 * b24) / 12.0};
}

std::array<Mat, 3> four_qubit_tau_j1_ambient() {
  const Mat e123 = epsilon_operator({1, 2, 3}, 4), e124 = epsilon_operator({1, 2, 4}, 4),
            e134 = epsilon_operator({1, 3, 4}, 4), e234 = epsilon_operator({2, 3, 4}, 4);
  return {e134 / std::sqrt(3.0), (3.0 * e124 - e134) / (2.0 * std::sqrt(6.0)),
          -(e234 + e123) / (2.0 * std::sqrt(2.0))};
}

namespace {

GeneratorSet restricted_set(const std::string& name, int n_qubits,
                            const std::array<Mat, 3>& ambient, int two_j,
                            const CGDecomposition& d, bool pauli_like) {
  const FactoredSpace f = factorize(d, two_j);
  const SpinOperators s = total_spin(n_qubits);

  GeneratorSet g;
  g.name = name;
  g.ambient_dim = Eigen::Index(1) << n_qubits;
  g.pauli_like = pauli_like;
  for (size_t i = 0; i < 3; ++i)
    g.generators.push_back(Operator::hermitian(
        f.compress(ambient[i]), "tau_" + std::to_string(i + 1), kStructuralTol));
  for (int i = 1; i <= 3; ++i)
    g.error_checks.push_back(Operator::hermitian(
        f.compress(s.component(i)), "S_" + std::to_string(i), kStructuralTol));
  g.restriction = f;
  return g;
}

}  // namespace

GeneratorSet three_qubit_tau(const CGDecomposition& d) {
  if (d.n_qubits != 3)
    throw std::invalid_argument("three_qubit_tau: needs the N=3 decomposition");
  return restricted_set("three-qubit-j1/2", 3, three_qubit_tau_ambient(), 1, d, true);
}

GeneratorSet four_qubit_tau_j0(const CGDecomposition& d) {
  if (d.n_qubits != 4)
    throw std::invalid_argument("four_qubit_tau_j0: needs the N=4 decomposition");
  return restricted_set("four-qubit-j0", 4, four_qubit_tau_j0_ambient(), 0, d, true);
}

GeneratorSet four_qubit_tau_j1(const CGDecomposition& d) {
  if (d.n_qubits != 4)
    throw std::invalid_argument("four_qubit_tau_j1: needs the N=4 decomposition");
  GeneratorSet g = restricted_set("four-qubit-j1", 4, four_qubit_tau_j1_ambient(), 2, d, false);
  g.expected_casimir = 8.0;
  return g;
}

CommutantBasis commutant(const std::vector<Mat>& error_generators,
                         const std::optional<Mat>& subspace_isometry,
                         double singular_value_tol) {
  if (error_generators.empty())
    throw std::invalid_argument("commutant: need at least one generator");

  std::vector<Mat> gens;
  gens.reserve(error_generators.size());
  for (const auto& g : error_generators) {
    Mat eff = subspace_isometry ? Mat(subspace_isometry->adjoint() * g * *subspace_isometry)
                                : g;
    if (!is_hermitian(eff, kStructuralTol))
      throw std::invalid_argument("commutant: generators must be Hermitian");
    gens.push_back(std::move(eff));
  }

  const Eigen::Index d = gens[0].rows();
  const Eigen::Index d2 = d * d;
  const Mat id = Mat::Identity(d, d);

  // vec(XG - GX) = (G^T (x) 1 - 1 (x) G) vec(X), column-major vec.
  Mat stacked(static_cast<Eigen::Index>(gens.size()) * d2, d2);
  for (size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].rows() != d)
      throw std::invalid_argument("commutant: generators must share a dimension");
    stacked.middleRows(static_cast<Eigen::Index>(i) * d2, d2) =
        Eigen::kroneckerProduct(gens[i].transpose(), id) -
        Eigen::kroneckerProduct(id, gens[i]);
  }

  Eigen::BDCSVD<Mat> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();

  CommutantBasis out;
  for (Eigen::Index c = 0; c < d2; ++c) {
    const double sigma = c < sv.size() ? sv(c) : 0.0;
    if (sigma >= singular_value_tol) continue;
    Vec x = svd.matrixV().col(c);
    out.basis.push_back(Eigen::Map<const Mat>(x.data(), d, d));
  }
  return out;
}

}  // namespace dfq
