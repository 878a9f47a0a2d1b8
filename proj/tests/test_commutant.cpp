#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/KroneckerProduct>

#include "dfq/commutant.hpp"

using namespace dfq;

namespace {

// Brute-force oracle: assemble the constraint matrix for [X, G_i] = 0 by
// explicit entry loops and count the kernel with a rank-revealing LU.
// Shares no code with commutant().
Eigen::Index commutant_dimension_oracle(const std::vector<Mat>& gens) {
  const Eigen::Index d = gens[0].rows();
  Mat constraints(static_cast<Eigen::Index>(gens.size()) * d * d, d * d);
  constraints.setZero();
  Eigen::Index row = 0;
  for (const auto& g : gens) {
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index c = 0; c < d; ++c) {
        // (XG - GX)(r,c) = sum_k X(r,k) G(k,c) - G(r,k) X(k,c)
        for (Eigen::Index k = 0; k < d; ++k) {
          constraints(row, r * d + k) += g(k, c);
          constraints(row, k * d + c) -= g(r, k);
        }
        ++row;
      }
    }
  }
  Eigen::FullPivLU<Mat> lu(constraints);
  lu.setThreshold(1e-9);
  return d * d - lu.rank();
}

double sorted_spectrum_deviation(const Mat& hermitian, std::vector<double> expected) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian);
  REQUIRE(es.eigenvalues().size() == static_cast<Eigen::Index>(expected.size()));
  double dev = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    dev = std::max(dev, std::abs(es.eigenvalues()(i) - expected[static_cast<size_t>(i)]));
  return dev;
}

std::vector<Mat> spin_components(const SpinOperators& s) { return {s.s1, s.s2, s.s3}; }

}  // namespace

TEST_CASE("two-qubit pi and tau triples") {
  auto [pi, tau] = two_qubit_pi_tau();

  // the relations hold exactly in floating point (all entries are exact)
  for (const auto& set : {pi, tau}) {
    const auto report = verify_relations(set);
    CHECK(report.max_su2_violation == 0.0);
    CHECK(report.casimir_value == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(report.casimir_deviation == 0.0);
    REQUIRE(report.anticommutator_deviation.has_value());
    CHECK(*report.anticommutator_deviation == 0.0);
    CHECK(report.df_condition_violation == 0.0);  // [tau_j, pi_k] = 0
  }

  // spot checks straight from the definitions
  const Mat lhs = commutator(pi.generators[0].mat(), pi.generators[1].mat());
  CHECK(max_abs(Mat(lhs - Complex(0, 2) * pi.generators[2].mat())) == 0.0);
  CHECK(max_abs(commutator(tau.generators[1].mat(), pi.generators[0].mat())) == 0.0);

  Mat casimir = Mat::Zero(4, 4);
  for (const auto& g : pi.generators) casimir += g.mat() * g.mat();
  CHECK(max_abs(Mat(casimir - 3.0 * Mat::Identity(4, 4))) == 0.0);
}

TEST_CASE("bell identification") {
  const auto table = bell_identification();
  const double r = 1.0 / std::sqrt(2.0);

  // amplitudes on (|11>, |1,-1>, |-1,1>, |-1,-1>)
  const std::array<Vec, 4> expected = {
      (Vec(4) << r, 0, 0, r).finished(),
      (Vec(4) << r, 0, 0, -r).finished(),
      (Vec(4) << 0, r, r, 0).finished(),
      (Vec(4) << 0, r, -r, 0).finished(),
  };
  for (size_t i = 0; i < 4; ++i)
    CHECK((table[i].state - expected[i]).cwiseAbs().maxCoeff() < 1e-12);

  auto [pi, tau] = two_qubit_pi_tau();
  for (const auto& bell : table) {
    CHECK((pi.generators[2].mat() * bell.state - double(bell.pi3) * bell.state)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK((tau.generators[2].mat() * bell.state - double(bell.tau3) * bell.state)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }

  // orthonormality
  for (size_t a = 0; a < 4; ++a)
    for (size_t b = 0; b < 4; ++b)
      CHECK(std::abs(table[a].state.dot(table[b].state) - (a == b ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("two-qubit factored space splits pi and tau") {
  const auto f = two_qubit_factored_space();
  CHECK(is_unitary(f.isometry, 1e-12));

  auto [pi, tau] = two_qubit_pi_tau();
  for (const auto& g : pi.generators) {
    const auto split = split_product_operator(f.compress(g.mat()), 2, 2);
    CHECK(split.cross_residual < 1e-12);
    CHECK(max_abs(split.right) < 1e-12);  // pi acts on the left factor only
  }
  for (const auto& g : tau.generators) {
    const auto split = split_product_operator(f.compress(g.mat()), 2, 2);
    CHECK(split.cross_residual < 1e-12);
    CHECK(max_abs(split.left) < 1e-12);
  }
}

TEST_CASE("bond operators") {
  const Mat b12 = bond_operator(1, 2, 2);
  CHECK(is_hermitian(b12, 1e-14));
  CHECK(std::abs(b12.trace()) < 1e-14);
  CHECK(sorted_spectrum_deviation(b12, {-3, 1, 1, 1}) < 1e-12);

  // scalar under collective rotations
  const auto s = total_spin(2);
  for (int i = 1; i <= 3; ++i)
    CHECK(max_abs(commutator(b12, s.component(i))) < 1e-13);

  CHECK(max_abs(Mat(bond_operator(2, 1, 2) - b12)) == 0.0);
  CHECK_THROWS_AS(bond_operator(1, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(bond_operator(0, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(bond_operator(1, 3, 2), std::invalid_argument);
}

TEST_CASE("epsilon operators") {
  const Mat e = epsilon_operator({1, 2, 3}, 3);
  CHECK(is_hermitian(e, 1e-13));

  const auto s = total_spin(3);
  CHECK(max_abs(commutator(e, s.s_squared)) < 1e-12);
  for (int i = 1; i <= 3; ++i)
    CHECK(max_abs(commutator(e, s.component(i))) < 1e-12);

  CHECK_THROWS_AS(epsilon_operator({1, 1, 2}, 3), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_operator({1, 2, 5}, 4), std::invalid_argument);
}

TEST_CASE("three-qubit tau generators on H_{1/2}") {
  const auto d = decompose(total_spin(3));
  const auto g = three_qubit_tau(d);
  REQUIRE(g.generators[0].dim() == 4);

  const auto report = verify_relations(g);
  CHECK(report.max_su2_violation <= 1e-12);
  CHECK(std::abs(report.casimir_value - 3.0) <= 1e-12);
  CHECK(report.casimir_deviation <= 1e-12);
  CHECK(report.df_condition_violation <= 1e-12);
  REQUIRE(report.anticommutator_deviation.has_value());
  CHECK(*report.anticommutator_deviation <= 1e-12);

  // tau_i acts on the multiplicity factor only
  REQUIRE(g.restriction.has_value());
  for (const auto& t : g.generators) {
    const auto split = split_product_operator(t.mat(), 2, 2);
    CHECK(split.cross_residual < 1e-9);
    CHECK(max_abs(split.right) < 1e-9);
  }
}

TEST_CASE("four-qubit tau generators on H_0") {
  const auto d = decompose(total_spin(4));
  const auto g = four_qubit_tau_j0(d);
  REQUIRE(g.generators[0].dim() == 2);

  const auto report = verify_relations(g);
  CHECK(report.max_su2_violation <= 1e-12);
  CHECK(std::abs(report.casimir_value - 3.0) <= 1e-12);
  CHECK(report.casimir_deviation <= 1e-12);
  REQUIRE(report.anticommutator_deviation.has_value());
  CHECK(*report.anticommutator_deviation <= 1e-12);

  // the total pseudospin acts as zero on H_0
  for (const auto& e : g.error_checks) CHECK(max_abs(e.mat()) <= 1e-12);
}

TEST_CASE("four-qubit tau generators on H_1") {
  const auto d = decompose(total_spin(4));
  const auto g = four_qubit_tau_j1(d);
  REQUIRE(g.generators[0].dim() == 9);

  const auto report = verify_relations(g);
  CHECK(report.max_su2_violation <= 1e-12);
  CHECK(std::abs(report.casimir_value - 8.0) <= 1e-12);
  CHECK(report.casimir_deviation <= 1e-12);
  CHECK(report.df_condition_violation <= 1e-12);
  CHECK_FALSE(report.anticommutator_deviation.has_value());

  // tau_3 is twice a spin-1 weight operator on the multiplicity factor:
  // eigenvalues {-2, 0, 2}, each three-fold
  CHECK(sorted_spectrum_deviation(g.generators[2].mat(),
                                  {-2, -2, -2, 0, 0, 0, 2, 2, 2}) < 1e-9);

  for (const auto& t : g.generators) {
    const auto split = split_product_operator(t.mat(), 3, 3);
    CHECK(split.cross_residual < 1e-9);
    CHECK(max_abs(split.right) < 1e-9);
  }
}

TEST_CASE("commutant dimensions against the null-space oracle") {
  struct Case {
    int n;
    Eigen::Index expected_full;
  };
  // full-space dimension is sum of n_j^2
  for (const auto& c : {Case{2, 2}, Case{3, 5}, Case{4, 14}}) {
    const auto s = total_spin(c.n);
    const auto basis = commutant(spin_components(s));
    CHECK(basis.dimension() == c.expected_full);
    CHECK(commutant_dimension_oracle(spin_components(s)) == c.expected_full);

    for (const auto& x : basis.basis)
      for (int i = 1; i <= 3; ++i)
        CHECK(max_abs(commutator(x, s.component(i))) < 1e-10);
  }

  SUBCASE("restricted to eigenspaces") {
    const auto s3 = total_spin(3);
    const auto d3 = decompose(s3);
    const auto f12 = factorize(d3, 1);
    CHECK(commutant(spin_components(s3), f12.isometry).dimension() == 4);

    const auto s4 = total_spin(4);
    const auto d4 = decompose(s4);
    CHECK(commutant(spin_components(s4), factorize(d4, 2).isometry).dimension() == 9);
    CHECK(commutant(spin_components(s4), factorize(d4, 0).isometry).dimension() == 4);

    // oracle agrees on the compressed generators
    std::vector<Mat> compressed;
    for (const auto& g : spin_components(s3)) compressed.push_back(f12.compress(g));
    CHECK(commutant_dimension_oracle(compressed) == 4);
  }

  CHECK_THROWS_AS(commutant({}), std::invalid_argument);
}

TEST_CASE("pi and tau products span the full two-qubit algebra") {
  auto [pi, tau] = two_qubit_pi_tau();
  std::vector<Mat> ops = {Mat::Identity(4, 4)};
  for (const auto& g : pi.generators) ops.push_back(g.mat());
  for (const auto& g : tau.generators) ops.push_back(g.mat());
  for (const auto& p : pi.generators)
    for (const auto& t : tau.generators) ops.push_back(p.mat() * t.mat());

  Mat gram(ops.size(), ops.size());
  for (size_t a = 0; a < ops.size(); ++a)
    for (size_t b = 0; b < ops.size(); ++b)
      gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          (ops[a].adjoint() * ops[b]).trace();
  Eigen::FullPivLU<Mat> lu(gram);
  lu.setThreshold(1e-9);
  CHECK(lu.rank() == 16);
}
