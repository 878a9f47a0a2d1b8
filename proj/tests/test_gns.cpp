#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dfq/commutant.hpp"
#include "dfq/gns.hpp"

using namespace dfq;

namespace {

std::mt19937_64 rng(4242);

Vec random_unit_vector(Eigen::Index dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v / v.norm();
}

// The pi algebra as a 4-element basis, plus the state f(pi3) = -1.
MatrixAlgebra pi_algebra() {
  auto [pi, tau] = two_qubit_pi_tau();
  std::vector<Operator> basis = {Operator(Mat::Identity(4, 4), "1")};
  for (const auto& g : pi.generators) basis.push_back(g);
  return make_algebra("two-qubit-pi", std::move(basis));
}

StateFunctional pi3_ground_state() {
  auto [pi, tau] = two_qubit_pi_tau();
  const Mat rho = 0.25 * (Mat::Identity(4, 4) - pi.generators[2].mat());
  return make_state(pi_algebra(), rho);
}

Mat pi_plus() {
  auto [pi, tau] = two_qubit_pi_tau();
  return 0.5 * (pi.generators[0].mat() + Complex(0, 1) * pi.generators[1].mat());
}

}  // namespace

TEST_CASE("algebra construction invariants") {
  CHECK(pi_algebra().dim() == 4);
  CHECK(pi_algebra().product_closure_residual < 1e-12);

  const auto full = pauli_string_algebra(2);
  CHECK(full.dim() == 16);
  CHECK(full.ambient_dim == 4);

  // dependent basis rejected
  auto [pi, tau] = two_qubit_pi_tau();
  std::vector<Operator> dependent = {Operator(Mat::Identity(4, 4)), pi.generators[0],
                                     Operator(Mat(2.0 * pi.generators[0].mat()))};
  CHECK_THROWS_AS(make_algebra("dep", std::move(dependent)), std::invalid_argument);

  // missing identity rejected
  std::vector<Operator> no_id = {pi.generators[0], pi.generators[1]};
  CHECK_THROWS_AS(make_algebra("no-id", std::move(no_id)), std::invalid_argument);

  // pi generators close onto the 4-dimensional span
  const auto gen = generated_algebra("pi-gen", pi.generators);
  CHECK(gen.dim() == 4);

  // pi and tau together generate everything
  std::vector<Operator> both = pi.generators;
  for (const auto& g : tau.generators) both.push_back(g);
  CHECK(generated_algebra("pi-tau", both).dim() == 16);
}

TEST_CASE("state functionals") {
  const auto f = pi3_ground_state();
  auto [pi, tau] = two_qubit_pi_tau();

  CHECK(std::abs(evaluate(f, Mat::Identity(4, 4)) - 1.0) < 1e-14);
  CHECK(std::abs(evaluate(f, pi.generators[2].mat()) + 1.0) < 1e-14);
  CHECK(std::abs(evaluate(f, pi.generators[0].mat())) < 1e-14);
  CHECK(std::abs(evaluate(f, pi.generators[1].mat())) < 1e-14);

  // linearity is exact
  const Mat a = pi.generators[0].mat(), b = pi.generators[2].mat();
  const Complex c(0.7, -0.3);
  CHECK(std::abs(evaluate(f, c * a + b) - (c * evaluate(f, a) + evaluate(f, b))) <
        1e-14);

  SUBCASE("invalid densities rejected") {
    CHECK_THROWS_AS(make_state(pi_algebra(), Mat::Identity(4, 4)),
                    std::invalid_argument);  // trace 4
    Mat neg = Mat::Zero(4, 4);
    neg(0, 0) = 1.001;
    neg(1, 1) = -0.001;
    CHECK_THROWS_AS(make_state(pi_algebra(), neg), PositivityViolation);
  }
}

TEST_CASE("gns construction on the pi example") {
  const auto f = pi3_ground_state();
  const auto rep = gns_construct(f);

  CHECK(rep.dimension == 2);
  CHECK(rep.gram_rank == 2);

  // classes of 1 and pi_+ are the orthonormal basis |-1), |1)
  const Mat id = Mat::Identity(4, 4);
  const Vec ground = rep.class_coords(id);
  const Vec excited = rep.class_coords(pi_plus());
  CHECK(std::abs(ground.norm() - 1.0) < 1e-12);
  CHECK(std::abs(excited.norm() - 1.0) < 1e-12);
  CHECK(std::abs(ground.dot(excited)) < 1e-12);

  auto [pi, tau] = two_qubit_pi_tau();
  auto sandwich = [&](const Vec& u, const Mat& op, const Vec& v) {
    return Complex(u.adjoint() * rep.represent(op) * v);
  };
  // (1| pi_3 |1) = 1, (-1| pi_3 |-1) = -1, (1| pi_{1,2} |1) = 0
  CHECK(std::abs(sandwich(excited, pi.generators[2].mat(), excited) - 1.0) < 1e-12);
  CHECK(std::abs(sandwich(ground, pi.generators[2].mat(), ground) + 1.0) < 1e-12);
  CHECK(std::abs(sandwich(excited, pi.generators[0].mat(), excited)) < 1e-12);
  CHECK(std::abs(sandwich(excited, pi.generators[1].mat(), excited)) < 1e-12);

  // same number straight from the functional: f(pi_- pi_3 pi_+) = 1
  CHECK(std::abs(transition_amplitude(f, pi_plus(), pi.generators[2].mat(), pi_plus()) -
                 1.0) < 1e-14);

  // cyclic vector reproduces the state on every basis element
  for (const auto& a : f.algebra.basis) {
    const Complex via_rep = rep.cyclic.adjoint() * rep.represent(a.mat()) * rep.cyclic;
    CHECK(std::abs(via_rep - evaluate(f, a.mat())) < 1e-10);
  }

  CHECK(homomorphism_residual(rep, f) < 1e-9);
}

TEST_CASE("gns equivalence classes") {
  const auto f = pi3_ground_state();
  auto [pi, tau] = two_qubit_pi_tau();
  const Mat id = Mat::Identity(4, 4);
  const Mat pi_minus = pi_plus().adjoint();

  CHECK(equivalence_class_check(f, pi.generators[0].mat(), pi.generators[0].mat()));
  CHECK(equivalence_class_check(f, pi_minus, Mat(Mat::Zero(4, 4))));
  CHECK(equivalence_class_check(f, Mat(id + pi.generators[2].mat()), Mat(Mat::Zero(4, 4))));
  CHECK_FALSE(equivalence_class_check(f, id, pi_plus()));

  // f((1 - pi_+)*(1 - pi_+)) = 1 + f(pi_- pi_+) = 2
  const Mat diff = id - pi_plus();
  CHECK(std::abs(evaluate(f, diff.adjoint() * diff) - 2.0) < 1e-14);
}

TEST_CASE("gns of the full algebra in the maximally mixed state") {
  const auto full = pauli_string_algebra(2);
  const auto f = make_state(full, Mat(0.25 * Mat::Identity(4, 4)));
  const auto rep = gns_construct(f);

  CHECK(rep.dimension == 16);  // the algebra acts on itself
  // Gram is the identity in the Pauli-string basis
  CHECK(max_abs(Mat(rep.gram - Mat::Identity(16, 16))) < 1e-12);
  CHECK(homomorphism_residual(rep, f) < 1e-9);
}

TEST_CASE("gns dimension is basis-independent") {
  const auto f = pi3_ground_state();
  const Eigen::Index n = f.algebra.dim();

  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat t(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) t(r, c) = Complex(gauss(rng), gauss(rng));
  REQUIRE(std::abs(t.determinant()) > 1e-6);

  std::vector<Operator> rotated;
  for (Eigen::Index r = 0; r < n; ++r) {
    Mat m = Mat::Zero(4, 4);
    for (Eigen::Index c = 0; c < n; ++c)
      m += t(r, c) * f.algebra.basis[static_cast<size_t>(c)].mat();
    rotated.emplace_back(m, "r" + std::to_string(r));
  }
  const auto f2 = make_state(make_algebra("pi-rotated", std::move(rotated)), f.density);
  CHECK(gns_construct(f2).dimension == gns_construct(f).dimension);
}

TEST_CASE("gram positivity violation is reported") {
  // bypass make_state to feed a non-positive "density" into the Gram build
  Mat bad = Mat::Zero(4, 4);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  StateFunctional f{pi_algebra(), bad};
  CHECK_THROWS_AS(gns_construct(f), PositivityViolation);
}

TEST_CASE("purity relative to a factor") {
  const auto table = bell_identification();
  const auto f2q = two_qubit_factored_space();

  SUBCASE("mixed on the whole algebra, pure on the pi factor") {
    const Mat rho = 0.5 * (table[0].state * table[0].state.adjoint() +
                           table[1].state * table[1].state.adjoint());
    const auto on_pi = purity_on_subalgebra(rho, f2q, Factor::left);
    CHECK(on_pi.purity == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(on_pi.is_pure);
    CHECK(on_pi.leakage < 1e-12);

    const auto on_tau = purity_on_subalgebra(rho, f2q, Factor::right);
    CHECK(on_tau.purity == doctest::Approx(0.5).epsilon(1e-10));
    CHECK_FALSE(on_tau.is_pure);
  }

  SUBCASE("product pure state is pure on both factors") {
    const Vec psi = random_unit_vector(2), phi = random_unit_vector(2);
    Vec prod(4);
    for (Eigen::Index a = 0; a < 2; ++a)
      for (Eigen::Index b = 0; b < 2; ++b) prod(a * 2 + b) = psi(a) * phi(b);
    const Vec ambient = f2q.isometry * prod;
    const Mat rho = ambient * ambient.adjoint();
    CHECK(purity_on_subalgebra(rho, f2q, Factor::left).is_pure);
    CHECK(purity_on_subalgebra(rho, f2q, Factor::right).is_pure);
  }

  SUBCASE("support outside the eigenspace raises a leakage error") {
    const auto d = decompose(total_spin(3));
    const auto f12 = factorize(d, 1);
    const auto f32 = factorize(d, 3);
    const Vec outside = f32.isometry * random_unit_vector(4);
    const Vec inside = f12.isometry * random_unit_vector(4);
    const Mat rho = 0.5 * (outside * outside.adjoint() + inside * inside.adjoint());
    CHECK_THROWS_AS(purity_on_subalgebra(rho, f12, Factor::left), LeakageError);
    try {
      purity_on_subalgebra(rho, f12, Factor::left);
    } catch (const LeakageError& e) {
      CHECK(e.weight == doctest::Approx(0.5).epsilon(1e-9));
    }
  }
}

TEST_CASE("gns of the DF algebra has the multiplicity dimension") {
  // N=3: the commutant of the collective errors is a *-algebra; a product
  // state (pure (x) arbitrary) on the factored eigenspace must induce a
  // 2-dimensional representation.
  const auto s = total_spin(3);
  const auto d = decompose(s);
  const auto f12 = factorize(d, 1);

  const auto cb = commutant({s.s1, s.s2, s.s3});
  REQUIRE(cb.dimension() == 5);
  std::vector<Operator> basis;
  for (size_t i = 0; i < cb.basis.size(); ++i)
    basis.emplace_back(cb.basis[i], "c" + std::to_string(i));
  const auto df_algebra = make_algebra("df-3", std::move(basis));

  const Vec psi = random_unit_vector(2);
  Mat gauge = Mat::Zero(2, 2);  // an arbitrary mixed state on the spin factor
  const Vec g1 = random_unit_vector(2), g2 = random_unit_vector(2);
  gauge = 0.6 * g1 * g1.adjoint() + 0.4 * g2 * g2.adjoint();

  Mat factored = Mat::Zero(4, 4);
  for (Eigen::Index a = 0; a < 2; ++a)
    for (Eigen::Index b = 0; b < 2; ++b)
      for (Eigen::Index c = 0; c < 2; ++c)
        for (Eigen::Index e = 0; e < 2; ++e)
          factored(a * 2 + c, b * 2 + e) += psi(a) * std::conj(psi(b)) * gauge(c, e);
  const Mat rho = f12.isometry * factored * f12.isometry.adjoint();

  const auto f = make_state(df_algebra, rho);
  const auto rep = gns_construct(f);
  CHECK(rep.dimension == 2);
  CHECK(homomorphism_residual(rep, f) < 1e-9);
}
