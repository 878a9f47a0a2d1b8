#include "dfq/sim.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace dfq {

// ---------------------------------------------------------------------------
// seeded randomness
// ---------------------------------------------------------------------------

double GaussianSource::operator()() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // uniforms in (0,1), built from the top 53 bits so the stream only
  // depends on mt19937_64
  const double u1 = (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * M_PI * u2);
  have_spare_ = true;
  return r * std::cos(2.0 * M_PI * u2);
}

Mat GaussianSource::complex_matrix(Eigen::Index dim) {
  Mat m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) {
      const double re = (*this)();
      const double im = (*this)();
      m(r, c) = Complex(re, im);
    }
  return m;
}

Mat GaussianSource::hermitian(Eigen::Index dim, double spectral_norm) {
  Mat h = complex_matrix(dim);
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  if (norm > 0) h *= spectral_norm / norm;
  return h;
}

Vec GaussianSource::unit_vector(Eigen::Index dim) {
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = (*this)();
    const double im = (*this)();
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

// ---------------------------------------------------------------------------
// baths
// ---------------------------------------------------------------------------

BathSpec random_bath(Eigen::Index d_b, int n_couplings, double coupling_strength,
                     GaussianSource& source) {
  if (d_b < 2) throw std::invalid_argument("random_bath: bath dimension must be >= 2");
  BathSpec bath;
  bath.dim = d_b;
  bath.coupling_strength = coupling_strength;
  bath.h_bath = source.hermitian(d_b, 1.0);
  for (int i = 0; i < n_couplings; ++i)
    bath.couplings.push_back(source.hermitian(d_b, coupling_strength));
  return bath;
}

BathSpec random_bath(Eigen::Index d_b, int n_couplings, double coupling_strength,
                     std::uint64_t seed) {
  GaussianSource source(seed);
  BathSpec bath = random_bath(d_b, n_couplings, coupling_strength, source);
  bath.seed = seed;
  return bath;
}

Vec purify(const Mat& rho_bath) {
  if (!is_hermitian(rho_bath, kStructuralTol))
    throw std::invalid_argument("purify: density must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(rho_bath);
  const Eigen::Index d = rho_bath.rows();
  Vec p = Vec::Zero(d * d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double lambda = std::max(es.eigenvalues()(k), 0.0);
    if (lambda == 0.0) continue;
    const Vec col = es.eigenvectors().col(k);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) p(i * d + j) += std::sqrt(lambda) * col(i) * col(j);
  }
  return p;
}

BathSpec purified_bath(const BathSpec& bath) {
  BathSpec doubled;
  doubled.dim = bath.dim * bath.dim;
  doubled.seed = bath.seed;
  doubled.coupling_strength = bath.coupling_strength;
  const Mat id = Mat::Identity(bath.dim, bath.dim);
  doubled.h_bath = Eigen::kroneckerProduct(bath.h_bath, id);
  for (const auto& b : bath.couplings)
    doubled.couplings.push_back(Eigen::kroneckerProduct(b, id));
  return doubled;
}

// ---------------------------------------------------------------------------
// universe assembly
// ---------------------------------------------------------------------------

namespace {

void check_bath(const BathSpec& bath, size_t n_errors) {
  if (bath.dim < 2) throw std::invalid_argument("bath dimension must be >= 2");
  if (bath.h_bath.rows() != bath.dim || !is_hermitian(bath.h_bath, kStructuralTol))
    throw std::invalid_argument("bath Hamiltonian must be Hermitian of the bath dimension");
  if (bath.couplings.size() != n_errors)
    throw std::invalid_argument("need one bath coupling per error generator");
  for (const auto& b : bath.couplings)
    if (b.rows() != bath.dim || !is_hermitian(b, kStructuralTol))
      throw std::invalid_argument("bath couplings must be Hermitian of the bath dimension");
}

Mat assemble_system_hamiltonian(const SystemHamiltonianSpec& spec, int n_qubits,
                                const Mat& s3, const std::vector<Mat>& df_generators,
                                const std::vector<Mat>& error_generators) {
  const Eigen::Index d = Eigen::Index(1) << n_qubits;
  Mat h = spec.epsilon * s3;
  for (const auto& ex : spec.exchange)
    h += ex.strength * bond_operator(ex.site_a, ex.site_b, n_qubits);
  if (spec.alpha.size() > df_generators.size())
    throw std::invalid_argument("more alpha coefficients than DF generators");
  if (spec.beta.size() > error_generators.size())
    throw std::invalid_argument("more beta coefficients than error generators");
  for (size_t i = 0; i < spec.alpha.size(); ++i) h += spec.alpha[i] * df_generators[i];
  for (size_t i = 0; i < spec.beta.size(); ++i) h += spec.beta[i] * error_generators[i];
  if (h.rows() != d) throw std::logic_error("system Hamiltonian dimension mismatch");
  return h;
}

Mat assemble_total_hamiltonian(const Mat& h_system, const BathSpec& bath,
                               const std::vector<Mat>& error_generators) {
  const Mat id_s = Mat::Identity(h_system.rows(), h_system.cols());
  const Mat id_b = Mat::Identity(bath.dim, bath.dim);
  Mat h = Eigen::kroneckerProduct(h_system, id_b);
  h += Eigen::kroneckerProduct(id_s, bath.h_bath);
  for (size_t i = 0; i < error_generators.size(); ++i)
    h += Eigen::kroneckerProduct(error_generators[i], bath.couplings[i]);
  if (!is_hermitian(h, kStructuralTol))
    throw ContractViolation("assembled universe Hamiltonian is not Hermitian");
  return h;
}

}  // namespace

UniverseModel build_universe(int n_qubits, const BathSpec& bath,
                             const SystemHamiltonianSpec& h_sys, int two_j) {
  const Eigen::Index system_dim = Eigen::Index(1) << n_qubits;
  if (system_dim * bath.dim > kUniverseDimBudget)
    throw std::invalid_argument("build_universe: dimension budget exceeded");

  const SpinOperators s = total_spin(n_qubits);
  const CGDecomposition d = decompose(s);

  UniverseModel u;
  u.n_qubits = n_qubits;
  u.bath = bath;
  u.h_sys_spec = h_sys;
  u.error_generators = {s.s1, s.s2, s.s3};
  check_bath(bath, u.error_generators.size());

  if (n_qubits == 3 && two_j == 1) {
    const auto t = three_qubit_tau_ambient();
    u.df_generators = {t[0], t[1], t[2]};
  } else if (n_qubits == 4 && two_j == 0) {
    const auto t = four_qubit_tau_j0_ambient();
    u.df_generators = {t[0], t[1], t[2]};
  } else if (n_qubits == 4 && two_j == 2) {
    const auto t = four_qubit_tau_j1_ambient();
    u.df_generators = {t[0], t[1], t[2]};
  }

  u.factored = factorize(d, two_j);  // throws if j is absent
  u.h_system = assemble_system_hamiltonian(h_sys, n_qubits, s.s3, u.df_generators,
                                           u.error_generators);
  u.h_total = assemble_total_hamiltonian(u.h_system, bath, u.error_generators);
  return u;
}

UniverseModel build_two_qubit_pi_universe(const BathSpec& bath,
                                          const SystemHamiltonianSpec& h_sys) {
  if (4 * bath.dim > kUniverseDimBudget)
    throw std::invalid_argument("build_two_qubit_pi_universe: dimension budget exceeded");

  auto [pi, tau] = two_qubit_pi_tau();

  UniverseModel u;
  u.n_qubits = 2;
  u.bath = bath;
  u.h_sys_spec = h_sys;
  for (const auto& g : tau.generators) u.error_generators.push_back(g.mat());
  for (const auto& g : pi.generators) u.df_generators.push_back(g.mat());
  check_bath(bath, u.error_generators.size());

  u.factored = two_qubit_factored_space();
  u.h_system = assemble_system_hamiltonian(h_sys, 2, total_spin(2).s3, u.df_generators,
                                           u.error_generators);
  u.h_total = assemble_total_hamiltonian(u.h_system, bath, u.error_generators);
  return u;
}

// ---------------------------------------------------------------------------
// evolution
// ---------------------------------------------------------------------------

UniverseEvolution::UniverseEvolution(const Mat& h_total) {
  if (!is_hermitian(h_total, kStructuralTol))
    throw ContractViolation("UniverseEvolution: Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(h_total);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("UniverseEvolution: eigensolver failed");
  vectors_ = es.eigenvectors();
  eigenvalues_ = es.eigenvalues();
}

Vec UniverseEvolution::apply(const Vec& psi0, double t) const {
  const Complex im(0, 1);
  Vec phases = (-im * t * eigenvalues_.cast<Complex>().array()).exp();
  return vectors_ * (phases.asDiagonal() * (vectors_.adjoint() * psi0));
}

Mat UniverseEvolution::apply(const Mat& rho0, double t) const {
  const Complex im(0, 1);
  Vec phases = (-im * t * eigenvalues_.cast<Complex>().array()).exp();
  const Mat u = vectors_ * phases.asDiagonal() * vectors_.adjoint();
  return u * rho0 * u.adjoint();
}

std::vector<Vec> evolve(const UniverseModel& u, const Vec& psi0,
                        const std::vector<double>& times) {
  if (psi0.size() != u.universe_dim())
    throw std::invalid_argument("evolve: state dimension mismatch");
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("evolve: initial state is not normalized");
  const UniverseEvolution prop(u.h_total);
  std::vector<Vec> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(prop.apply(psi0, t));
  return out;
}

std::vector<Mat> evolve(const UniverseModel& u, const Mat& rho0,
                        const std::vector<double>& times) {
  if (rho0.rows() != u.universe_dim())
    throw std::invalid_argument("evolve: state dimension mismatch");
  if (std::abs(rho0.trace() - Complex(1, 0)) > 1e-10)
    throw std::invalid_argument("evolve: initial density is not normalized");
  const UniverseEvolution prop(u.h_total);
  std::vector<Mat> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(prop.apply(rho0, t));
  return out;
}

// ---------------------------------------------------------------------------
// reductions and predictions
// ---------------------------------------------------------------------------

namespace {

// psi as a (system x bath) coefficient matrix
Mat system_bath_matrix(const Vec& psi, Eigen::Index d_s, Eigen::Index d_b) {
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMajor>(psi.data(), d_s, d_b);
}

DFReduction reduce_system_density(const Mat& rho_s, const UniverseModel& u) {
  const auto& f = u.factored;
  Mat compressed = f.compress(rho_s);
  const double weight = compressed.trace().real();
  DFReduction out;
  out.leakage = 1.0 - weight / rho_s.trace().real();
  compressed /= weight;
  out.rho_df = partial_trace(compressed, f.mult_dim, f.irrep_dim, Factor::left);
  return out;
}

}  // namespace

DFReduction df_reduce(const Vec& universe_state, const UniverseModel& u) {
  const Mat m = system_bath_matrix(universe_state, u.system_dim(), u.bath.dim);
  return reduce_system_density(Mat(m * m.adjoint()), u);
}

DFReduction df_reduce(const Mat& universe_density, const UniverseModel& u) {
  const Mat rho_s =
      partial_trace(universe_density, u.system_dim(), u.bath.dim, Factor::left);
  return reduce_system_density(rho_s, u);
}

Mat df_hamiltonian(const UniverseModel& u, double tol) {
  const auto& f = u.factored;
  const Mat p = f.projector();
  const Mat id = Mat::Identity(p.rows(), p.cols());
  const double off_block = max_abs(Mat((id - p) * u.h_system * p));
  if (off_block > tol)
    throw NotDFCompatible(
        "system Hamiltonian does not preserve the working eigenspace", off_block);

  const auto split = split_product_operator(f.compress(u.h_system), f.mult_dim, f.irrep_dim);
  if (split.cross_residual > tol)
    throw NotDFCompatible(
        "system Hamiltonian has a term neither in the DF algebra nor its commutant",
        split.cross_residual);
  return split.left;
}

std::vector<Mat> unitary_prediction(const Mat& rho_df0, const UniverseModel& u,
                                    const std::vector<double>& times) {
  const Mat h_df = df_hamiltonian(u);
  const UniverseEvolution prop(h_df);
  std::vector<Mat> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(prop.apply(rho_df0, t));
  return out;
}

double state_fidelity(const Mat& rho, const Mat& sigma) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  Vec sqrt_evals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<Complex>();
  const Mat sqrt_rho =
      es.eigenvectors() * sqrt_evals.asDiagonal() * es.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Mat> inner(sqrt_rho * sigma * sqrt_rho);
  // eigensolver noise at ~1e-15 would blow up under the square root, so
  // clip relative to the leading eigenvalue
  const double cutoff = 1e-12 * std::max(inner.eigenvalues().maxCoeff(), 0.0);
  double root_sum = 0;
  for (Eigen::Index i = 0; i < inner.eigenvalues().size(); ++i)
    if (inner.eigenvalues()(i) > cutoff) root_sum += std::sqrt(inner.eigenvalues()(i));
  return root_sum * root_sum;
}

double von_neumann_entropy(const Mat& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  double s = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lambda = es.eigenvalues()(i);
    if (lambda > 1e-14) s -= lambda * std::log(lambda);
  }
  // eigenvalues rounding just above 1 can leave s at -1e-15
  return std::max(s, 0.0);
}

// ---------------------------------------------------------------------------
// scenarios
// ---------------------------------------------------------------------------

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "two-qubit-pi",          "three-qubit-j12",
      "four-qubit-j0",         "four-qubit-j1",
      "negative-control-single-qubit", "negative-control-superposition"};
  return names;
}

ScenarioConfig default_scenario_config(const std::string& name) {
  ScenarioConfig c;
  c.scenario = name;
  if (name == "two-qubit-pi") {
    c.n_qubits = 2;
    c.two_j = -1;  // full space, no eigenspace selection
    c.h_sys.alpha = {0.8, 0.5, 1.2};
    c.h_sys.beta = {0.3, -0.4, 0.7};
  } else if (name == "three-qubit-j12") {
    c.n_qubits = 3;
    c.two_j = 1;
    c.h_sys.epsilon = 1.0;
  } else if (name == "four-qubit-j0") {
    c.n_qubits = 4;
    c.two_j = 0;
    c.h_sys.epsilon = 1.0;
  } else if (name == "four-qubit-j1") {
    c.n_qubits = 4;
    c.two_j = 2;
    c.h_sys.epsilon = 1.0;
  } else if (name == "negative-control-single-qubit") {
    c.n_qubits = 1;
    c.two_j = 1;
    c.h_sys.epsilon = 1.0;
  } else if (name == "negative-control-superposition") {
    c.n_qubits = 3;
    c.two_j = 1;
    c.h_sys.epsilon = 1.0;
  } else {
    throw std::invalid_argument("unknown scenario: " + name);
  }
  return c;
}

bool TrajectoryReport::passed() const {
  for (const auto& a : assertions)
    if (!a.passed) return false;
  return true;
}

TrajectoryReport run_scenario(const ScenarioConfig& config) {
  GaussianSource source(config.seed);
  BathSpec bath = random_bath(config.d_b, 3, config.coupling_strength, source);
  bath.seed = config.seed;

  const bool is_two_qubit_pi = config.scenario == "two-qubit-pi";
  const UniverseModel model =
      is_two_qubit_pi ? build_two_qubit_pi_universe(bath, config.h_sys)
                      : build_universe(config.n_qubits, bath, config.h_sys, config.two_j);

  // draw order is fixed: bath operators, bath vector, then system factors
  const Vec bath_vec = source.unit_vector(bath.dim);
  Vec system_vec;
  if (config.scenario == "negative-control-superposition") {
    const auto d = decompose(total_spin(config.n_qubits));
    const auto f_low = model.factored;
    const auto f_high = factorize(d, config.n_qubits);  // the top-j sector
    const Vec psi = source.unit_vector(f_low.mult_dim);
    const Vec phi = source.unit_vector(f_low.irrep_dim);
    const Vec top = source.unit_vector(f_high.dim());
    Vec product(f_low.dim());
    for (Eigen::Index a = 0; a < f_low.mult_dim; ++a)
      for (Eigen::Index b = 0; b < f_low.irrep_dim; ++b)
        product(a * f_low.irrep_dim + b) = psi(a) * phi(b);
    system_vec = (f_low.isometry * product + f_high.isometry * top) / std::sqrt(2.0);
  } else {
    const Vec psi = source.unit_vector(model.factored.mult_dim);
    const Vec phi = source.unit_vector(model.factored.irrep_dim);
    Vec product(model.factored.dim());
    for (Eigen::Index a = 0; a < model.factored.mult_dim; ++a)
      for (Eigen::Index b = 0; b < model.factored.irrep_dim; ++b)
        product(a * model.factored.irrep_dim + b) = psi(a) * phi(b);
    system_vec = model.factored.isometry * product;
  }
  const Vec psi0 = Eigen::kroneckerProduct(system_vec, bath_vec);

  if (config.steps < 2) throw std::invalid_argument("schedule needs at least 2 steps");
  std::vector<double> times(static_cast<size_t>(config.steps));
  for (int i = 0; i < config.steps; ++i)
    times[static_cast<size_t>(i)] = config.t_max * double(i) / double(config.steps - 1);

  const UniverseEvolution prop(model.h_total);
  const DFReduction initial = df_reduce(psi0, model);
  const auto predictions = unitary_prediction(initial.rho_df, model, times);

  TrajectoryReport report;
  report.scenario = config.scenario;
  report.seed = config.seed;
  report.max_leakage = 0;
  double norm_drift = 0;
  double sector_weight_deviation = 0;

  for (size_t i = 0; i < times.size(); ++i) {
    const Vec psi_t = prop.apply(psi0, times[i]);
    norm_drift = std::max(norm_drift, std::abs(psi_t.norm() - 1.0));

    const Mat m = system_bath_matrix(psi_t, model.system_dim(), model.bath.dim);
    const Mat rho_s = m * m.adjoint();
    const Mat rho_b = m.transpose() * m.conjugate();

    const DFReduction red = reduce_system_density(rho_s, model);

    TrajectoryPoint pt;
    pt.t = times[i];
    pt.leakage = red.leakage;
    pt.df_purity = (red.rho_df * red.rho_df).trace().real();
    pt.df_fidelity = state_fidelity(red.rho_df, predictions[i]);
    pt.system_purity = (rho_s * rho_s).trace().real();
    pt.bath_entropy = von_neumann_entropy(rho_b);
    report.points.push_back(pt);

    report.min_df_fidelity = std::min(report.min_df_fidelity, pt.df_fidelity);
    report.min_df_purity = std::min(report.min_df_purity, pt.df_purity);
    report.min_system_purity = std::min(report.min_system_purity, pt.system_purity);
    report.max_leakage = std::max(report.max_leakage, pt.leakage);
    report.max_bath_entropy = std::max(report.max_bath_entropy, pt.bath_entropy);
    sector_weight_deviation =
        std::max(sector_weight_deviation, std::abs(pt.leakage - 0.5));
  }
  report.extras["universe_norm_drift"] = norm_drift;

  auto assert_that = [&](const std::string& name, bool ok, double value,
                         double threshold) {
    report.assertions.push_back(ScenarioAssertion{name, ok, value, threshold});
  };

  const bool df_scenario =
      is_two_qubit_pi || config.scenario == "three-qubit-j12" ||
      config.scenario == "four-qubit-j0" || config.scenario == "four-qubit-j1";
  if (df_scenario) {
    assert_that("df_fidelity_floor", report.min_df_fidelity >= 1.0 - 1e-8,
                report.min_df_fidelity, 1.0 - 1e-8);
    assert_that("leakage_ceiling", report.max_leakage <= 1e-10, report.max_leakage,
                1e-10);
  }
  if (config.scenario == "three-qubit-j12")
    assert_that("system_decoheres", report.min_system_purity < 0.999,
                report.min_system_purity, 0.999);
  if (config.scenario == "negative-control-single-qubit")
    assert_that("system_decoheres", report.min_system_purity < 0.9,
                report.min_system_purity, 0.9);
  if (config.scenario == "negative-control-superposition") {
    assert_that("sector_weight_half", sector_weight_deviation <= 1e-8,
                sector_weight_deviation, 1e-8);
    report.extras["weight_low_sector"] = 1.0 - report.points.front().leakage;
    report.extras["weight_high_sector"] = report.points.front().leakage;
  }
  return report;
}

TrajectoryReport run_scenario(const std::string& name) {
  return run_scenario(default_scenario_config(name));
}

}  // namespace dfq
