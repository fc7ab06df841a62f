#include "doctest.h"
#include "support.hpp"

#include "tgsd/dictionary.hpp"
#include "tgsd/solver.hpp"
#include "tgsd/synth.hpp"

#include <limits>

using namespace tgsd;
using namespace tgsd::testing;

namespace {

// vec(2 M X N + rho X) = (2 N^T kron M + rho I) vec(X), solved densely.
Matrix kronecker_oracle(const Matrix& m, const Matrix& n, const Matrix& pi, double rho) {
  const Eigen::Index p = m.rows(), q = n.rows();
  Matrix big(p * q, p * q);
  for (Eigen::Index j = 0; j < q; ++j)
    for (Eigen::Index l = 0; l < q; ++l) big.block(j * p, l * p, p, p) = 2.0 * n(l, j) * m;
  big.diagonal().array() += rho;
  const Eigen::VectorXd vec = Eigen::Map<const Eigen::VectorXd>(pi.data(), pi.size());
  const Eigen::VectorXd sol = big.partialPivLu().solve(vec);
  return Eigen::Map<const Matrix>(sol.data(), p, q);
}

std::shared_ptr<const GraphDictionary> share(GraphDictionary d) {
  return std::make_shared<const GraphDictionary>(std::move(d));
}
std::shared_ptr<const TimeDictionary> share(TimeDictionary d) {
  return std::make_shared<const TimeDictionary>(std::move(d));
}

// Same matrix, flagged non-orthonormal so fit takes the Sylvester path.
GraphDictionary general(GraphDictionary d) {
  d.orthonormal_columns = false;
  return d;
}
TimeDictionary general(TimeDictionary d) {
  d.orthonormal_rows = false;
  return d;
}

double rms(const Matrix& m) { return std::sqrt(m.squaredNorm() / static_cast<double>(m.size())); }

}  // namespace

// --- MaskedSignal and config -------------------------------------------------

TEST_CASE("masked signal: canonical zeros and counts") {
  Matrix x(2, 2), omega(2, 2);
  x << 1, 2, 3, 4;
  omega << 1, 0, 1, 1;
  const MaskedSignal s(x, omega);
  CHECK(s.x()(0, 1) == 0.0);
  CHECK(s.x()(1, 1) == 4.0);
  CHECK(s.observed_count() == 3);
  CHECK_FALSE(s.fully_observed());
  CHECK(MaskedSignal(x).fully_observed());
  CHECK(MaskedSignal(x, Matrix::Ones(2, 2)).fully_observed());
}

TEST_CASE("masked signal: validation") {
  CHECK(code_of([] { MaskedSignal(Matrix::Zero(2, 2), Matrix::Ones(2, 3)); }) == Errc::MaskShapeMismatch);
  CHECK(code_of([] { MaskedSignal(Matrix::Zero(2, 2), Matrix::Constant(2, 2, 0.5)); }) == Errc::RangeError);
}

TEST_CASE("solver config validation names the field") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.k = 0;
  try {
    c.validate();
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::RangeError);
    CHECK(std::string(e.what()).find("solver.k") != std::string::npos);
  }
  c = SolverConfig{};
  c.rho2 = 0.0;
  CHECK(code_of([&] { c.validate(); }) == Errc::RangeError);
  c = SolverConfig{};
  c.lambda1 = -1.0;
  CHECK(code_of([&] { c.validate(); }) == Errc::RangeError);
}

// --- shrink and D ------------------------------------------------------------

TEST_CASE("shrink: scalar cases") {
  auto one = [](double v, double tau) { return shrink(Matrix::Constant(1, 1, v), tau)(0, 0); };
  CHECK(one(0.5, 1.0) == 0.0);
  CHECK(one(2.0, 0.5) == 1.5);
  CHECK(one(-2.0, 0.5) == -1.5);
  CHECK(one(-0.5, 0.5) == 0.0);
  CHECK(code_of([] { shrink(Matrix::Ones(1, 1), -1.0); }) == Errc::RangeError);
}

TEST_CASE("shrink: identity at zero threshold and prox property") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = random_matrix(uniform_int(1, 12, rng), uniform_int(1, 12, rng), rng);
    CHECK(max_abs(shrink(m, 0.0) - m) == 0.0);
    const double tau = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
    const Matrix s = shrink(m, tau);
    for (Eigen::Index k = 0; k < m.size(); ++k) {
      const double v = m.data()[k], r = s.data()[k];
      if (std::abs(v) <= tau) CHECK(r == 0.0);
      else CHECK(r == doctest::Approx(v - std::copysign(tau, v)).epsilon(1e-14));
    }
  }
}

TEST_CASE("update_d: formula cases") {
  Matrix p(1, 3), x(1, 3), omega(1, 3);
  p << 7, 0, 3;
  x << 1, 4, 5;
  omega << 0, 1, 1;
  const Matrix d = update_d(p, x, omega, 1.0);
  CHECK(d(0, 0) == 7.0);
  CHECK(d(0, 1) == 2.0);
  CHECK(d(0, 2) == 4.0);
  const Matrix strong = update_d(p, x, omega, 1e6);
  CHECK(std::abs(strong(0, 1) - 4.0) <= 1e-5 * 4.0);
  CHECK(std::abs(strong(0, 2) - 5.0) <= 1e-5 * 5.0);
  CHECK(code_of([&] { update_d(p, x, Matrix::Ones(2, 3), 1.0); }) == Errc::ShapeMismatch);
}

// --- Sylvester ---------------------------------------------------------------

TEST_CASE("sylvester: identity sides give pi / 3") {
  Rng rng(32);
  const Matrix pi = random_matrix(4, 3, rng);
  const Matrix x = solve_regularized_sylvester(Matrix::Identity(4, 4), Matrix::Identity(3, 3), pi, 1.0);
  CHECK(max_abs(x - pi / 3.0) <= 1e-14);
}

TEST_CASE("sylvester: scalar case") {
  const Matrix x = solve_regularized_sylvester(Matrix::Constant(1, 1, 2.0), Matrix::Constant(1, 1, 1.0),
                                               Matrix::Constant(1, 1, 6.0), 2.0);
  CHECK(x(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sylvester: 5x4 against the Kronecker oracle") {
  Rng rng(33);
  const Matrix m = random_psd(5, rng), n = random_psd(4, rng), pi = random_matrix(5, 4, rng);
  const Matrix x = solve_regularized_sylvester(m, n, pi, 0.7);
  CHECK(max_abs(2.0 * m * x * n + 0.7 * x - pi) <= 1e-8);
  CHECK(max_abs(x - kronecker_oracle(m, n, pi, 0.7)) <= 1e-7);
}

TEST_CASE("sylvester: random PSD instances, including rank-deficient sides") {
  Rng rng(34);
  for (int trial = 0; trial < 60; ++trial) {
    const int p = uniform_int(1, 20, rng), q = uniform_int(1, 20, rng);
    const Matrix m = random_psd(p, rng, trial % 3 == 0 ? std::max(1, p / 2) : -1);
    const Matrix n = random_psd(q, rng, trial % 4 == 0 ? 1 : -1);
    const Matrix pi = random_matrix(p, q, rng, 10.0);
    const double rho = std::exp(std::uniform_real_distribution<double>(-3.0, 3.0)(rng));
    const Matrix x = solve_regularized_sylvester(m, n, pi, rho);
    CHECK(max_abs(sylvester_residual(m, x, n, pi, rho)) <= 1e-8);
    CHECK(max_abs(x - kronecker_oracle(m, n, pi, rho)) <= 1e-7);
  }
}

TEST_CASE("sylvester: argument checks") {
  Matrix asym = Matrix::Identity(2, 2);
  asym(0, 1) = 1e-3;
  CHECK(code_of([&] { solve_regularized_sylvester(asym, Matrix::Identity(2, 2), Matrix::Ones(2, 2), 1.0); }) ==
        Errc::AsymmetricInput);
  CHECK(code_of([] { solve_regularized_sylvester(Matrix::Identity(2, 2), Matrix::Identity(2, 2), Matrix::Ones(2, 2), 0.0); }) ==
        Errc::NonPositiveRho);
  CHECK(code_of([] { solve_regularized_sylvester(Matrix::Identity(2, 2), Matrix::Identity(3, 3), Matrix::Ones(2, 2), 1.0); }) ==
        Errc::ShapeMismatch);
  // asymmetry below the tolerance is accepted
  Matrix nearly = Matrix::Identity(2, 2);
  nearly(0, 1) = 1e-10;
  CHECK_NOTHROW(solve_regularized_sylvester(nearly, Matrix::Identity(2, 2), Matrix::Ones(2, 2), 1.0));
}

TEST_CASE("symmetric eigen: hand 2x2") {
  Matrix m(2, 2);
  m << 2, 1, 1, 2;
  const auto e = SymmetricEigen::of(m);
  CHECK(e.values(0) == doctest::Approx(1.0));
  CHECK(e.values(1) == doctest::Approx(3.0));
  CHECK(max_abs(e.vectors * e.values.asDiagonal() * e.vectors.transpose() - m) <= 1e-14);
}

// --- Y and W updates -----------------------------------------------------------

TEST_CASE("update_y: both branches agree for orthonormal psi and satisfy stationarity") {
  Rng rng(35);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = uniform_int(3, 30, rng), t = uniform_int(3, 30, rng), k = uniform_int(1, 6, rng);
    const Graph g = random_graph(n, 0.2, rng);
    const Matrix psi = build_gft(g).psi;
    const Matrix d = random_matrix(n, t, rng, 5.0), b = random_matrix(k, t, rng);
    const Matrix z = random_matrix(n, k, rng), g1 = random_matrix(n, k, rng);
    const double rho = 0.5 + trial;
    const Matrix y1 = update_y(d, psi, b, z, g1, rho, true);
    const Matrix y2 = update_y(d, psi, b, z, g1, rho, false);
    CHECK(max_abs(y1 - y2) <= 1e-8);
    const Matrix pi1 = y_rhs(d, psi, b, z, g1, rho);
    for (const Matrix* y : {&y1, &y2})
      CHECK(max_abs(sylvester_residual(psi.transpose() * psi, *y, b * b.transpose(), pi1, rho)) <= 1e-7);
  }
}

TEST_CASE("update_y: general psi satisfies stationarity") {
  Rng rng(36);
  const Matrix psi = random_matrix(12, 8, rng);
  const Matrix d = random_matrix(12, 15, rng), b = random_matrix(4, 15, rng);
  const Matrix z = random_matrix(8, 4, rng), g1 = random_matrix(8, 4, rng);
  const Matrix y = update_y(d, psi, b, z, g1, 1.3, false);
  const Matrix pi1 = y_rhs(d, psi, b, z, g1, 1.3);
  CHECK(max_abs(sylvester_residual(psi.transpose() * psi, y, b * b.transpose(), pi1, 1.3)) <= 1e-7);
}

TEST_CASE("update_y: proximal-only limit") {
  Rng rng(37);
  const Matrix psi = random_matrix(6, 5, rng), d = random_matrix(6, 7, rng), z = random_matrix(5, 3, rng);
  const Matrix b = Matrix::Zero(3, 7), g1 = Matrix::Zero(5, 3);
  CHECK(max_abs(update_y(d, psi, b, z, g1, 2.0, true) - z) <= 1e-14);
  CHECK(max_abs(update_y(d, psi, b, z, g1, 2.0, false) - z) <= 1e-12);
}

TEST_CASE("update_w: both branches agree for orthonormal phi and satisfy stationarity") {
  Rng rng(38);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = uniform_int(3, 30, rng), t = uniform_int(3, 40, rng), k = uniform_int(1, 6, rng);
    const Matrix phi = build_fourier(t).phi;
    const Matrix d = random_matrix(n, t, rng, 5.0), a = random_matrix(n, k, rng);
    const Matrix v = random_matrix(k, t, rng), g2 = random_matrix(k, t, rng);
    const double rho = 0.25 + trial;
    const Matrix w1 = update_w(d, a, phi, v, g2, rho, true);
    const Matrix w2 = update_w(d, a, phi, v, g2, rho, false);
    CHECK(max_abs(w1 - w2) <= 1e-8);
    const Matrix pi2 = w_rhs(d, a, phi, v, g2, rho);
    for (const Matrix* w : {&w1, &w2})
      CHECK(max_abs(sylvester_residual(a.transpose() * a, *w, phi * phi.transpose(), pi2, rho)) <= 1e-7);
  }
}

TEST_CASE("update_w: general phi satisfies stationarity; proximal-only limit") {
  Rng rng(39);
  const Matrix phi = build_ramanujan(24, 6).phi;
  const Matrix d = random_matrix(10, 24, rng), a = random_matrix(10, 3, rng);
  const Matrix v = random_matrix(3, phi.rows(), rng), g2 = random_matrix(3, phi.rows(), rng);
  const Matrix w = update_w(d, a, phi, v, g2, 0.8, false);
  const Matrix pi2 = w_rhs(d, a, phi, v, g2, 0.8);
  CHECK(max_abs(sylvester_residual(a.transpose() * a, w, phi * phi.transpose(), pi2, 0.8)) <= 1e-7);
  const Matrix zero_a = Matrix::Zero(10, 3), zero_g = Matrix::Zero(3, phi.rows());
  CHECK(max_abs(update_w(d, zero_a, phi, v, zero_g, 0.8, false) - v) <= 1e-12);
  CHECK(max_abs(update_w(d, zero_a, phi, v, zero_g, 0.8, true) - v) <= 1e-14);
}

TEST_CASE("updates reject mismatched shapes") {
  const Matrix psi = Matrix::Identity(3, 3);
  CHECK(code_of([&] { update_y(Matrix::Zero(3, 4), psi, Matrix::Zero(2, 5), Matrix::Zero(3, 2), Matrix::Zero(3, 2), 1.0, true); }) ==
        Errc::ShapeMismatch);
  CHECK(code_of([&] { update_w(Matrix::Zero(3, 4), Matrix::Zero(3, 2), Matrix::Identity(4, 4), Matrix::Zero(2, 3), Matrix::Zero(2, 3), 1.0, true); }) ==
        Errc::ShapeMismatch);
}

// --- objective -----------------------------------------------------------------

TEST_CASE("objective: zero model and exact fit") {
  const MaskedSignal zero(Matrix::Zero(2, 2));
  SolverConfig cfg;
  const Matrix I = Matrix::Identity(2, 2);
  CHECK(objective(I, I, Matrix::Zero(2, 1), Matrix::Zero(1, 2), Matrix::Zero(2, 1), Matrix::Zero(1, 2), zero.x(), zero, cfg) == 0.0);
  cfg.lambda1 = cfg.lambda2 = 0.0;
  Matrix y(2, 1), w(1, 2);
  y << 1, 2;
  w << 3, -1;
  const Matrix x = y * w;
  const MaskedSignal exact(x);
  CHECK(objective(I, I, y, w, y, w, x, exact, cfg) == 0.0);
}

TEST_CASE("objective: hand-computed 2x2 case") {
  // Psi = Phi = I, Y = Z = (1, 2)^T, W = V = (1, 1), D = [[2, 0], [0, 2]],
  // X = [[1, 9], [0, 3]], Omega = [[1, 0], [1, 1]].
  // model = [[1, 1], [2, 2]]; ||D - model||^2 = 1 + 1 + 4 + 0 = 6
  // l1: |Z| = 3, |V| = 2; mask term: (2-1)^2 + (0-0)^2 + (2-3)^2 = 2
  // f = 6 + 0.5 * 3 + 0.25 * 2 + 3 * 2 = 14
  const Matrix I = Matrix::Identity(2, 2);
  Matrix y(2, 1), w(1, 2), d(2, 2), x(2, 2), omega(2, 2);
  y << 1, 2;
  w << 1, 1;
  d << 2, 0, 0, 2;
  x << 1, 9, 0, 3;
  omega << 1, 0, 1, 1;
  SolverConfig cfg;
  cfg.lambda1 = 0.5;
  cfg.lambda2 = 0.25;
  cfg.lambda3 = 3.0;
  CHECK(objective(I, I, y, w, y, w, d, MaskedSignal(x, omega), cfg) == doctest::Approx(14.0).epsilon(1e-15));
}

// --- fit ---------------------------------------------------------------------

TEST_CASE("fit: single atom outer product is recovered") {
  Rng rng(40);
  const Graph g = random_graph(20, 0.2, rng);
  auto psi = share(build_gft(g));
  auto phi = share(build_ramanujan(30, 6));
  const Matrix x = psi->psi.col(3) * phi->phi.row(7);
  SolverConfig cfg;
  cfg.k = 1;
  cfg.lambda1 = cfg.lambda2 = 0.01;
  const auto model = fit(MaskedSignal(x), psi, phi, cfg);
  CHECK(rms(reconstruct(model) - x) <= 1e-3);
}

TEST_CASE("fit: noiseless in-span data, orthogonal and general dictionaries") {
  Rng rng(41);
  for (int variant = 0; variant < 4; ++variant) {
    const Graph g = random_graph(24, 0.2, rng);
    const int t = 36, k = 2;
    auto psi = share(variant % 2 == 0 ? build_gft(g) : build_graph_haar(g));
    auto phi = share(variant < 2 ? build_fourier(t) : build_spline(t, 12, 3));
    Matrix z = Matrix::Zero(psi->atoms(), k), v = Matrix::Zero(k, phi->atoms());
    std::bernoulli_distribution keep(0.25);
    std::normal_distribution<double> normal;
    for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = keep(rng) ? normal(rng) : 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = keep(rng) ? normal(rng) : 0.0;
    const Matrix x = psi->psi * z * v * phi->phi;
    SolverConfig cfg;
    cfg.k = k;
    cfg.lambda1 = cfg.lambda2 = 1e-3;
    const auto model = fit(MaskedSignal(x), psi, phi, cfg);
    INFO("variant " << variant);
    CHECK(rms(reconstruct(model) - x) <= 1e-3);
  }
}

TEST_CASE("fit: model bookkeeping") {
  SynthSpec spec;
  spec.n_groups = 3;
  spec.nodes_per_group = 8;
  spec.t = 40;
  spec.periods = {3, 4, 5};
  const auto sg = gen_graph(spec);
  const auto sig = gen_signal(sg, spec);
  auto psi = share(build_gft(sg.graph));
  auto phi = share(build_ramanujan(spec.t, 6));
  SolverConfig cfg;
  cfg.k = 3;
  cfg.max_iter = 60;
  cfg.track_stationarity = true;
  const auto model = fit(MaskedSignal(sig.noisy), psi, phi, cfg);
  CHECK(model.Y.rows() == psi->atoms());
  CHECK(model.Y.cols() == 3);
  CHECK(model.W.cols() == phi->atoms());
  CHECK(model.objective_trace.size() == static_cast<std::size_t>(model.iterations));
  CHECK(model.primal_residual_y.size() == static_cast<std::size_t>(model.iterations));
  CHECK(model.stationarity_w.size() == static_cast<std::size_t>(model.iterations));
  CHECK(model.objective_trace.back() <= model.initial_objective);
  CHECK(model.primal_residual_y.back() <= model.primal_residual_y.front());
  CHECK(model.primal_residual_w.back() <= model.primal_residual_w.front());
  CHECK(objective(model, MaskedSignal(sig.noisy)) == doctest::Approx(model.objective_trace.back()).epsilon(1e-12));
  // Z and V are the thresholded copies
  CHECK(max_abs(model.Z - shrink(model.Y - (model.Gamma1 - (model.Z - model.Y)) / cfg.rho1, cfg.lambda1 / cfg.rho1)) <= 1e-9);
  CHECK(&model.graph_coefficients() == &model.Z);
  CHECK(&model.time_coefficients() == &model.V);
  // D is X when nothing is missing
  CHECK(max_abs(model.D - sig.noisy) == 0.0);
}

// k = 1: with k > 1 the all-ones start is a symmetric point and rounding
// decides how the columns separate, so traces are not comparable.
TEST_CASE("fit: orthogonal and general code paths give the same trace") {
  Rng rng(42);
  const Graph g = random_graph(15, 0.3, rng);
  const Matrix x = random_matrix(15, 20, rng, 3.0);
  Matrix omega = random_mask(15, 20, 0.8, rng);
  SolverConfig cfg;
  cfg.k = 1;
  cfg.max_iter = 40;
  for (const bool masked : {false, true}) {
    const MaskedSignal signal = masked ? MaskedSignal(x, omega) : MaskedSignal(x);
    const auto a = fit(signal, share(build_gft(g)), share(build_fourier(20)), cfg);
    const auto b = fit(signal, share(general(build_gft(g))), share(general(build_fourier(20))), cfg);
    REQUIRE(a.iterations == b.iterations);
    for (std::size_t i = 0; i < a.objective_trace.size(); ++i)
      CHECK(std::abs(a.objective_trace[i] - b.objective_trace[i]) <= 1e-6);
  }
}

TEST_CASE("fit: deterministic within one process") {
  Rng rng(43);
  const Graph g = random_graph(18, 0.3, rng);
  const Matrix x = random_matrix(18, 24, rng);
  const MaskedSignal signal(x, random_mask(18, 24, 0.7, rng));
  SolverConfig cfg;
  cfg.max_iter = 50;
  const auto a = fit(signal, share(build_graph_haar(g)), share(build_ramanujan(24, 5)), cfg);
  const auto b = fit(signal, share(build_graph_haar(g)), share(build_ramanujan(24, 5)), cfg);
  REQUIRE(a.objective_trace.size() == b.objective_trace.size());
  for (std::size_t i = 0; i < a.objective_trace.size(); ++i) CHECK(a.objective_trace[i] == b.objective_trace[i]);
  CHECK(max_abs(a.Z - b.Z) == 0.0);
}

TEST_CASE("fit: heavy sparsity drives the model to zero") {
  Rng rng(44);
  const Graph g = random_graph(10, 0.3, rng);
  const Matrix x = random_matrix(10, 12, rng);
  SolverConfig cfg;
  cfg.lambda1 = cfg.lambda2 = 1e3;
  const auto model = fit(MaskedSignal(x), share(build_gft(g)), share(build_fourier(12)), cfg);
  CHECK(max_abs(reconstruct(model)) == 0.0);
}

TEST_CASE("fit: identity dictionaries act as masked low-rank completion") {
  Rng rng(45);
  const int n = 30, t = 40;
  const Matrix truth = random_matrix(n, 2, rng) * random_matrix(2, t, rng) + Matrix::Constant(n, t, 3.0);
  const Matrix omega = random_mask(n, t, 0.75, rng);
  const MaskedSignal signal(truth, omega);
  SolverConfig cfg;
  cfg.k = 3;
  cfg.lambda1 = cfg.lambda2 = 0.01;
  const auto model = fit(signal, share(identity_graph_dictionary(n)), share(identity_time_dictionary(t)), cfg);
  const Matrix recon = reconstruct(model);
  const Matrix held = Matrix::Ones(n, t) - omega;
  const double count = held.sum();
  const double model_err = std::sqrt((recon - truth).cwiseProduct(held).squaredNorm() / count);
  const double mean = truth.cwiseProduct(omega).sum() / omega.sum();
  const double mean_err = std::sqrt((Matrix::Constant(n, t, mean) - truth).cwiseProduct(held).squaredNorm() / count);
  CHECK(model_err < mean_err);
}

TEST_CASE("fit: errors") {
  Rng rng(46);
  const Graph g = random_graph(6, 0.5, rng);
  auto psi = share(build_gft(g));
  auto phi = share(build_fourier(8));
  SolverConfig cfg;
  CHECK(code_of([&] { fit(MaskedSignal(Matrix::Zero(5, 8)), psi, phi, cfg); }) == Errc::ShapeMismatch);
  CHECK(code_of([&] { fit(MaskedSignal(Matrix::Zero(6, 9)), psi, phi, cfg); }) == Errc::ShapeMismatch);
  Matrix bad = Matrix::Zero(6, 8);
  bad(2, 3) = std::numeric_limits<double>::quiet_NaN();
  try {
    fit(MaskedSignal(bad), psi, phi, cfg);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonFinite);
    CHECK(std::string(e.what()).find("iteration 1") != std::string::npos);
  }
  cfg.k = 0;
  CHECK(code_of([&] { fit(MaskedSignal(Matrix::Zero(6, 8)), psi, phi, cfg); }) == Errc::RangeError);
}

TEST_CASE("reconstruct: zero and unit coefficients") {
  Rng rng(47);
  DecompositionModel model;
  model.psi = share(build_gft(random_graph(7, 0.4, rng)));
  model.phi = share(build_fourier(9));
  model.Z = Matrix::Zero(7, 1);
  model.V = Matrix::Zero(1, 9);
  CHECK(max_abs(reconstruct(model)) == 0.0);
  model.Z(2, 0) = 1.0;
  model.V(0, 5) = 1.0;
  CHECK(max_abs(reconstruct(model) - model.psi->psi.col(2) * model.phi->phi.row(5)) <= 1e-15);
}
