#include <doctest.h>

#include <cmath>
#include <numbers>

#include "galcert/errors.hpp"
#include "galcert/galerkin.hpp"
#include "test_helpers.hpp"

using namespace galcert;
using std::numbers::pi;

namespace {

// Independent dense-solve oracle: textbook Gaussian elimination with
// partial pivoting, no library calls.
Eigen::VectorXd eliminate(Eigen::MatrixXd a, Eigen::VectorXd b) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index piv = col;
    for (Eigen::Index r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    a.row(col).swap(a.row(piv));
    std::swap(b(col), b(piv));
    for (Eigen::Index r = col + 1; r < n; ++r) {
      const double m = a(r, col) / a(col, col);
      a.row(r) -= m * a.row(col);
      b(r) -= m * b(col);
    }
  }
  Eigen::VectorXd x(n);
  for (Eigen::Index r = n - 1; r >= 0; --r) {
    double acc = b(r);
    for (Eigen::Index c = r + 1; c < n; ++c) acc -= a(r, c) * x(c);
    x(r) = acc / a(r, r);
  }
  return x;
}

}  // namespace

TEST_CASE("laplace_determinant basics and cross-route agreement") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  CHECK(laplace_determinant(m) == -2.0);

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d.diagonal() << 2.0, 3.0, 5.0;
  CHECK(laplace_determinant(d) == 30.0);

  test::Rng rng(71);
  Eigen::MatrixXd r(6, 6);
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = 0; j < 6; ++j) r(i, j) = rng.uniform();
  const double lap = laplace_determinant(r);
  const double lu = Eigen::PartialPivLU<Eigen::MatrixXd>(r).determinant();
  CHECK(std::abs(lap - lu) <= 1e-10 * (1.0 + std::abs(lu)));
}

TEST_CASE("assemble: identity system, duplicate-functional degeneracy, oracle entries") {
  auto grid = test::two_pi_grid();
  const test::SyntheticSystem identity =
      test::synthetic_system(Eigen::MatrixXd::Identity(3, 3), grid);
  CHECK((identity.system.A - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(identity.system.det - 1.0) <= 1e-12);
  CHECK(identity.system.correct);
  CHECK(identity.system.condition_estimate < 1.0 + 1e-10);

  // Duplicate test functionals: two identical rows.
  const auto trig = test::trig_samples(grid, 2);
  auto images = std::make_shared<OperatorImages>();
  BasisFamily family(FamilyKind::trigonometric, 0.0, 2.0 * pi);
  for (std::size_t k = 0; k < 2; ++k) {
    images->psi.push_back(family.member(k + 1));
    images->psi_samples.push_back(trig[k]);
    images->g.push_back(trig[k]);
  }
  images->gram_psi = gram_matrix(images->psi_samples);
  images->gram_g = gram_matrix(images->g);
  images->independence_score_psi = independence_score(images->gram_psi);
  images->independence_score_g = independence_score(images->gram_g);
  const FunctionalSet dup = FunctionalSet::from_representers(
      {{trig[0], "l1"}, {trig[0], "l1-again"}}, false);
  const GalerkinSystem broken = assemble(images, dup, 2);
  CHECK(std::abs(broken.det) <= 1e-12);
  CHECK(!broken.correct);

  // Mixed N=2 entries against direct quadrature.
  test::Rng rng(5);
  Eigen::MatrixXd a(2, 2);
  a << 1.3, -0.4, 0.2, 2.0;
  const test::SyntheticSystem mixed = test::synthetic_system(a, grid);
  for (int tau = 0; tau < 2; ++tau)
    for (int k = 0; k < 2; ++k) {
      double direct = 0.0;
      for (std::size_t i = 0; i < grid->size(); ++i)
        direct += grid->weights[i] * mixed.images->g[static_cast<std::size_t>(k)][i] *
                  mixed.tests[static_cast<std::size_t>(tau)].representer[i];
      CHECK(std::abs(mixed.system.A(tau, k) - direct) <= 1e-13 * (1.0 + std::abs(direct)));
    }
}

TEST_CASE("coefficients_cramer: diagonal, reproduction, frozen 2x2") {
  auto grid = test::two_pi_grid();

  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag.diagonal() << 2.0, 3.0;
  const test::SyntheticSystem sys = test::synthetic_system(diag, grid);
  Eigen::VectorXd b(2);
  b << 4.0, 9.0;
  const Eigen::VectorXd c = coefficients_cramer(sys.system, sys.rhs_from(b));
  CHECK(std::abs(c(0) - 2.0) <= 1e-12);
  CHECK(std::abs(c(1) - 3.0) <= 1e-12);

  const test::SyntheticSystem id = test::synthetic_system(Eigen::MatrixXd::Identity(3, 3), grid);
  const Eigen::VectorXd e1 = coefficients_cramer(id.system, id.images->g[0]);
  CHECK(std::abs(e1(0) - 1.0) <= 1e-12);
  CHECK(std::abs(e1(1)) <= 1e-12);
  CHECK(std::abs(e1(2)) <= 1e-12);

  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 3, 4;
  const test::SyntheticSystem frozen = test::synthetic_system(a, grid);
  Eigen::VectorXd rhs(2);
  rhs << 5.0, 6.0;
  const Eigen::VectorXd sol = coefficients_cramer(frozen.system, frozen.rhs_from(rhs));
  CHECK(std::abs(sol(0) - (-4.0)) <= 1e-10);
  CHECK(std::abs(sol(1) - 4.5) <= 1e-10);
  const Eigen::VectorXd oracle = eliminate(a, rhs);
  CHECK(std::abs(sol(0) - oracle(0)) <= 1e-10);
  CHECK(std::abs(sol(1) - oracle(1)) <= 1e-10);
}

TEST_CASE("coefficients_cramer guards: singular system and size cap") {
  auto grid = test::two_pi_grid();
  Eigen::MatrixXd singular(2, 2);
  singular << 1, 1, 1, 1;
  const test::SyntheticSystem sys = test::synthetic_system(singular, grid);
  CHECK(!sys.system.correct);
  CHECK_THROWS_AS((void)coefficients_cramer(sys.system, sys.images->g[0]), Error);

  const test::SyntheticSystem big =
      test::synthetic_system(Eigen::MatrixXd::Identity(13, 13), grid);
  try {
    (void)coefficients_cramer(big.system, big.images->g[0]);
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == errc::size_limit);
  }
}

TEST_CASE("coefficients_solve: identity, scaling linearity, Cramer agreement") {
  auto grid = test::two_pi_grid();
  const test::SyntheticSystem id = test::synthetic_system(Eigen::MatrixXd::Identity(3, 3), grid);
  Eigen::VectorXd b(3);
  b << 1.0, -2.0, 0.5;
  const GridFunction f = id.rhs_from(b);
  const Eigen::VectorXd c = coefficients_solve(id.system, f);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(c(i) - b(i)) <= 1e-12);

  const Eigen::VectorXd c2 = coefficients_solve(id.system, scale(f, 2.0));
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(c2(i) - 2.0 * c(i)) <= 1e-12 * (1.0 + std::abs(c2(i))));

  // Random well-conditioned 8x8 instances: factorization vs Cramer.
  test::Rng rng(121);
  int tested = 0;
  while (tested < 5) {
    Eigen::MatrixXd a(8, 8);
    for (Eigen::Index i = 0; i < 8; ++i)
      for (Eigen::Index j = 0; j < 8; ++j) a(i, j) = rng.uniform();
    a += 3.0 * Eigen::MatrixXd::Identity(8, 8);
    const test::SyntheticSystem sys = test::synthetic_system(a, grid);
    if (sys.system.condition_estimate > 1e6) continue;
    ++tested;
    Eigen::VectorXd rhs(8);
    for (int i = 0; i < 8; ++i) rhs(i) = rng.uniform();
    const GridFunction f8 = sys.rhs_from(rhs);
    const Eigen::VectorXd via_cramer = coefficients_cramer(sys.system, f8);
    const Eigen::VectorXd via_solve = coefficients_solve(sys.system, f8);
    CHECK((via_cramer - via_solve).norm() <= 1e-9 * (1.0 + via_solve.norm()));
  }
}

TEST_CASE("build_solution: zero, unit vector, pointwise sums") {
  auto grid = test::two_pi_grid();
  const test::SyntheticSystem id = test::synthetic_system(Eigen::MatrixXd::Identity(3, 3), grid);

  const ApproxSolution zero = build_solution(*id.images, Eigen::VectorXd::Zero(3));
  CHECK(l2_norm(zero.u_samples) == 0.0);
  CHECK(l2_norm(zero.image_samples) == 0.0);

  Eigen::VectorXd e2 = Eigen::VectorXd::Zero(3);
  e2(1) = 1.0;
  const ApproxSolution second = build_solution(*id.images, e2);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    CHECK(second.u_samples[i] == id.images->psi_samples[1][i]);
    CHECK(second.image_samples[i] == id.images->g[1][i]);
  }

  Eigen::VectorXd ones = Eigen::VectorXd::Ones(2);
  const ApproxSolution sum = build_solution(*id.images, ones);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double expected = id.images->psi_samples[0][i] + id.images->psi_samples[1][i];
    CHECK(sum.u_samples[i] == doctest::Approx(expected).epsilon(1e-14));
  }

  CHECK_THROWS_AS((void)build_solution(*id.images, Eigen::VectorXd::Zero(7)), Error);
}

TEST_CASE("residual_norm and orthogonality_defect examples") {
  auto grid = test::two_pi_grid();
  const test::SyntheticSystem id = test::synthetic_system(Eigen::MatrixXd::Identity(3, 3), grid);
  Eigen::VectorXd b(3);
  b << 0.3, -1.1, 0.7;
  const GridFunction f = id.rhs_from(b);

  const Eigen::VectorXd c = coefficients_solve(id.system, f);
  const ApproxSolution sol = build_solution(*id.images, c);
  CHECK(residual_norm(sol.image_samples, sol) == 0.0);
  CHECK(orthogonality_defect(f, sol, id.tests) <= 1e-9);

  const ApproxSolution zero = build_solution(*id.images, Eigen::VectorXd::Zero(3));
  CHECK(std::abs(residual_norm(f, zero) - l2_norm(f)) <= 1e-14);

  // sol = 0 and f orthogonal to every test representer.
  const auto trig = test::trig_samples(grid, 4);
  const GridFunction outside = trig[3];
  CHECK(orthogonality_defect(outside, zero, id.tests) <= 1e-12);

  // sol = 0, f = unit-norm representer of l1: defect is exactly 1.
  CHECK(std::abs(orthogonality_defect(id.e[0], zero, id.tests) - 1.0) <= 1e-10);
}

TEST_CASE("reproduction: in-span right-hand sides are solved to machine accuracy") {
  test::Rng rng(211);
  auto grid = test::two_pi_grid();
  Eigen::MatrixXd a(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) a(i, j) = rng.uniform();
  a += 2.5 * Eigen::MatrixXd::Identity(4, 4);
  const test::SyntheticSystem sys = test::synthetic_system(a, grid);
  REQUIRE(sys.system.correct);

  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd p(4);
    for (int i = 0; i < 4; ++i) p(i) = rng.uniform() + (rng.uniform() > 0 ? 0.5 : -0.5);
    const GridFunction f = combine(std::span<const double>(p.data(), 4),
                                   std::span<const GridFunction>(sys.images->g.data(), 4));
    const Eigen::VectorXd c = coefficients_solve(sys.system, f);
    CHECK((c - p).norm() <= 1e-9 * p.norm());
    const ApproxSolution sol = build_solution(*sys.images, c);
    CHECK(residual_norm(f, sol) <= 1e-9);
    CHECK(orthogonality_defect(f, sol, sys.tests) <= 1e-8 * (1.0 + l2_norm(f)));
  }
}

TEST_CASE("pipeline linearity in the right-hand side") {
  test::Rng rng(307);
  auto grid = test::two_pi_grid();
  Eigen::MatrixXd a(3, 3);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) a(i, j) = rng.uniform();
  a += 2.0 * Eigen::MatrixXd::Identity(3, 3);
  const test::SyntheticSystem sys = test::synthetic_system(a, grid);

  const GridFunction f = test::random_function(grid, rng);
  const GridFunction g = test::random_function(grid, rng);
  const double alpha = -1.4;
  const Eigen::VectorXd mixed = coefficients_solve(sys.system, add_scaled(g, alpha, f));
  const Eigen::VectorXd split = alpha * coefficients_solve(sys.system, f) +
                                coefficients_solve(sys.system, g);
  CHECK((mixed - split).norm() <= 1e-10 * (1.0 + split.norm()));
}
