#include "galcert/galerkin.hpp"

#include <bit>
#include <cmath>
#include <vector>

#include "galcert/errors.hpp"

namespace galcert {

GalerkinSystem assemble(std::shared_ptr<const OperatorImages> images,
                        FunctionalSet tests, std::size_t n) {
  if (!images) throw Error(errc::invalid_argument, "null images");
  if (n == 0 || n > images->size() || n > tests.size())
    throw Error(errc::invalid_argument,
                "system size exceeds available images or test functionals");

  GalerkinSystem sys;
  sys.n = n;
  const std::span<const GridFunction> first_g(images->g.data(), n);
  FunctionalSet first_tests = FunctionalSet::from_representers(
      std::vector<LinearFunctional>(tests.members().begin(),
                                    tests.members().begin() + static_cast<long>(n)),
      /*require_independent=*/false);
  sys.A = functional_matrix(first_tests, first_g);
  sys.images = std::move(images);
  sys.tests = std::move(first_tests);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.A);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  sys.condition_estimate =
      (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();

  sys.det = Eigen::PartialPivLU<Eigen::MatrixXd>(sys.A).determinant();

  // Scale-invariant degeneracy test: |det| against the product of row norms.
  double row_norm_product = 1.0;
  for (Eigen::Index i = 0; i < sys.A.rows(); ++i)
    row_norm_product *= sys.A.row(i).norm();
  sys.correct = std::abs(sys.det) > 1e-12 * row_norm_product;
  return sys;
}

double laplace_determinant(const Eigen::MatrixXd& a) {
  const std::size_t n = static_cast<std::size_t>(a.rows());
  if (a.cols() != a.rows()) throw Error(errc::invalid_argument, "square matrix required");
  if (n == 0) return 1.0;
  if (n > 20) throw Error(errc::size_limit, "laplace_determinant capped at n = 20");

  // minor[mask] = det of rows 0..popcount(mask)-1, columns in mask; expanding
  // each stage along its last row reproduces the cofactor formula.
  std::vector<double> minor(std::size_t{1} << n, 0.0);
  minor[0] = 1.0;
  for (std::size_t mask = 1; mask < minor.size(); ++mask) {
    const int r = std::popcount(mask);
    double acc = 0.0;
    double sign = (r % 2 == 0) ? -1.0 : 1.0;  // sign of the first column term
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t bit = std::size_t{1} << j;
      if (!(mask & bit)) continue;
      acc += sign * a(r - 1, static_cast<Eigen::Index>(j)) * minor[mask ^ bit];
      sign = -sign;
    }
    minor[mask] = acc;
  }
  return minor.back();
}

namespace {

Eigen::VectorXd rhs_values(const GalerkinSystem& system, const GridFunction& f) {
  return apply_all(system.tests, f);
}

void require_correct(const GalerkinSystem& system) {
  if (!system.correct)
    throw Error(errc::singular_system,
                "Galerkin system is degenerate (correctness condition fails)");
}

}  // namespace

Eigen::VectorXd coefficients_cramer(const GalerkinSystem& system, const GridFunction& f) {
  require_correct(system);
  if (system.n > kCramerSizeLimit)
    throw Error(errc::size_limit, "Cramer path capped at N <= 12");
  const Eigen::VectorXd b = rhs_values(system, f);
  const double denom = laplace_determinant(system.A);
  if (denom == 0.0)
    throw Error(errc::singular_system, "zero determinant in the Cramer denominator");
  Eigen::VectorXd c(system.A.cols());
  for (Eigen::Index k = 0; k < system.A.cols(); ++k) {
    Eigen::MatrixXd replaced = system.A;
    replaced.col(k) = b;
    c(k) = laplace_determinant(replaced) / denom;
  }
  return c;
}

Eigen::VectorXd coefficients_solve(const GalerkinSystem& system, const GridFunction& f) {
  require_correct(system);
  const Eigen::VectorXd b = rhs_values(system, f);
  return Eigen::PartialPivLU<Eigen::MatrixXd>(system.A).solve(b);
}

ApproxSolution build_solution(const OperatorImages& images, const Eigen::VectorXd& coeffs) {
  const auto n = static_cast<std::size_t>(coeffs.size());
  if (n > images.size())
    throw Error(errc::invalid_argument, "more coefficients than trial functions");
  if (n == 0) throw Error(errc::invalid_argument, "empty coefficient vector");
  const std::span<const double> c(coeffs.data(), n);
  ApproxSolution sol{coeffs,
                     combine(c, std::span<const GridFunction>(images.psi_samples.data(), n)),
                     combine(c, std::span<const GridFunction>(images.g.data(), n))};
  return sol;
}

double residual_norm(const GridFunction& f, const ApproxSolution& sol) {
  return l2_norm(add_scaled(f, -1.0, sol.image_samples));
}

double orthogonality_defect(const GridFunction& f, const ApproxSolution& sol,
                            const FunctionalSet& tests) {
  const GridFunction r = add_scaled(sol.image_samples, -1.0, f);
  double worst = 0.0;
  for (std::size_t tau = 0; tau < tests.size(); ++tau)
    worst = std::max(worst, std::abs(apply(tests[tau], r)));
  return worst;
}

}  // namespace galcert
