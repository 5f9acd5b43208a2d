#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "galcert/adversary.hpp"
#include "galcert/basis.hpp"
#include "galcert/functionals.hpp"
#include "galcert/galerkin.hpp"
#include "galcert/grid.hpp"
#include "galcert/grid_function.hpp"
#include "galcert/operators.hpp"

namespace galcert::test {

/// Portable uniform draws in (-1, 1) from a seeded mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
  }

  std::vector<double> vector(std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform();
    return v;
  }

 private:
  std::mt19937_64 gen_;
};

inline GridPtr unit_grid() { return make_grid(0.0, 1.0, 64, 8); }

inline GridPtr two_pi_grid() {
  return make_grid(0.0, 2.0 * std::numbers::pi, 64, 8);
}

inline GridFunction random_function(const GridPtr& grid, Rng& rng) {
  return GridFunction(grid, rng.vector(grid->size()));
}

/// Orthonormal trigonometric samples (members 1..count) on the grid.
inline std::vector<GridFunction> trig_samples(const GridPtr& grid, std::size_t count) {
  BasisFamily family(FamilyKind::trigonometric, grid->lower, grid->upper);
  std::vector<GridFunction> out;
  for (std::size_t i = 1; i <= count; ++i) out.push_back(sample(family.member(i), grid));
  return out;
}

/// Synthetic Galerkin system with l_tau = <., e_tau> and g_k = sum_tau
/// A[tau][k] e_tau over an orthonormal trig basis, so l_tau(g_k) = A[tau][k]
/// and l_tau(sum b_i e_i) = b_tau.
struct SyntheticSystem {
  std::shared_ptr<const OperatorImages> images;
  FunctionalSet tests;
  GalerkinSystem system;
  std::vector<GridFunction> e;  // orthonormal basis used
  GridPtr grid;

  GridFunction rhs_from(const Eigen::VectorXd& b) const {
    return combine(std::span<const double>(b.data(), static_cast<std::size_t>(b.size())),
                   std::span<const GridFunction>(e.data(), static_cast<std::size_t>(b.size())));
  }
};

inline SyntheticSystem synthetic_system(const Eigen::MatrixXd& a, const GridPtr& grid) {
  const auto n = static_cast<std::size_t>(a.rows());
  SyntheticSystem out;
  out.grid = grid;
  out.e = trig_samples(grid, n);

  auto images = std::make_shared<OperatorImages>();
  BasisFamily family(FamilyKind::trigonometric, grid->lower, grid->upper);
  for (std::size_t k = 0; k < n; ++k) {
    images->psi.push_back(family.member(k + 1));
    images->psi_samples.push_back(out.e[k]);
    Eigen::VectorXd col = a.col(static_cast<Eigen::Index>(k));
    images->g.push_back(
        combine(std::span<const double>(col.data(), n),
                std::span<const GridFunction>(out.e.data(), n)));
  }
  images->gram_psi = gram_matrix(images->psi_samples);
  images->gram_g = gram_matrix(images->g);
  images->independence_score_psi = independence_score(images->gram_psi);
  images->independence_score_g = independence_score(images->gram_g);
  out.images = images;

  std::vector<LinearFunctional> tests;
  for (std::size_t tau = 0; tau < n; ++tau)
    tests.push_back({out.e[tau], "l" + std::to_string(tau + 1)});
  out.tests = FunctionalSet::from_representers(std::move(tests), false);
  out.system = assemble(out.images, out.tests, n);
  return out;
}

}  // namespace galcert::test
