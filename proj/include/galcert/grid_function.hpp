#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "galcert/grid.hpp"

namespace galcert {

/// An element of the discretized Y = L2(lower, upper): samples on a
/// quadrature grid. Immutable; operations return new values.
class GridFunction {
 public:
  GridFunction(GridPtr grid, std::vector<double> values);

  static GridFunction zeros(GridPtr grid);
  static GridFunction from_function(GridPtr grid, const std::function<double(double)>& f);

  const QuadratureGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Discrete L2 pairing: sum_i w_i f(x_i) g(x_i). Throws on grid mismatch.
double inner_product(const GridFunction& f, const GridFunction& g);

double l2_norm(const GridFunction& f);

GridFunction scale(const GridFunction& f, double alpha);

/// f + alpha * g
GridFunction add_scaled(const GridFunction& f, double alpha, const GridFunction& g);

/// sum_j coeffs[j] * fs[j]
GridFunction combine(std::span<const double> coeffs, std::span<const GridFunction> fs);

/// G[i][j] = <fs[i], fs[j]>; symmetric positive semidefinite.
Eigen::MatrixXd gram_matrix(std::span<const GridFunction> fs);

/// Smallest eigenvalue of the diagonally normalized Gram matrix. A set is
/// accepted as linearly independent when this exceeds kIndependenceThreshold.
/// Sets containing a numerically zero member score 0.
double independence_score(const Eigen::MatrixXd& gram);

inline constexpr double kIndependenceThreshold = 1e-8;

}  // namespace galcert
