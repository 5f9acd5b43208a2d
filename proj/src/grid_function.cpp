#include "galcert/grid_function.hpp"

#include <cmath>

#include "galcert/errors.hpp"
#include "galcert/kernels.hpp"

namespace galcert {

namespace {

void require_same_grid(const GridFunction& f, const GridFunction& g) {
  if (!same_grid(f.grid(), g.grid()))
    throw Error(errc::grid_mismatch, "grid functions live on different grids");
}

}  // namespace

GridFunction::GridFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw Error(errc::invalid_argument, "null grid");
  if (values_.size() != grid_->size())
    throw Error(errc::invalid_argument, "value count does not match grid size");
  for (double v : values_) {
    if (!std::isfinite(v))
      throw Error(errc::invalid_argument, "grid function values must be finite");
  }
}

GridFunction GridFunction::zeros(GridPtr grid) {
  if (!grid) throw Error(errc::invalid_argument, "null grid");
  std::vector<double> v(grid->size(), 0.0);
  return GridFunction(std::move(grid), std::move(v));
}

GridFunction GridFunction::from_function(GridPtr grid,
                                         const std::function<double(double)>& f) {
  if (!grid) throw Error(errc::invalid_argument, "null grid");
  std::vector<double> v;
  v.reserve(grid->size());
  for (double x : grid->nodes) v.push_back(f(x));
  return GridFunction(std::move(grid), std::move(v));
}

double inner_product(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  return kernels::weighted_dot(f.grid().weights, f.values(), g.values());
}

double l2_norm(const GridFunction& f) {
  const double sq = kernels::weighted_dot(f.grid().weights, f.values(), f.values());
  return std::sqrt(std::max(sq, 0.0));
}

GridFunction scale(const GridFunction& f, double alpha) {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) x *= alpha;
  return GridFunction(f.grid_ptr(), std::move(v));
}

GridFunction add_scaled(const GridFunction& f, double alpha, const GridFunction& g) {
  require_same_grid(f, g);
  std::vector<double> v(f.values().begin(), f.values().end());
  kernels::axpy(alpha, g.values(), v);
  return GridFunction(f.grid_ptr(), std::move(v));
}

GridFunction combine(std::span<const double> coeffs, std::span<const GridFunction> fs) {
  if (coeffs.size() != fs.size())
    throw Error(errc::invalid_argument, "coefficient count does not match function count");
  if (fs.empty()) throw Error(errc::invalid_argument, "combine requires at least one function");
  std::vector<double> v(fs[0].size(), 0.0);
  for (std::size_t j = 0; j < fs.size(); ++j) {
    require_same_grid(fs[0], fs[j]);
    kernels::axpy(coeffs[j], fs[j].values(), v);
  }
  return GridFunction(fs[0].grid_ptr(), std::move(v));
}

Eigen::MatrixXd gram_matrix(std::span<const GridFunction> fs) {
  if (fs.empty()) throw Error(errc::invalid_argument, "gram_matrix requires a nonempty list");
  const auto n = static_cast<Eigen::Index>(fs.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = inner_product(fs[static_cast<std::size_t>(i)],
                                     fs[static_cast<std::size_t>(j)]);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

double independence_score(const Eigen::MatrixXd& gram) {
  const Eigen::Index n = gram.rows();
  if (n == 0 || gram.cols() != n)
    throw Error(errc::invalid_argument, "independence_score requires a square Gram matrix");
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double gi = gram(i, i);
    if (!(gi > 0.0)) return 0.0;  // a zero member can never be independent
    d(i) = 1.0 / std::sqrt(gi);
  }
  const Eigen::MatrixXd normalized = d.asDiagonal() * gram * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normalized, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace galcert
