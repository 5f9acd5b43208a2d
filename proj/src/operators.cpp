#include "galcert/operators.hpp"

#include <cmath>

#include "galcert/errors.hpp"
#include "galcert/kernels.hpp"

namespace galcert {

OperatorSpec shift_operator(const OperatorSpec& op, double lambda) {
  // Every built-in kind is a self-map of L2(lower, upper) on the shared
  // grid, so the subtraction L u - lambda u is always well-formed.
  if (!std::isfinite(lambda))
    throw Error(errc::invalid_argument, "shift must be finite");
  OperatorSpec shifted = op;
  shifted.shift += lambda;
  return shifted;
}

double kernel_value(const KernelSpec& kernel, const OperatorSpec& op, double x, double y) {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, GaussianKernel>) {
          const double d = x - y;
          return std::exp(-d * d / (2.0 * k.sigma * k.sigma));
        } else if constexpr (std::is_same_v<T, ConstantKernel>) {
          return 1.0;
        } else {
          BasisFamily trig(FamilyKind::trigonometric, op.lower, op.upper);
          const MemberFunction phi = trig.member(k.member_index);
          return evaluate(phi, x) * evaluate(phi, y);
        }
      },
      kernel);
}

OperatorApplier::OperatorApplier(OperatorSpec op, GridPtr grid)
    : op_(std::move(op)), grid_(std::move(grid)) {
  if (!grid_) throw Error(errc::invalid_argument, "null grid");
  if (grid_->lower != op_.lower || grid_->upper != op_.upper)
    throw Error(errc::invalid_argument, "operator domain does not match grid domain");
  if (const auto* fred = std::get_if<Fredholm>(&op_.kind)) {
    const auto m = static_cast<Eigen::Index>(grid_->size());
    kernel_matrix_.resize(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        kernel_matrix_(i, j) =
            kernel_value(fred->kernel, op_, grid_->nodes[static_cast<std::size_t>(i)],
                         grid_->nodes[static_cast<std::size_t>(j)]);
  }
}

GridFunction OperatorApplier::image(const MemberFunction& m) const {
  GridFunction samples = sample(m, grid_);
  GridFunction base = std::visit(
      [&](const auto& kind) -> GridFunction {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, Identity>) {
          return samples;
        } else if constexpr (std::is_same_v<T, ScaledIdentity>) {
          return scale(samples, kind.alpha);
        } else if constexpr (std::is_same_v<T, Multiplication>) {
          std::vector<double> v(samples.values().begin(), samples.values().end());
          for (std::size_t i = 0; i < v.size(); ++i)
            v[i] *= kind.a0 + kind.a1 * grid_->nodes[i];
          return GridFunction(grid_, std::move(v));
        } else if constexpr (std::is_same_v<T, SpectralDerivative>) {
          MemberFunction d = m;
          for (std::size_t o = 0; o < kind.order; ++o) d = derivative(d);
          return sample(d, grid_);
        } else {
          // Fredholm: (L psi)(x_i) = sum_j w_j K(x_i, y_j) psi(y_j).
          // The absolute-value sum bounds the quadrature rounding noise;
          // an image that falls 10 orders below it carries no direction
          // information (e.g. the annihilated part of a finite-rank kernel)
          // and is flushed to an exact zero so dependence stays detectable.
          std::vector<double> v(grid_->size());
          std::vector<double> abs_samples(samples.values().begin(), samples.values().end());
          for (double& s : abs_samples) s = std::abs(s);
          double norm_sq = 0.0, bound_sq = 0.0;
          for (std::size_t i = 0; i < v.size(); ++i) {
            const auto row = kernel_matrix_.row(static_cast<Eigen::Index>(i));
            const std::span<const double> row_span(row.data(),
                                                   static_cast<std::size_t>(row.size()));
            v[i] = kernels::weighted_dot(grid_->weights, row_span, samples.values());
            double abs_acc = 0.0;
            for (std::size_t j = 0; j < row_span.size(); ++j)
              abs_acc += grid_->weights[j] * std::abs(row_span[j]) * abs_samples[j];
            norm_sq += grid_->weights[i] * v[i] * v[i];
            bound_sq += grid_->weights[i] * abs_acc * abs_acc;
          }
          if (norm_sq <= 1e-20 * bound_sq) std::fill(v.begin(), v.end(), 0.0);
          return GridFunction(grid_, std::move(v));
        }
      },
      op_.kind);
  if (op_.shift != 0.0) return add_scaled(base, -op_.shift, samples);
  return base;
}

GridFunction apply_operator(const OperatorSpec& op, std::span<const double> coeffs,
                            std::span<const MemberFunction> basis, GridPtr grid) {
  if (coeffs.size() != basis.size())
    throw Error(errc::invalid_argument, "coefficient count does not match basis count");
  if (!grid) throw Error(errc::invalid_argument, "null grid");
  OperatorApplier applier(op, grid);
  GridFunction out = GridFunction::zeros(grid);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (coeffs[k] == 0.0) continue;
    out = add_scaled(out, coeffs[k], applier.image(basis[k]));
  }
  return out;
}

OperatorImages compute_images(const OperatorSpec& op,
                              std::span<const MemberFunction> basis, GridPtr grid) {
  if (basis.empty()) throw Error(errc::invalid_argument, "basis must be nonempty");
  OperatorApplier applier(op, grid);
  OperatorImages images;
  images.psi.assign(basis.begin(), basis.end());
  images.psi_samples.reserve(basis.size());
  images.g.reserve(basis.size());
  for (const auto& m : basis) {
    images.psi_samples.push_back(sample(m, grid));
    images.g.push_back(applier.image(m));
  }
  images.gram_psi = gram_matrix(images.psi_samples);
  images.gram_g = gram_matrix(images.g);
  images.independence_score_psi = independence_score(images.gram_psi);
  images.independence_score_g = independence_score(images.gram_g);
  if (!(images.independence_score_g > kIndependenceThreshold))
    throw Error(errc::images_dependent,
                "operator images are numerically dependent; this operator/basis "
                "pair cannot serve as a certified instance");
  return images;
}

double operator_norm_estimate(const OperatorImages& images,
                              const Eigen::MatrixXd& gram_psi) {
  if (gram_psi.rows() != gram_psi.cols() ||
      gram_psi.rows() != static_cast<Eigen::Index>(images.size()))
    throw Error(errc::invalid_argument, "gram_psi size does not match image count");
  Eigen::LLT<Eigen::MatrixXd> llt(gram_psi);
  if (llt.info() != Eigen::Success)
    throw Error(errc::singular_gram, "trial Gram matrix is not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(images.gram_g, gram_psi,
                                                               Eigen::EigenvaluesOnly);
  const double lambda_max = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(lambda_max, 0.0));
}

}  // namespace galcert
