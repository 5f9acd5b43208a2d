#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "galcert/basis.hpp"
#include "galcert/grid_function.hpp"

namespace galcert {

// Built-in Fredholm kernel catalog (no user code injection).
struct GaussianKernel {
  double sigma;
};
struct ConstantKernel {};
/// K(x, y) = phi(x) phi(y) with phi the (unit-norm) trigonometric member of
/// the given index on the operator domain.
struct Rank1Kernel {
  std::size_t member_index;
};
using KernelSpec = std::variant<GaussianKernel, ConstantKernel, Rank1Kernel>;

struct Identity {};
struct ScaledIdentity {
  double alpha;
};
struct Fredholm {
  KernelSpec kernel;
};
struct SpectralDerivative {
  std::size_t order;
};
/// (Lu)(x) = (a0 + a1 x) u(x)
struct Multiplication {
  double a0;
  double a1;
};
using OperatorKind = std::variant<Identity, ScaledIdentity, Fredholm,
                                  SpectralDerivative, Multiplication>;

/// A linear operator defined by its action on basis members (extended
/// linearly). `shift` realizes A_lambda u = L u - lambda u; every built-in
/// kind maps the domain into itself, so the shift is always well-formed.
struct OperatorSpec {
  OperatorKind kind;
  double lower;
  double upper;
  double shift = 0.0;
};

OperatorSpec shift_operator(const OperatorSpec& op, double lambda);

double kernel_value(const KernelSpec& kernel, const OperatorSpec& op, double x, double y);

/// Per-(operator, grid) applier; precomputes the kernel matrix for Fredholm
/// operators so repeated images share the quadrature setup.
class OperatorApplier {
 public:
  OperatorApplier(OperatorSpec op, GridPtr grid);

  const OperatorSpec& op() const noexcept { return op_; }
  const GridPtr& grid() const noexcept { return grid_; }

  GridFunction image(const MemberFunction& m) const;

 private:
  using RowMajorMatrix =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  OperatorSpec op_;
  GridPtr grid_;
  RowMajorMatrix kernel_matrix_;  // empty unless Fredholm; rows contiguous
};

/// sum_k coeffs[k] * (L basis[k]) sampled on `grid`.
GridFunction apply_operator(const OperatorSpec& op, std::span<const double> coeffs,
                            std::span<const MemberFunction> basis, GridPtr grid);

struct OperatorImages {
  std::vector<MemberFunction> psi;
  std::vector<GridFunction> psi_samples;
  std::vector<GridFunction> g;  // g[k] = L psi[k]
  Eigen::MatrixXd gram_psi;
  Eigen::MatrixXd gram_g;
  double independence_score_psi = 0.0;
  double independence_score_g = 0.0;

  std::size_t size() const noexcept { return g.size(); }
};

/// Images of all basis members with Gram data; throws images_dependent when
/// the image set fails the independence threshold.
OperatorImages compute_images(const OperatorSpec& op,
                              std::span<const MemberFunction> basis, GridPtr grid);

/// Largest generalized singular value of coefficients -> image over
/// span{psi}: sqrt(lambda_max) of gram_g x = lambda gram_psi x. A lower
/// bound for ||L||, exact when the span is invariant.
double operator_norm_estimate(const OperatorImages& images,
                              const Eigen::MatrixXd& gram_psi);

}  // namespace galcert
