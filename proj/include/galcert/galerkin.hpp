#pragma once

#include <Eigen/Dense>
#include <memory>

#include "galcert/functionals.hpp"
#include "galcert/operators.hpp"

namespace galcert {

/// Assembled N x N system A[tau][k] = l_tau(L psi_k). `correct` mirrors the
/// nonsingularity condition det != 0 under a scale-invariant threshold.
struct GalerkinSystem {
  Eigen::MatrixXd A;
  double det = 0.0;
  double condition_estimate = 0.0;
  bool correct = false;
  std::size_t n = 0;
  std::shared_ptr<const OperatorImages> images;
  FunctionalSet tests;
};

GalerkinSystem assemble(std::shared_ptr<const OperatorImages> images,
                        FunctionalSet tests, std::size_t n);

/// Determinant by Laplace (cofactor) expansion, evaluated bottom-up over
/// column subsets. Independent of any factorization; n <= 20 guard for the
/// 2^n table.
double laplace_determinant(const Eigen::MatrixXd& a);

inline constexpr std::size_t kCramerSizeLimit = 12;

/// Column-replacement determinant formula; capped at kCramerSizeLimit.
Eigen::VectorXd coefficients_cramer(const GalerkinSystem& system, const GridFunction& f);

/// Pivoted-factorization solve of the same system; the production path.
Eigen::VectorXd coefficients_solve(const GalerkinSystem& system, const GridFunction& f);

struct ApproxSolution {
  Eigen::VectorXd coeffs;
  GridFunction u_samples;      // sum_k c_k psi_k
  GridFunction image_samples;  // sum_k c_k g_k = L u_N
};

/// Combines the first coeffs.size() trial functions and their images.
ApproxSolution build_solution(const OperatorImages& images, const Eigen::VectorXd& coeffs);

/// || f - L u_N ||
double residual_norm(const GridFunction& f, const ApproxSolution& sol);

/// max_tau | l_tau(L u_N - f) |
double orthogonality_defect(const GridFunction& f, const ApproxSolution& sol,
                            const FunctionalSet& tests);

}  // namespace galcert
