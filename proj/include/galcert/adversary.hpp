#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "galcert/galerkin.hpp"

namespace galcert {

/// One configured linear variant of the method: trial family, operator,
/// test functionals l_1..l_N and coefficient functionals c_1..c_N (which may
/// be chosen independently of the l's), plus the shared grid.
struct MethodConfig {
  std::size_t n = 0;
  std::size_t t = 0;  // extended trial count, default 5 n
  BasisFamily trial_family;
  OperatorSpec op;
  FunctionalSet tests;              // l_1..l_N
  FunctionalSet coeff_functionals;  // c_1..c_N
  GridPtr grid;

  /// Structural checks (n >= 2, t >= 2 n, matching domains, set sizes).
  /// t = 2 n is representable so the dimension-count failure mode can be
  /// demonstrated; witnesses need the null space to be nonempty.
  void validate() const;
};

struct Tolerances {
  double norm_tol = 1e-9;
  double orth_tol = 1e-8;
  double residual_tol = 1e-8;
};

/// The constructed right-hand side with its certificate numbers.
struct AdversaryWitness {
  Eigen::VectorXd span_coeffs;  // f_N = sum_j span_coeffs[j] g_j
  GridFunction f_samples;
  double norm = 0.0;
  double orthogonality_defect = 0.0;
  double residual = 0.0;
  Eigen::VectorXd coeff_values;  // c_k(f_N)
  double epsilon_floor = 0.0;    // certified lower bound, equals residual
};

/// Independent re-check of a witness (reports failures, never throws).
struct WitnessCheck {
  double norm = 0.0;
  double orthogonality_defect = 0.0;
  double residual = 0.0;
  double max_coeff = 0.0;
  double span_reconstruction = 0.0;  // || f - sum_j v_j g_j ||
  bool norm_ok = false;
  bool orth_ok = false;
  bool residual_ok = false;
  bool kernel_ok = false;
  bool pass = false;  // the three certificate checks
};

struct WorstCaseReport {
  double sup_residual = 0.0;
  Eigen::VectorXd maximizer_coeffs;  // span coefficients of the maximizer
  double constraint_defect = 0.0;
};

struct SolutionErrorBound {
  double x_error = 0.0;        // || u_N(f_N) - u* ||_X
  double operator_norm = 0.0;  // restricted-subspace estimate of ||L||
  double lower_bound = 0.0;    // 1 / operator_norm
  bool satisfied = false;      // x_error >= lower_bound - 1e-8
};

/// psi_1..psi_T with images g_1..g_T, both independent; candidates that
/// break independence are skipped deterministically (next family indices in
/// order) until T members are accepted or the family is exhausted.
OperatorImages extend_trial_system(const MethodConfig& config);

/// Builds the unit-norm f_N in span{g_1..g_T} annihilating every c_k and
/// every l_tau: the 2N x T constraint matrix of pairings has a nonempty
/// null space whenever T exceeds its rank, u_N(f_N) vanishes, the
/// orthogonality equalities hold with both sides zero, and the residual
/// equals ||f_N|| = 1.
AdversaryWitness construct_witness(const MethodConfig& config,
                                   const OperatorImages& images);

/// Recomputes the certificate from the stored samples, independently of the
/// construction internals (fresh operator application included).
WitnessCheck verify_witness(const AdversaryWitness& witness, const MethodConfig& config,
                            const OperatorImages& images, const Tolerances& tol = {});

/// Maximizes || f - L u_N(f) || over unit-norm f in span{g_1..g_T} subject
/// to the N orthogonality constraints, via an orthonormal coordinate system
/// for the constraint null space and a singular value decomposition.
WorstCaseReport worst_case_residual(const MethodConfig& config,
                                    const OperatorImages& images);

/// X-space error of the method output against the exact in-span solution
/// u* = sum_j v_j psi_j, checked against 1 / ||L||.
SolutionErrorBound solution_error_bound(const MethodConfig& config,
                                        const OperatorImages& images,
                                        const AdversaryWitness& witness);

struct SweepEntry {
  std::size_t n = 0;
  std::size_t t = 0;
  bool has_system = false;  // det/condition fields are meaningful
  double det = 0.0;
  double condition_estimate = 0.0;
  bool correct = false;
  std::optional<AdversaryWitness> witness;
  std::optional<WorstCaseReport> worst;
  std::string error;  // errc name when the row failed
  double wall_ms = 0.0;
};

/// Runs each config (concurrently, capped by GALERKIN_ADVERSARY_THREADS);
/// per-row errors are recorded without aborting the sweep and results are
/// aggregated in input order.
std::vector<SweepEntry> sweep(const std::vector<MethodConfig>& configs);

}  // namespace galcert
