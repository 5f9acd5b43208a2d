#include "galcert/adversary.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "galcert/errors.hpp"

namespace galcert {

void MethodConfig::validate() const {
  if (n < 2) throw Error(errc::invalid_argument, "method requires N >= 2");
  if (t < 2 * n)
    throw Error(errc::invalid_argument, "extended trial count requires T >= 2N");
  if (!grid) throw Error(errc::invalid_argument, "null grid");
  if (trial_family.lower() != grid->lower || trial_family.upper() != grid->upper)
    throw Error(errc::invalid_argument, "trial family domain does not match grid");
  if (op.lower != grid->lower || op.upper != grid->upper)
    throw Error(errc::invalid_argument, "operator domain does not match grid");
  if (tests.size() != n || coeff_functionals.size() != n)
    throw Error(errc::invalid_argument, "functional sets must have exactly N members");
}

OperatorImages extend_trial_system(const MethodConfig& config) {
  if (config.t == 0) throw Error(errc::invalid_argument, "T must be positive");
  OperatorApplier applier(config.op, config.grid);

  const std::size_t capacity =
      config.trial_family.candidate_capacity(config.t, config.grid->size());
  std::vector<MemberFunction> candidates;
  if (config.trial_family.nested()) {
    candidates.reserve(capacity);
    for (std::size_t i = 1; i <= capacity; ++i)
      candidates.push_back(config.trial_family.member(i));
  } else {
    candidates = config.trial_family.members(config.t);
  }

  OperatorImages images;
  Eigen::MatrixXd gram_psi(0, 0), gram_g(0, 0);
  double score_psi = 0.0, score_g = 0.0;

  auto try_grow = [](Eigen::MatrixXd& gram, const std::vector<GridFunction>& set,
                     const GridFunction& cand, double& score_out) {
    const auto k = gram.rows();
    Eigen::MatrixXd grown(k + 1, k + 1);
    grown.topLeftCorner(k, k) = gram;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double v = inner_product(set[static_cast<std::size_t>(i)], cand);
      grown(i, k) = v;
      grown(k, i) = v;
    }
    grown(k, k) = inner_product(cand, cand);
    const double score = independence_score(grown);
    if (score > kIndependenceThreshold) {
      gram = std::move(grown);
      score_out = score;
      return true;
    }
    return false;
  };

  for (const auto& cand : candidates) {
    if (images.size() == config.t) break;
    GridFunction psi_s = sample(cand, config.grid);
    GridFunction g_s = applier.image(cand);

    Eigen::MatrixXd gram_psi_saved = gram_psi;
    double sp = score_psi;
    if (!try_grow(gram_psi, images.psi_samples, psi_s, sp)) continue;
    double sg = score_g;
    if (!try_grow(gram_g, images.g, g_s, sg)) {
      gram_psi = std::move(gram_psi_saved);  // roll back the psi acceptance
      continue;
    }
    score_psi = sp;
    score_g = sg;
    images.psi.push_back(cand);
    images.psi_samples.push_back(std::move(psi_s));
    images.g.push_back(std::move(g_s));
  }

  if (images.size() < config.t)
    throw Error(errc::cannot_extend,
                "cannot extend to " + std::to_string(config.t) +
                    " independent images (achieved rank " +
                    std::to_string(images.size()) + ")",
                static_cast<long>(images.size()));

  images.gram_psi = std::move(gram_psi);
  images.gram_g = std::move(gram_g);
  images.independence_score_psi = score_psi;
  images.independence_score_g = score_g;
  return images;
}

namespace {

/// Rows c_k(g_j) (k = 1..N) stacked over rows l_tau(g_j) (tau = 1..N).
Eigen::MatrixXd constraint_matrix(const MethodConfig& config,
                                  const OperatorImages& images) {
  const auto n = static_cast<Eigen::Index>(config.n);
  const auto t = static_cast<Eigen::Index>(images.size());
  Eigen::MatrixXd c(2 * n, t);
  const std::span<const GridFunction> g(images.g.data(), images.g.size());
  c.topRows(n) = functional_matrix(config.coeff_functionals, g);
  c.bottomRows(n) = functional_matrix(config.tests, g);
  return c;
}

/// Scale rows to unit norm (zero rows impose no constraint and stay put).
void normalize_rows(Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double norm = m.row(i).norm();
    if (norm > 0.0) m.row(i) /= norm;
  }
}

void canonicalize_sign(Eigen::VectorXd& v) {
  Eigen::Index arg = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > best) {
      best = std::abs(v(i));
      arg = i;
    }
  }
  if (v(arg) < 0.0) v = -v;
}

constexpr double kRankTolerance = 1e-10;

}  // namespace

AdversaryWitness construct_witness(const MethodConfig& config,
                                   const OperatorImages& images) {
  if (config.tests.empty() || config.coeff_functionals.empty())
    throw Error(errc::invalid_argument, "functional sets must be nonempty");
  if (config.tests.size() != config.coeff_functionals.size())
    throw Error(errc::invalid_argument, "test and coefficient sets must match in size");
  if (!(images.independence_score_g > kIndependenceThreshold))
    throw Error(errc::images_dependent, "witness construction needs independent images");

  Eigen::MatrixXd c = constraint_matrix(config, images);
  normalize_rows(c);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankTolerance * smax) ++rank;
  const Eigen::Index t = c.cols();
  if (rank >= t)
    throw Error(errc::no_witness,
                "constraints have full rank; no nonzero common kernel direction "
                "exists in span{g_1..g_T}");

  // Null-space basis = trailing right singular vectors; take the last one.
  Eigen::VectorXd v = svd.matrixV().col(t - 1);
  canonicalize_sign(v);

  GridFunction f = combine(std::span<const double>(v.data(), static_cast<std::size_t>(t)),
                           std::span<const GridFunction>(images.g.data(), images.g.size()));
  const double s = l2_norm(f);
  if (!(s > 0.0))
    throw Error(errc::images_dependent, "null direction combines to the zero function");
  f = scale(f, 1.0 / s);

  AdversaryWitness w{.span_coeffs = v / s,
                     .f_samples = f,
                     .norm = l2_norm(f),
                     .orthogonality_defect = 0.0,
                     .residual = 0.0,
                     .coeff_values = apply_all(config.coeff_functionals, f),
                     .epsilon_floor = 0.0};
  const ApproxSolution sol =
      build_solution(images, w.coeff_values.head(static_cast<Eigen::Index>(config.n)));
  w.orthogonality_defect = orthogonality_defect(f, sol, config.tests);
  w.residual = residual_norm(f, sol);
  w.epsilon_floor = w.residual;
  return w;
}

WitnessCheck verify_witness(const AdversaryWitness& witness, const MethodConfig& config,
                            const OperatorImages& images, const Tolerances& tol) {
  WitnessCheck check;
  const GridFunction& f = witness.f_samples;
  check.norm = l2_norm(f);

  const Eigen::VectorXd coeffs = apply_all(config.coeff_functionals, f);
  check.max_coeff = coeffs.size() > 0 ? coeffs.cwiseAbs().maxCoeff() : 0.0;

  // u_N from the configured coefficient functionals, its image through a fresh
  // operator application (not the stored g vectors).
  const auto n = static_cast<std::size_t>(coeffs.size());
  const std::span<const MemberFunction> basis(images.psi.data(), n);
  const GridFunction lu = apply_operator(
      config.op, std::span<const double>(coeffs.data(), n), basis, config.grid);

  double defect = 0.0;
  const GridFunction r = add_scaled(lu, -1.0, f);
  for (std::size_t tau = 0; tau < config.tests.size(); ++tau)
    defect = std::max(defect, std::abs(apply(config.tests[tau], r)));
  check.orthogonality_defect = defect;
  check.residual = l2_norm(r);

  if (witness.span_coeffs.size() == static_cast<Eigen::Index>(images.size())) {
    const GridFunction rebuilt =
        combine(std::span<const double>(witness.span_coeffs.data(),
                                        static_cast<std::size_t>(witness.span_coeffs.size())),
                std::span<const GridFunction>(images.g.data(), images.g.size()));
    check.span_reconstruction = l2_norm(add_scaled(f, -1.0, rebuilt));
  } else {
    check.span_reconstruction = std::numeric_limits<double>::infinity();
  }

  check.norm_ok = std::abs(check.norm - 1.0) <= tol.norm_tol;
  check.orth_ok = check.orthogonality_defect <= tol.orth_tol;
  check.residual_ok = std::abs(check.residual - 1.0) <= tol.residual_tol;
  check.kernel_ok = check.max_coeff <= 1e-9;
  check.pass = check.norm_ok && check.orth_ok && check.residual_ok;
  return check;
}

WorstCaseReport worst_case_residual(const MethodConfig& config,
                                    const OperatorImages& images) {
  if (!(images.independence_score_g > kIndependenceThreshold))
    throw Error(errc::images_dependent, "worst case needs independent images");
  const auto t = static_cast<Eigen::Index>(images.size());
  const auto n = static_cast<Eigen::Index>(config.n);

  // Orthonormal coordinates for V = span{g}: f = G S y with S'GramS = I.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(images.gram_g);
  if (es.info() != Eigen::Success)
    throw Error(errc::singular_gram, "Gram eigendecomposition failed");
  const Eigen::VectorXd evals = es.eigenvalues();
  if (!(evals(0) > 0.0))
    throw Error(errc::singular_gram, "image Gram matrix is numerically singular");
  const Eigen::MatrixXd u = es.eigenvectors();
  const Eigen::MatrixXd s_mat = u * evals.cwiseSqrt().cwiseInverse().asDiagonal();
  const Eigen::MatrixXd s_inv = evals.cwiseSqrt().asDiagonal() * u.transpose();

  const std::span<const GridFunction> g(images.g.data(), images.g.size());
  const Eigen::MatrixXd mc = functional_matrix(config.coeff_functionals, g) * s_mat;
  const Eigen::MatrixXd ml = functional_matrix(config.tests, g) * s_mat;

  // residual(y) = y - S^{-1} E Mc y in orthonormal coordinates.
  const Eigen::MatrixXd embed = s_inv.leftCols(n);  // t x n
  const Eigen::MatrixXd a_res = Eigen::MatrixXd::Identity(t, t) - embed * mc;

  // Feasibility: l_tau(L u_N(f) - f) = 0  <=>  (Ml A_res) y = 0.
  const Eigen::MatrixXd constraints = ml * a_res;
  Eigen::JacobiSVD<Eigen::MatrixXd> csvd(constraints, Eigen::ComputeFullV);
  const auto& csv = csvd.singularValues();
  const double cmax = csv.size() > 0 ? csv(0) : 0.0;
  Eigen::Index crank = 0;
  if (cmax > 0.0)
    for (Eigen::Index i = 0; i < csv.size(); ++i)
      if (csv(i) > kRankTolerance * cmax) ++crank;
  if (crank >= t)
    throw Error(errc::no_witness, "no feasible direction under the constraints");
  const Eigen::MatrixXd z = csvd.matrixV().rightCols(t - crank);

  Eigen::JacobiSVD<Eigen::MatrixXd> msvd(a_res * z, Eigen::ComputeFullV);
  WorstCaseReport report;
  report.sup_residual = msvd.singularValues()(0);
  Eigen::VectorXd y = z * msvd.matrixV().col(0);
  y.normalize();
  report.constraint_defect = (constraints * y).cwiseAbs().maxCoeff();
  Eigen::VectorXd span_coeffs = s_mat * y;
  canonicalize_sign(span_coeffs);
  report.maximizer_coeffs = span_coeffs;
  return report;
}

SolutionErrorBound solution_error_bound(const MethodConfig& config,
                                        const OperatorImages& images,
                                        const AdversaryWitness& witness) {
  if (witness.span_coeffs.size() != static_cast<Eigen::Index>(images.size()))
    throw Error(errc::invalid_argument, "witness span coefficients do not match images");
  SolutionErrorBound out;
  out.operator_norm = operator_norm_estimate(images, images.gram_psi);
  if (!(out.operator_norm > 0.0))
    throw Error(errc::singular_gram, "operator norm estimate vanished");
  out.lower_bound = 1.0 / out.operator_norm;

  // Exact in-span solution of L u = f_N: u* = sum_j v_j psi_j; the method
  // output is u_N = sum_k c_k(f_N) psi_k.
  Eigen::VectorXd delta = -witness.span_coeffs;
  for (Eigen::Index k = 0; k < witness.coeff_values.size(); ++k)
    delta(k) += witness.coeff_values(k);
  const GridFunction diff =
      combine(std::span<const double>(delta.data(), static_cast<std::size_t>(delta.size())),
              std::span<const GridFunction>(images.psi_samples.data(),
                                            images.psi_samples.size()));
  out.x_error = l2_norm(diff);
  out.satisfied = out.x_error >= out.lower_bound - 1e-8;
  return out;
}

namespace {

std::size_t sweep_thread_cap() {
  if (const char* env = std::getenv("GALERKIN_ADVERSARY_THREADS")) {
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && parsed >= 1) return static_cast<std::size_t>(parsed);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

}  // namespace

std::vector<SweepEntry> sweep(const std::vector<MethodConfig>& configs) {
  std::vector<SweepEntry> entries(configs.size());
  if (configs.empty()) return entries;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= configs.size()) break;
      const MethodConfig& config = configs[i];
      SweepEntry& entry = entries[i];
      entry.n = config.n;
      entry.t = config.t;
      const auto start = std::chrono::steady_clock::now();
      try {
        config.validate();
        auto images = std::make_shared<const OperatorImages>(extend_trial_system(config));
        const GalerkinSystem system = assemble(images, config.tests, config.n);
        entry.has_system = true;
        entry.det = system.det;
        entry.condition_estimate = system.condition_estimate;
        entry.correct = system.correct;
        entry.witness = construct_witness(config, *images);
        entry.worst = worst_case_residual(config, *images);
      } catch (const Error& err) {
        entry.error = errc_name(err.code());
      }
      entry.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    }
  };

  const std::size_t workers = std::min(sweep_thread_cap(), configs.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return entries;
}

}  // namespace galcert
