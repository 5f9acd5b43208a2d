#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "galcert/grid_function.hpp"

namespace galcert {

/// A continuous linear functional on Y, stored through its Riesz
/// representer: phi(f) = <f, representer>. Point evaluation has no L2
/// representer; collocation-like behavior is approximated by a narrow
/// normalized bump (see bump_representer).
struct LinearFunctional {
  GridFunction representer;
  std::string label;
};

class FunctionalSet {
 public:
  FunctionalSet() = default;

  /// `require_independent` enforces the independence threshold on the
  /// representers (certified method configurations assume independence).
  static FunctionalSet from_representers(std::vector<LinearFunctional> members,
                                         bool require_independent);

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  const LinearFunctional& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<LinearFunctional>& members() const noexcept { return members_; }
  bool independent_flag() const noexcept { return independent_; }

 private:
  std::vector<LinearFunctional> members_;
  bool independent_ = false;
};

double apply(const LinearFunctional& phi, const GridFunction& f);

/// Component tau equals apply(set[tau], f).
Eigen::VectorXd apply_all(const FunctionalSet& set, const GridFunction& f);

/// Entry [tau][k] = apply(set[tau], fs[k]).
Eigen::MatrixXd functional_matrix(const FunctionalSet& set,
                                  std::span<const GridFunction> fs);

/// Unit-norm cosine bump centered at `center`. half_width <= 0 selects the
/// default of two grid panels.
GridFunction bump_representer(GridPtr grid, double center, double half_width = 0.0);

/// Deterministic pseudo-random unit-norm representers (portable generator;
/// used for the `custom` and `galerkin_coupled` functional schemes).
std::vector<LinearFunctional> random_representers(GridPtr grid, std::size_t count,
                                                  std::uint64_t seed,
                                                  const std::string& label_prefix);

}  // namespace galcert
