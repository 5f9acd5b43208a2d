#include "galcert/functionals.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "galcert/errors.hpp"

namespace galcert {

FunctionalSet FunctionalSet::from_representers(std::vector<LinearFunctional> members,
                                               bool require_independent) {
  FunctionalSet set;
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (!same_grid(members[0].representer.grid(), members[i].representer.grid()))
      throw Error(errc::grid_mismatch, "functional representers live on different grids");
  }
  if (require_independent && !members.empty()) {
    std::vector<GridFunction> reps;
    reps.reserve(members.size());
    for (const auto& m : members) reps.push_back(m.representer);
    const double score = independence_score(gram_matrix(reps));
    if (!(score > kIndependenceThreshold))
      throw Error(errc::independence_loss, "functional representers are dependent");
    set.independent_ = true;
  }
  set.members_ = std::move(members);
  return set;
}

double apply(const LinearFunctional& phi, const GridFunction& f) {
  return inner_product(f, phi.representer);
}

Eigen::VectorXd apply_all(const FunctionalSet& set, const GridFunction& f) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(set.size()));
  for (std::size_t tau = 0; tau < set.size(); ++tau)
    out(static_cast<Eigen::Index>(tau)) = apply(set[tau], f);
  return out;
}

Eigen::MatrixXd functional_matrix(const FunctionalSet& set,
                                  std::span<const GridFunction> fs) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(set.size()),
                      static_cast<Eigen::Index>(fs.size()));
  for (std::size_t tau = 0; tau < set.size(); ++tau)
    for (std::size_t k = 0; k < fs.size(); ++k)
      out(static_cast<Eigen::Index>(tau), static_cast<Eigen::Index>(k)) =
          apply(set[tau], fs[k]);
  return out;
}

GridFunction bump_representer(GridPtr grid, double center, double half_width) {
  if (!grid) throw Error(errc::invalid_argument, "null grid");
  if (center < grid->lower || center > grid->upper)
    throw Error(errc::invalid_argument, "bump center outside the domain");
  if (half_width <= 0.0) {
    const double panel = (grid->upper - grid->lower) / static_cast<double>(grid->panels);
    half_width = 2.0 * panel;
  }
  auto bump = GridFunction::from_function(grid, [&](double x) {
    const double d = std::abs(x - center);
    if (d >= half_width) return 0.0;
    const double c = std::cos(0.5 * std::numbers::pi * d / half_width);
    return c * c;
  });
  const double norm = l2_norm(bump);
  if (!(norm > 0.0))
    throw Error(errc::invalid_argument, "bump support contains no grid node");
  return scale(bump, 1.0 / norm);
}

std::vector<LinearFunctional> random_representers(GridPtr grid, std::size_t count,
                                                  std::uint64_t seed,
                                                  const std::string& label_prefix) {
  if (!grid) throw Error(errc::invalid_argument, "null grid");
  std::mt19937_64 gen(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<LinearFunctional> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> v(grid->size());
    for (double& x : v) {
      // Portable uniform in (-1, 1): top 53 bits of the raw draw.
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      x = 2.0 * u - 1.0;
    }
    GridFunction rep(grid, std::move(v));
    const double norm = l2_norm(rep);
    out.push_back({scale(rep, 1.0 / norm), label_prefix + std::to_string(i + 1)});
  }
  return out;
}

}  // namespace galcert
