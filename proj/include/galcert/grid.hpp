#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

namespace galcert {

/// Composite Gauss-Legendre grid on [lower, upper]. Nodes are strictly
/// increasing and interior to the domain; weights are positive and sum to
/// the domain length. Immutable after construction.
struct QuadratureGrid {
  double lower;
  double upper;
  std::size_t panels;
  std::size_t nodes_per_panel;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

using GridPtr = std::shared_ptr<const QuadratureGrid>;

/// Composite Gauss-Legendre quadrature: `panels` equal panels with
/// `nodes_per_panel` points each; exact for polynomials of degree
/// <= 2*nodes_per_panel - 1 on every panel.
GridPtr make_grid(double lower, double upper, std::size_t panels,
                  std::size_t nodes_per_panel);

/// Reference Gauss-Legendre rule on [-1, 1], n in [2, 16].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre_reference(std::size_t n);

/// Structural comparison (shared pointer short-circuits).
bool same_grid(const QuadratureGrid& a, const QuadratureGrid& b);

}  // namespace galcert
