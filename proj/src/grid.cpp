#include "galcert/grid.hpp"

#include <cmath>
#include <numbers>

#include "galcert/errors.hpp"

namespace galcert {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre_reference(std::size_t n) {
  if (n < 2 || n > 16)
    throw Error(errc::invalid_argument, "nodes_per_panel must lie in [2, 16]");

  std::vector<double> x(n), w(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Newton iteration on P_n starting from the Chebyshev-like guess.
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = ((2.0 * jd + 1.0) * z * p2 - jd * p3) / (jd + 1.0);
      }
      pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
  return {x, w};
}

GridPtr make_grid(double lower, double upper, std::size_t panels,
                  std::size_t nodes_per_panel) {
  if (!(lower < upper))
    throw Error(errc::invalid_argument, "grid domain requires lower < upper");
  if (panels < 1)
    throw Error(errc::invalid_argument, "grid requires at least one panel");
  const auto [rx, rw] = gauss_legendre_reference(nodes_per_panel);

  auto grid = std::make_shared<QuadratureGrid>();
  grid->lower = lower;
  grid->upper = upper;
  grid->panels = panels;
  grid->nodes_per_panel = nodes_per_panel;
  grid->nodes.reserve(panels * nodes_per_panel);
  grid->weights.reserve(panels * nodes_per_panel);

  const double width = (upper - lower) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = lower + width * static_cast<double>(p);
    const double mid = a + 0.5 * width;
    for (std::size_t j = 0; j < nodes_per_panel; ++j) {
      grid->nodes.push_back(mid + 0.5 * width * rx[j]);
      grid->weights.push_back(0.5 * width * rw[j]);
    }
  }
  return grid;
}

bool same_grid(const QuadratureGrid& a, const QuadratureGrid& b) {
  if (&a == &b) return true;
  return a.lower == b.lower && a.upper == b.upper && a.nodes == b.nodes &&
         a.weights == b.weights;
}

}  // namespace galcert
