#include "galcert/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "galcert/errors.hpp"

namespace galcert {

namespace {

double eval_polynomial(const Polynomial& p, double x) {
  const double t = p.scale * (x - p.center);
  double acc = 0.0;
  for (std::size_t k = p.coeffs.size(); k-- > 0;) acc = acc * t + p.coeffs[k];
  return acc;
}

double eval_piecewise_linear(const PiecewiseLinear& p, double x) {
  const auto& k = p.knots;
  if (x < k.front() || x > k.back()) return 0.0;
  const auto it = std::upper_bound(k.begin(), k.end(), x);
  if (it == k.begin()) return p.nodal.front();
  if (it == k.end()) return p.nodal.back();
  const std::size_t j = static_cast<std::size_t>(it - k.begin());
  const double x0 = k[j - 1], x1 = k[j];
  const double s = (x - x0) / (x1 - x0);
  return p.nodal[j - 1] * (1.0 - s) + p.nodal[j] * s;
}

double eval_piecewise_constant(const PiecewiseConstant& p, double x) {
  const auto& b = p.breaks;
  if (x < b.front() || x > b.back()) return 0.0;
  const auto it = std::upper_bound(b.begin(), b.end(), x);
  std::size_t j = static_cast<std::size_t>(it - b.begin());
  if (j == 0) j = 1;
  if (j > p.levels.size()) j = p.levels.size();
  return p.levels[j - 1];
}

}  // namespace

double evaluate(const MemberFunction& m, double x) {
  return std::visit(
      [x](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Harmonic>) {
          return v.amplitude * std::cos(v.omega * x + v.phase);
        } else if constexpr (std::is_same_v<T, Polynomial>) {
          return eval_polynomial(v, x);
        } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
          return eval_piecewise_linear(v, x);
        } else {
          return eval_piecewise_constant(v, x);
        }
      },
      m);
}

MemberFunction derivative(const MemberFunction& m) {
  return std::visit(
      [](const auto& v) -> MemberFunction {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Harmonic>) {
          // d/dx A cos(wx + p) = A w cos(wx + p + pi/2)
          return Harmonic{v.amplitude * v.omega, v.omega,
                          v.phase + std::numbers::pi / 2.0};
        } else if constexpr (std::is_same_v<T, Polynomial>) {
          Polynomial d{v.center, v.scale, {}};
          if (v.coeffs.size() <= 1) {
            d.coeffs = {0.0};
            return d;
          }
          d.coeffs.resize(v.coeffs.size() - 1);
          for (std::size_t k = 1; k < v.coeffs.size(); ++k)
            d.coeffs[k - 1] = v.coeffs[k] * static_cast<double>(k) * v.scale;
          return d;
        } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
          PiecewiseConstant d;
          d.breaks = v.knots;
          d.levels.resize(v.knots.size() - 1);
          for (std::size_t j = 0; j + 1 < v.knots.size(); ++j)
            d.levels[j] = (v.nodal[j + 1] - v.nodal[j]) / (v.knots[j + 1] - v.knots[j]);
          return d;
        } else {
          return Polynomial{0.0, 1.0, {0.0}};  // a.e. derivative of a step function
        }
      },
      m);
}

GridFunction sample(const MemberFunction& m, GridPtr grid) {
  return GridFunction::from_function(std::move(grid),
                                     [&m](double x) { return evaluate(m, x); });
}

FamilyKind family_kind_from_name(const std::string& name) {
  if (name == "trigonometric" || name == "trig") return FamilyKind::trigonometric;
  if (name == "legendre") return FamilyKind::legendre;
  if (name == "hat") return FamilyKind::hat;
  if (name == "monomial") return FamilyKind::monomial;
  throw Error(errc::config_error, "unknown basis family: " + name);
}

const char* family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::trigonometric: return "trigonometric";
    case FamilyKind::legendre: return "legendre";
    case FamilyKind::hat: return "hat";
    case FamilyKind::monomial: return "monomial";
  }
  return "?";
}

BasisFamily::BasisFamily(FamilyKind kind, double lower, double upper)
    : kind_(kind), lower_(lower), upper_(upper) {
  if (!(lower < upper))
    throw Error(errc::invalid_argument, "family domain requires lower < upper");
}

namespace {

// Legendre coefficients in t via the three-term recurrence. Coefficient
// growth limits usable degrees to a few dozen, which covers every catalog use.
std::vector<double> legendre_coeffs(std::size_t degree) {
  std::vector<double> pm1{1.0};
  if (degree == 0) return pm1;
  std::vector<double> p{0.0, 1.0};
  for (std::size_t n = 1; n < degree; ++n) {
    std::vector<double> next(n + 2, 0.0);
    const double a = (2.0 * static_cast<double>(n) + 1.0) / (static_cast<double>(n) + 1.0);
    const double b = static_cast<double>(n) / (static_cast<double>(n) + 1.0);
    for (std::size_t k = 0; k < p.size(); ++k) next[k + 1] += a * p[k];
    for (std::size_t k = 0; k < pm1.size(); ++k) next[k] -= b * pm1[k];
    pm1 = std::move(p);
    p = std::move(next);
  }
  return p;
}

}  // namespace

MemberFunction BasisFamily::member(std::size_t index) const {
  if (index < 1) throw Error(errc::invalid_argument, "member index is 1-based");
  const double length = upper_ - lower_;
  switch (kind_) {
    case FamilyKind::trigonometric: {
      const double base = 2.0 * std::numbers::pi / length;
      if (index == 1) return Harmonic{1.0 / std::sqrt(length), 0.0, 0.0};
      const double k = static_cast<double>(index / 2);
      const double amp = std::sqrt(2.0 / length);
      const double omega = k * base;
      const double phase = -omega * lower_;
      if (index % 2 == 0) {
        // sin(k theta) = cos(k theta - pi/2)
        return Harmonic{amp, omega, phase - std::numbers::pi / 2.0};
      }
      return Harmonic{amp, omega, phase};
    }
    case FamilyKind::legendre: {
      // P_degree in t = 2(x - lower)/L - 1, scaled to unit L2 norm.
      const std::size_t degree = index - 1;
      Polynomial p{0.5 * (lower_ + upper_), 2.0 / length, legendre_coeffs(degree)};
      const double norm = std::sqrt((2.0 * static_cast<double>(degree) + 1.0) / length);
      for (double& c : p.coeffs) c *= norm;
      return p;
    }
    case FamilyKind::monomial: {
      std::vector<double> coeffs(index, 0.0);
      coeffs[index - 1] = 1.0;
      return Polynomial{0.5 * (lower_ + upper_), 2.0 / length, std::move(coeffs)};
    }
    case FamilyKind::hat:
      throw Error(errc::invalid_argument,
                  "hat family members are defined per layout; use members(count)");
  }
  throw Error(errc::invalid_argument, "unreachable family kind");
}

std::vector<MemberFunction> BasisFamily::members(std::size_t count) const {
  if (count < 1) throw Error(errc::invalid_argument, "count must be positive");
  std::vector<MemberFunction> out;
  out.reserve(count);
  if (kind_ != FamilyKind::hat) {
    for (std::size_t i = 1; i <= count; ++i) out.push_back(member(i));
    return out;
  }
  const double h = (upper_ - lower_) / static_cast<double>(count + 1);
  for (std::size_t i = 1; i <= count; ++i) {
    const double center = lower_ + h * static_cast<double>(i);
    PiecewiseLinear hat;
    hat.knots = {std::max(lower_, center - h), center, std::min(upper_, center + h)};
    hat.nodal = {0.0, 1.0, 0.0};
    out.push_back(std::move(hat));
  }
  return out;
}

std::size_t BasisFamily::candidate_capacity(std::size_t t, std::size_t grid_size) const {
  if (kind_ == FamilyKind::hat) return t;  // fixed layout, nothing to scan past
  const std::size_t scan = std::max<std::size_t>(4 * t, 64);
  // More members than grid nodes can never be independent on that grid.
  return std::min(scan, grid_size);
}

std::vector<GridFunction> sample_family(const BasisFamily& family, std::size_t count,
                                        GridPtr grid) {
  if (!grid) throw Error(errc::invalid_argument, "null grid");
  if (grid->lower != family.lower() || grid->upper != family.upper())
    throw Error(errc::invalid_argument, "family domain does not match grid domain");
  const auto members = family.members(count);
  std::vector<GridFunction> out;
  out.reserve(count);
  for (const auto& m : members) out.push_back(sample(m, grid));
  const double score = independence_score(gram_matrix(out));
  if (!(score > kIndependenceThreshold))
    throw Error(errc::independence_loss,
                "family members are not numerically independent on this grid "
                "(refine the grid or reduce the count)");
  return out;
}

}  // namespace galcert
