#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "galcert/grid_function.hpp"

namespace galcert {

// Trial functions are small closed-form value types so operators can act on
// them analytically (derivatives in particular) instead of by numerical
// differentiation.

/// amplitude * cos(omega * x + phase); omega == 0 covers constants.
struct Harmonic {
  double amplitude;
  double omega;
  double phase;
};

/// Polynomial in the mapped variable t = scale * (x - center).
struct Polynomial {
  double center;
  double scale;
  std::vector<double> coeffs;  // coeffs[k] multiplies t^k
};

/// Continuous piecewise-linear function: nodal values at knots, zero outside.
struct PiecewiseLinear {
  std::vector<double> knots;  // strictly increasing
  std::vector<double> nodal;  // same length as knots
};

/// Piecewise-constant function: levels between consecutive breaks, zero outside.
struct PiecewiseConstant {
  std::vector<double> breaks;  // strictly increasing, levels.size() + 1 entries
  std::vector<double> levels;
};

using MemberFunction = std::variant<Harmonic, Polynomial, PiecewiseLinear, PiecewiseConstant>;

double evaluate(const MemberFunction& m, double x);

/// Closed-form derivative. Piecewise kinds differentiate almost everywhere
/// (piecewise-linear -> piecewise-constant -> zero).
MemberFunction derivative(const MemberFunction& m);

GridFunction sample(const MemberFunction& m, GridPtr grid);

enum class FamilyKind { trigonometric, legendre, hat, monomial };

FamilyKind family_kind_from_name(const std::string& name);
const char* family_name(FamilyKind kind);

/// A catalog family of linearly independent functions on [lower, upper].
///
/// trigonometric: 1/sqrt(L), then sqrt(2/L)*sin(k theta), sqrt(2/L)*cos(k theta)
///   with theta = 2 pi (x - lower)/L; orthonormal, indexable without bound.
/// legendre: L2-normalized shifted Legendre polynomials; orthonormal.
/// monomial: t^k in t = 2(x - lower)/L - 1; independent but ill-conditioned
///   as the degree grows (that is the point of its independence-loss tests).
/// hat: the flat FEM layout for a requested count: knots uniform with
///   count + 1 intervals, one hat per interior knot. Members depend on the
///   requested count (the family is not nested), so extension never scans
///   past the requested layout.
class BasisFamily {
 public:
  BasisFamily(FamilyKind kind, double lower, double upper);

  FamilyKind kind() const noexcept { return kind_; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

  /// Indexed member (1-based) for nested families; throws for hat.
  MemberFunction member(std::size_t index) const;

  /// First `count` members (hat: the count-layout hats).
  std::vector<MemberFunction> members(std::size_t count) const;

  bool nested() const noexcept { return kind_ != FamilyKind::hat; }

  /// How far extension may scan for substitute candidates.
  std::size_t candidate_capacity(std::size_t t, std::size_t grid_size) const;

 private:
  FamilyKind kind_;
  double lower_;
  double upper_;
};

/// First `count` members sampled on `grid`; rejects sets whose independence
/// score falls at or below the threshold (grid too coarse to separate them).
std::vector<GridFunction> sample_family(const BasisFamily& family, std::size_t count,
                                        GridPtr grid);

}  // namespace galcert
