#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "galcert/adversary.hpp"

namespace galcert {

enum class FunctionalScheme { galerkin_coupled, bubnov, custom };

const char* scheme_name(FunctionalScheme scheme);
FunctionalScheme scheme_from_name(const std::string& name);

/// One scenario file: the (psi, l, c, N, T) quintuple plus grid, tolerances
/// and seed, bound to a strict JSON schema (unknown fields are rejected).
struct ScenarioConfig {
  double lower = 0.0;
  double upper = 6.283185307179586;
  std::size_t panels = 64;
  std::size_t nodes_per_panel = 8;
  FamilyKind family = FamilyKind::trigonometric;

  // operator
  std::string op_kind = "identity";
  double alpha = 1.0;               // scaled_identity
  std::size_t derivative_order = 1; // spectral_derivative
  std::string kernel_name = "gaussian";
  double sigma = 0.5;               // gaussian kernel
  std::size_t kernel_member = 1;    // rank1 kernel
  double weight_a0 = 0.0;           // multiplication weight a0 + a1 x
  double weight_a1 = 1.0;
  double shift = 0.0;

  std::size_t n = 4;
  double t_multiplier = 5.0;
  FunctionalScheme scheme = FunctionalScheme::bubnov;
  Tolerances tolerances;
  std::uint64_t seed = 12345;

  // Optional explicit representers for the custom scheme (node values,
  // one inner vector per functional); falls back to seeded random ones.
  std::vector<std::vector<double>> custom_test_representers;
  std::vector<std::vector<double>> custom_coeff_representers;

  std::size_t trial_count() const;  // T = round(t_multiplier * n)
};

ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::string& path);

/// Canonical JSON serialization (stable field order, 17 significant digits);
/// reports echo this form.
std::string scenario_to_json(const ScenarioConfig& config);

/// A fully built scenario: grid, extended trial system, functionals per the
/// scheme, and the assembled Galerkin system of the first N images.
struct BuiltScenario {
  ScenarioConfig scenario;
  MethodConfig config;
  std::shared_ptr<const OperatorImages> images;
  GalerkinSystem system;
};

BuiltScenario build_scenario(const ScenarioConfig& scenario);

/// Same pipeline with the coefficient-functional set replaced (used for the
/// decoupling demonstrations of the sweep and acceptance suites).
BuiltScenario build_scenario_with_coeffs(const ScenarioConfig& scenario,
                                         FunctionalSet coeff_functionals);

/// Right-hand-side catalog for the solve subcommand: "g<k>" (k-th operator
/// image), "l<tau>" (representer of test functional tau).
GridFunction resolve_rhs(const BuiltScenario& built, const std::string& name);

}  // namespace galcert
