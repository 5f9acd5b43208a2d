#include "galcert/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "galcert/errors.hpp"
#include "galcert/report.hpp"

namespace galcert {

using nlohmann::json;

const char* scheme_name(FunctionalScheme scheme) {
  switch (scheme) {
    case FunctionalScheme::galerkin_coupled: return "galerkin_coupled";
    case FunctionalScheme::bubnov: return "bubnov";
    case FunctionalScheme::custom: return "custom";
  }
  return "?";
}

FunctionalScheme scheme_from_name(const std::string& name) {
  if (name == "galerkin_coupled") return FunctionalScheme::galerkin_coupled;
  if (name == "bubnov") return FunctionalScheme::bubnov;
  if (name == "custom") return FunctionalScheme::custom;
  throw Error(errc::config_error, "unknown functional_scheme: " + name);
}

std::size_t ScenarioConfig::trial_count() const {
  const double t = t_multiplier * static_cast<double>(n);
  return static_cast<std::size_t>(std::llround(t));
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key()))
      throw Error(errc::config_error, "unknown field \"" + item.key() + "\" in " + where);
  }
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key))
    throw Error(errc::config_error, "missing field \"" + key + "\" in " + where);
  if (!obj[key].is_number())
    throw Error(errc::config_error, "field \"" + key + "\" in " + where + " must be a number");
  return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback,
                 const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    throw Error(errc::config_error, "field \"" + key + "\" in " + where + " must be a number");
  return obj[key].get<double>();
}

std::size_t count_or(const json& obj, const std::string& key, std::size_t fallback,
                     const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_unsigned())
    throw Error(errc::config_error,
                "field \"" + key + "\" in " + where + " must be a nonnegative integer");
  return obj[key].get<std::size_t>();
}

std::string string_or(const json& obj, const std::string& key, const std::string& fallback,
                      const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string())
    throw Error(errc::config_error, "field \"" + key + "\" in " + where + " must be a string");
  return obj[key].get<std::string>();
}

std::vector<std::vector<double>> representer_list(const json& arr, const std::string& where) {
  if (!arr.is_array())
    throw Error(errc::config_error, where + " must be an array of arrays");
  std::vector<std::vector<double>> out;
  for (const auto& row : arr) {
    if (!row.is_array()) throw Error(errc::config_error, where + " entries must be arrays");
    std::vector<double> values;
    values.reserve(row.size());
    for (const auto& v : row) {
      if (!v.is_number()) throw Error(errc::config_error, where + " entries must be numeric");
      values.push_back(v.get<double>());
    }
    out.push_back(std::move(values));
  }
  return out;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(errc::config_error, std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw Error(errc::config_error, "config root must be an object");
  reject_unknown_keys(root,
                      {"domain", "grid", "basis", "operator", "n", "t_multiplier",
                       "functional_scheme", "tolerances", "seed", "custom"},
                      "config");

  ScenarioConfig cfg;
  if (root.contains("domain")) {
    const json& dom = root["domain"];
    if (!dom.is_object()) throw Error(errc::config_error, "domain must be an object");
    reject_unknown_keys(dom, {"lower", "upper"}, "domain");
    cfg.lower = require_number(dom, "lower", "domain");
    cfg.upper = require_number(dom, "upper", "domain");
  }
  if (root.contains("grid")) {
    const json& grid = root["grid"];
    if (!grid.is_object()) throw Error(errc::config_error, "grid must be an object");
    reject_unknown_keys(grid, {"panels", "nodes_per_panel"}, "grid");
    cfg.panels = count_or(grid, "panels", cfg.panels, "grid");
    cfg.nodes_per_panel = count_or(grid, "nodes_per_panel", cfg.nodes_per_panel, "grid");
  }
  if (root.contains("basis")) {
    const json& basis = root["basis"];
    if (!basis.is_object()) throw Error(errc::config_error, "basis must be an object");
    reject_unknown_keys(basis, {"family"}, "basis");
    cfg.family = family_kind_from_name(string_or(basis, "family", "trigonometric", "basis"));
  }
  if (root.contains("operator")) {
    const json& op = root["operator"];
    if (!op.is_object()) throw Error(errc::config_error, "operator must be an object");
    reject_unknown_keys(op, {"kind", "alpha", "order", "kernel", "weight", "shift"},
                        "operator");
    cfg.op_kind = string_or(op, "kind", "identity", "operator");
    cfg.alpha = number_or(op, "alpha", cfg.alpha, "operator");
    cfg.derivative_order = count_or(op, "order", cfg.derivative_order, "operator");
    cfg.shift = number_or(op, "shift", cfg.shift, "operator");
    if (op.contains("kernel")) {
      const json& kernel = op["kernel"];
      if (!kernel.is_object()) throw Error(errc::config_error, "kernel must be an object");
      reject_unknown_keys(kernel, {"name", "sigma", "member"}, "kernel");
      cfg.kernel_name = string_or(kernel, "name", cfg.kernel_name, "kernel");
      cfg.sigma = number_or(kernel, "sigma", cfg.sigma, "kernel");
      cfg.kernel_member = count_or(kernel, "member", cfg.kernel_member, "kernel");
    }
    if (op.contains("weight")) {
      const json& weight = op["weight"];
      if (!weight.is_object()) throw Error(errc::config_error, "weight must be an object");
      reject_unknown_keys(weight, {"a0", "a1"}, "weight");
      cfg.weight_a0 = number_or(weight, "a0", cfg.weight_a0, "weight");
      cfg.weight_a1 = number_or(weight, "a1", cfg.weight_a1, "weight");
    }
  }
  cfg.n = count_or(root, "n", cfg.n, "config");
  cfg.t_multiplier = number_or(root, "t_multiplier", cfg.t_multiplier, "config");
  if (root.contains("functional_scheme"))
    cfg.scheme = scheme_from_name(string_or(root, "functional_scheme", "bubnov", "config"));
  if (root.contains("tolerances")) {
    const json& tol = root["tolerances"];
    if (!tol.is_object()) throw Error(errc::config_error, "tolerances must be an object");
    reject_unknown_keys(tol, {"norm_tol", "orth_tol", "residual_tol"}, "tolerances");
    cfg.tolerances.norm_tol = number_or(tol, "norm_tol", cfg.tolerances.norm_tol, "tolerances");
    cfg.tolerances.orth_tol = number_or(tol, "orth_tol", cfg.tolerances.orth_tol, "tolerances");
    cfg.tolerances.residual_tol =
        number_or(tol, "residual_tol", cfg.tolerances.residual_tol, "tolerances");
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned())
      throw Error(errc::config_error, "seed must be a nonnegative integer");
    cfg.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("custom")) {
    const json& custom = root["custom"];
    if (!custom.is_object()) throw Error(errc::config_error, "custom must be an object");
    reject_unknown_keys(custom, {"test_representers", "coeff_representers"}, "custom");
    if (custom.contains("test_representers"))
      cfg.custom_test_representers =
          representer_list(custom["test_representers"], "custom.test_representers");
    if (custom.contains("coeff_representers"))
      cfg.custom_coeff_representers =
          representer_list(custom["coeff_representers"], "custom.coeff_representers");
  }

  // Structural validation beyond types.
  if (!(cfg.lower < cfg.upper)) throw Error(errc::config_error, "domain requires lower < upper");
  if (cfg.n < 2) throw Error(errc::config_error, "n must be at least 2");
  if (cfg.trial_count() < 2 * cfg.n)
    throw Error(errc::config_error, "t_multiplier * n must be at least 2n");
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::config_error, "cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string scenario_to_json(const ScenarioConfig& config) {
  JsonWriter w;
  w.begin_object();
  w.key("domain");
  w.begin_object();
  w.key("lower").number(config.lower);
  w.key("upper").number(config.upper);
  w.end_object();
  w.key("grid");
  w.begin_object();
  w.key("panels").number(static_cast<double>(config.panels));
  w.key("nodes_per_panel").number(static_cast<double>(config.nodes_per_panel));
  w.end_object();
  w.key("basis");
  w.begin_object();
  w.key("family").string(family_name(config.family));
  w.end_object();
  w.key("operator");
  w.begin_object();
  w.key("kind").string(config.op_kind);
  if (config.op_kind == "scaled_identity") w.key("alpha").number(config.alpha);
  if (config.op_kind == "spectral_derivative")
    w.key("order").number(static_cast<double>(config.derivative_order));
  if (config.op_kind == "fredholm") {
    w.key("kernel");
    w.begin_object();
    w.key("name").string(config.kernel_name);
    if (config.kernel_name == "gaussian") w.key("sigma").number(config.sigma);
    if (config.kernel_name == "rank1")
      w.key("member").number(static_cast<double>(config.kernel_member));
    w.end_object();
  }
  if (config.op_kind == "multiplication") {
    w.key("weight");
    w.begin_object();
    w.key("a0").number(config.weight_a0);
    w.key("a1").number(config.weight_a1);
    w.end_object();
  }
  if (config.shift != 0.0) w.key("shift").number(config.shift);
  w.end_object();
  w.key("n").number(static_cast<double>(config.n));
  w.key("t_multiplier").number(config.t_multiplier);
  w.key("functional_scheme").string(scheme_name(config.scheme));
  w.key("tolerances");
  w.begin_object();
  w.key("norm_tol").number(config.tolerances.norm_tol);
  w.key("orth_tol").number(config.tolerances.orth_tol);
  w.key("residual_tol").number(config.tolerances.residual_tol);
  w.end_object();
  w.key("seed").number(static_cast<double>(config.seed));
  w.end_object();
  return w.str();
}

namespace {

OperatorSpec build_operator(const ScenarioConfig& cfg) {
  OperatorSpec op{Identity{}, cfg.lower, cfg.upper, 0.0};
  if (cfg.op_kind == "identity") {
    op.kind = Identity{};
  } else if (cfg.op_kind == "scaled_identity") {
    op.kind = ScaledIdentity{cfg.alpha};
  } else if (cfg.op_kind == "fredholm") {
    if (cfg.kernel_name == "gaussian") {
      if (!(cfg.sigma > 0.0)) throw Error(errc::config_error, "gaussian kernel needs sigma > 0");
      op.kind = Fredholm{GaussianKernel{cfg.sigma}};
    } else if (cfg.kernel_name == "constant") {
      op.kind = Fredholm{ConstantKernel{}};
    } else if (cfg.kernel_name == "rank1") {
      if (cfg.kernel_member < 1)
        throw Error(errc::config_error, "rank1 kernel member index is 1-based");
      op.kind = Fredholm{Rank1Kernel{cfg.kernel_member}};
    } else {
      throw Error(errc::config_error, "unknown fredholm kernel: " + cfg.kernel_name);
    }
  } else if (cfg.op_kind == "spectral_derivative") {
    if (cfg.derivative_order < 1)
      throw Error(errc::config_error, "spectral_derivative order must be >= 1");
    op.kind = SpectralDerivative{cfg.derivative_order};
  } else if (cfg.op_kind == "multiplication") {
    op.kind = Multiplication{cfg.weight_a0, cfg.weight_a1};
  } else {
    throw Error(errc::config_error, "unknown operator kind: " + cfg.op_kind);
  }
  if (cfg.shift != 0.0) op = shift_operator(op, cfg.shift);
  return op;
}

// Explicit representer lists skip the independence requirement: degenerate
// test sets are a supported input (they are how det = 0 instances are
// expressed), and the witness construction does not need it either.
FunctionalSet explicit_representers(const std::vector<std::vector<double>>& rows,
                                    const GridPtr& grid, const std::string& prefix) {
  std::vector<LinearFunctional> members;
  members.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != grid->size())
      throw Error(errc::config_error,
                  prefix + " representer length does not match the grid size");
    members.push_back({GridFunction(grid, rows[i]), prefix + std::to_string(i + 1)});
  }
  return FunctionalSet::from_representers(std::move(members), /*require_independent=*/false);
}

/// The coupled c_k of the column-replacement formula are exact linear
/// combinations of the l's: c = A^{-1} b, so the representer of c_k is
/// sum_tau A^{-1}[k][tau] r_tau. Materializing that combination keeps the
/// coupled and decoupled cases uniform for the adversary.
FunctionalSet couple_coefficients(const GalerkinSystem& system) {
  if (!system.correct)
    throw Error(errc::singular_system,
                "cannot couple coefficient functionals to a degenerate system");
  const Eigen::MatrixXd a_inv =
      Eigen::PartialPivLU<Eigen::MatrixXd>(system.A).inverse();
  std::vector<LinearFunctional> members;
  members.reserve(system.n);
  for (std::size_t k = 0; k < system.n; ++k) {
    GridFunction rep = GridFunction::zeros(system.tests[0].representer.grid_ptr());
    for (std::size_t tau = 0; tau < system.n; ++tau)
      rep = add_scaled(rep,
                       a_inv(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(tau)),
                       system.tests[tau].representer);
    members.push_back({std::move(rep), "c" + std::to_string(k + 1)});
  }
  return FunctionalSet::from_representers(std::move(members), /*require_independent=*/false);
}

}  // namespace

BuiltScenario build_scenario(const ScenarioConfig& scenario) {
  GridPtr grid = make_grid(scenario.lower, scenario.upper, scenario.panels,
                           scenario.nodes_per_panel);
  BasisFamily family(scenario.family, scenario.lower, scenario.upper);
  OperatorSpec op = build_operator(scenario);

  MethodConfig config{scenario.n,      scenario.trial_count(), family, op,
                      FunctionalSet{}, FunctionalSet{},        grid};
  auto images = std::make_shared<const OperatorImages>(extend_trial_system(config));

  // Test functionals per scheme.
  switch (scenario.scheme) {
    case FunctionalScheme::bubnov: {
      std::vector<LinearFunctional> members;
      for (std::size_t tau = 0; tau < scenario.n; ++tau)
        members.push_back({images->g[tau], "l" + std::to_string(tau + 1)});
      config.tests =
          FunctionalSet::from_representers(std::move(members), /*require_independent=*/true);
      break;
    }
    case FunctionalScheme::galerkin_coupled: {
      config.tests = FunctionalSet::from_representers(
          random_representers(grid, scenario.n, scenario.seed * 2 + 1, "l"),
          /*require_independent=*/true);
      break;
    }
    case FunctionalScheme::custom: {
      config.tests =
          scenario.custom_test_representers.empty()
              ? FunctionalSet::from_representers(
                    random_representers(grid, scenario.n, scenario.seed * 2 + 1, "l"),
                    /*require_independent=*/true)
              : explicit_representers(scenario.custom_test_representers, grid, "l");
      break;
    }
  }

  GalerkinSystem system = assemble(images, config.tests, scenario.n);

  // Coefficient functionals per scheme.
  switch (scenario.scheme) {
    case FunctionalScheme::bubnov:
    case FunctionalScheme::galerkin_coupled:
      config.coeff_functionals = couple_coefficients(system);
      break;
    case FunctionalScheme::custom:
      config.coeff_functionals =
          scenario.custom_coeff_representers.empty()
              ? FunctionalSet::from_representers(
                    random_representers(grid, scenario.n, scenario.seed * 2 + 2, "c"),
                    /*require_independent=*/true)
              : explicit_representers(scenario.custom_coeff_representers, grid, "c");
      break;
  }

  config.validate();
  return BuiltScenario{scenario, std::move(config), std::move(images), std::move(system)};
}

BuiltScenario build_scenario_with_coeffs(const ScenarioConfig& scenario,
                                         FunctionalSet coeff_functionals) {
  BuiltScenario built = build_scenario(scenario);
  if (coeff_functionals.size() != built.config.n)
    throw Error(errc::invalid_argument, "replacement coefficient set must have N members");
  built.config.coeff_functionals = std::move(coeff_functionals);
  built.config.validate();
  return built;
}

GridFunction resolve_rhs(const BuiltScenario& built, const std::string& name) {
  if (name.size() >= 2 && (name[0] == 'g' || name[0] == 'l')) {
    std::size_t index = 0;
    bool numeric = true;
    for (std::size_t i = 1; i < name.size(); ++i) {
      if (name[i] < '0' || name[i] > '9') {
        numeric = false;
        break;
      }
      index = index * 10 + static_cast<std::size_t>(name[i] - '0');
    }
    if (numeric && index >= 1) {
      if (name[0] == 'g') {
        if (index > built.images->size())
          throw Error(errc::config_error, "rhs " + name + " exceeds the trial count");
        return built.images->g[index - 1];
      }
      if (index > built.config.tests.size())
        throw Error(errc::config_error, "rhs " + name + " exceeds the test count");
      return built.config.tests[index - 1].representer;
    }
  }
  throw Error(errc::config_error,
              "unknown rhs name: " + name + " (expected g<k>, l<tau>, or @witness-file)");
}

}  // namespace galcert
