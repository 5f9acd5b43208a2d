// galcert: linear Galerkin solver plus worst-case certification CLI.
//
// Subcommands:
//   solve     --config <path> --rhs <name|@file> --out <path>
//   adversary --config <path> --out <path>
//   sweep     --config <path> --n 2,4,8,16 --out <path.csv>
//
// Exit codes: 0 success, 2 singular system, 3 independence failure,
// 4 no witness, 5 sweep partial failure, 64 config parse error.

#include <chrono>
#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "galcert/errors.hpp"
#include "galcert/report.hpp"
#include "galcert/scenario.hpp"

namespace {

using namespace galcert;

int exit_code_for(errc code) {
  switch (code) {
    case errc::singular_system:
      return 2;
    case errc::independence_loss:
    case errc::images_dependent:
    case errc::cannot_extend:
      return 3;
    case errc::no_witness:
      return 4;
    case errc::config_error:
    case errc::io_error:
    case errc::invalid_argument:
    case errc::grid_mismatch:
      return 64;
    default:
      return 70;
  }
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

WitnessFileData make_witness_file(const BuiltScenario& built, const AdversaryWitness& witness,
                                  const WitnessCheck& check) {
  WitnessFileData data;
  data.lower = built.scenario.lower;
  data.upper = built.scenario.upper;
  data.panels = built.scenario.panels;
  data.nodes_per_panel = built.scenario.nodes_per_panel;
  data.n = built.config.n;
  data.t = built.config.t;
  data.span_coeffs.assign(witness.span_coeffs.data(),
                          witness.span_coeffs.data() + witness.span_coeffs.size());
  data.samples.assign(witness.f_samples.values().begin(), witness.f_samples.values().end());
  data.norm = witness.norm;
  data.orthogonality_defect = witness.orthogonality_defect;
  data.residual = witness.residual;
  data.epsilon_floor = witness.epsilon_floor;
  data.max_coeff = check.max_coeff;
  return data;
}

int run_solve(const std::string& config_path, const std::string& rhs_name,
              const std::string& out_path, bool timing) {
  const auto start = std::chrono::steady_clock::now();
  const ScenarioConfig scenario = load_scenario(config_path);
  const BuiltScenario built = build_scenario(scenario);

  SolveOutcome outcome;
  outcome.rhs_name = rhs_name;

  GridFunction* rhs_ptr = nullptr;
  std::optional<GridFunction> rhs;
  std::optional<WitnessFileData> replay;
  if (!rhs_name.empty() && rhs_name[0] == '@') {
    replay = read_witness_file(rhs_name.substr(1));
    if (replay->lower != scenario.lower || replay->upper != scenario.upper ||
        replay->panels != scenario.panels || replay->nodes_per_panel != scenario.nodes_per_panel)
      throw Error(errc::config_error, "witness grid does not match the scenario grid");
    rhs.emplace(built.config.grid, replay->samples);
  } else {
    rhs.emplace(resolve_rhs(built, rhs_name));
  }
  rhs_ptr = &*rhs;

  if (!built.system.correct) {
    // Report the degenerate system, then signal exit 2.
    outcome.verdict = false;
    write_text_file(out_path,
                    solve_report_json(built, outcome, timing ? elapsed_ms(start) : 0.0));
    return 2;
  }

  const Eigen::VectorXd coeffs = coefficients_solve(built.system, *rhs_ptr);
  const ApproxSolution sol = build_solution(*built.images, coeffs);
  outcome.coefficients.assign(coeffs.data(), coeffs.data() + coeffs.size());
  outcome.residual = residual_norm(*rhs_ptr, sol);
  outcome.orthogonality_defect = orthogonality_defect(*rhs_ptr, sol, built.config.tests);
  outcome.verdict = outcome.orthogonality_defect <=
                    scenario.tolerances.orth_tol * (1.0 + l2_norm(*rhs_ptr));
  if (replay) {
    outcome.stored_residual = replay->residual;
    outcome.reproduced = std::abs(outcome.residual - replay->residual) <= 1e-10;
  }
  write_text_file(out_path,
                  solve_report_json(built, outcome, timing ? elapsed_ms(start) : 0.0));
  return 0;
}

int run_adversary(const std::string& config_path, const std::string& out_path, bool timing) {
  const auto start = std::chrono::steady_clock::now();
  const ScenarioConfig scenario = load_scenario(config_path);
  const BuiltScenario built = build_scenario(scenario);
  const AdversaryWitness witness = construct_witness(built.config, *built.images);
  const WitnessCheck check =
      verify_witness(witness, built.config, *built.images, scenario.tolerances);
  const WorstCaseReport worst = worst_case_residual(built.config, *built.images);

  write_witness_file(out_path, make_witness_file(built, witness, check));
  write_text_file(out_path + ".report.json",
                  adversary_report_json(built, witness, check, worst,
                                        timing ? elapsed_ms(start) : 0.0));
  return check.pass ? 0 : 1;
}

int run_sweep(const std::string& config_path, const std::string& n_list,
              const std::string& out_path, bool timing) {
  const ScenarioConfig scenario = load_scenario(config_path);

  std::vector<std::size_t> n_values;
  std::string token;
  for (char c : n_list + ",") {
    if (c == ',') {
      if (!token.empty()) {
        std::size_t value = 0;
        for (char d : token) {
          if (d < '0' || d > '9')
            throw Error(errc::config_error, "sweep n list must be comma-separated integers");
          value = value * 10 + static_cast<std::size_t>(d - '0');
        }
        if (value < 2) throw Error(errc::config_error, "sweep requires every N >= 2");
        n_values.push_back(value);
        token.clear();
      }
    } else if (c != ' ') {
      token += c;
    }
  }

  std::vector<MethodConfig> configs;
  std::vector<std::string> build_errors(n_values.size());
  std::vector<SweepEntry> entries;
  // Build each row's method config up front; per-row build errors become
  // error-column entries rather than aborting the sweep.
  std::vector<std::optional<MethodConfig>> built_configs(n_values.size());
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    ScenarioConfig row = scenario;
    row.n = n_values[i];
    try {
      built_configs[i] = build_scenario(row).config;
    } catch (const Error& err) {
      build_errors[i] = errc_name(err.code());
    }
  }
  std::vector<std::size_t> run_index;
  for (std::size_t i = 0; i < n_values.size(); ++i)
    if (built_configs[i]) {
      run_index.push_back(i);
      configs.push_back(*built_configs[i]);
    }

  const std::vector<SweepEntry> ran = sweep(configs);
  entries.resize(n_values.size());
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    entries[i].n = n_values[i];
    entries[i].t = static_cast<std::size_t>(
        std::llround(scenario.t_multiplier * static_cast<double>(n_values[i])));
    entries[i].error = build_errors[i];
  }
  for (std::size_t j = 0; j < run_index.size(); ++j) entries[run_index[j]] = ran[j];
  if (!timing)
    for (auto& e : entries) e.wall_ms = 0.0;

  write_text_file(out_path, sweep_csv(entries));

  bool any_error = false;
  bool all_pass = true;
  for (const auto& e : entries) {
    if (!e.error.empty()) any_error = true;
    if (!e.witness ||
        e.witness->residual < 1.0 - scenario.tolerances.residual_tol)
      all_pass = false;
  }
  if (any_error) return 5;
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear Galerkin method with constructive worst-case certification"};
  app.require_subcommand(1);

  std::string config_path, rhs_name, out_path, n_list;
  bool timing = false;
  app.add_flag("--timing", timing,
               "measure wall time in reports (off by default so identical runs "
               "produce byte-identical files)");

  CLI::App* solve = app.add_subcommand("solve", "solve L u = f for a catalog right-hand side");
  solve->add_option("--config", config_path, "scenario config (JSON)")->required();
  solve->add_option("--rhs", rhs_name, "g<k>, l<tau>, or @witness-file")->required();
  solve->add_option("--out", out_path, "report path (JSON)")->required();

  CLI::App* adversary =
      app.add_subcommand("adversary", "construct and certify the unit-residual witness");
  adversary->add_option("--config", config_path, "scenario config (JSON)")->required();
  adversary->add_option("--out", out_path, "witness path (JSON; report at <out>.report.json)")
      ->required();

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "witness certificates across N values");
  sweep_cmd->add_option("--config", config_path, "scenario config (JSON)")->required();
  sweep_cmd->add_option("--n", n_list, "comma-separated N values")->required();
  sweep_cmd->add_option("--out", out_path, "CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(config_path, rhs_name, out_path, timing);
    if (adversary->parsed()) return run_adversary(config_path, out_path, timing);
    if (sweep_cmd->parsed()) return run_sweep(config_path, n_list, out_path, timing);
  } catch (const galcert::Error& err) {
    std::cerr << "error (" << galcert::errc_name(err.code()) << "): " << err.what() << "\n";
    return exit_code_for(err.code());
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 70;
  }
  return 70;
}
