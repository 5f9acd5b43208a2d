#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "galcert/adversary.hpp"
#include "galcert/scenario.hpp"

namespace galcert {

/// %.17g -- round-trip exact for binary64; non-finite values map to null in
/// JSON and to "inf"/"-inf"/"nan" in CSV cells.
std::string format_number(double value);

std::uint64_t fnv1a64(std::string_view text);

/// Minimal deterministic JSON emitter (fixed field order, fixed number
/// formatting) so identical inputs produce byte-identical reports.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view name);
  JsonWriter& string(std::string_view value);
  JsonWriter& number(double value);
  JsonWriter& boolean(bool value);
  JsonWriter& null();
  /// Splice an already-serialized JSON value.
  JsonWriter& raw(std::string_view json);
  const std::string& str() const { return out_; }

 private:
  void separate();
  std::string out_;
  bool need_comma_ = false;
  bool after_key_ = false;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Witness files carry both the span coefficients (the construction) and the
/// grid samples (redundant, for replay validation), plus a checksum over a
/// canonical rendering of the payload.
struct WitnessFileData {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t panels = 0;
  std::size_t nodes_per_panel = 0;
  std::size_t n = 0;
  std::size_t t = 0;
  std::vector<double> span_coeffs;
  std::vector<double> samples;
  double norm = 0.0;
  double orthogonality_defect = 0.0;
  double residual = 0.0;
  double epsilon_floor = 0.0;
  double max_coeff = 0.0;
};

std::string witness_checksum(const WitnessFileData& data);
std::string witness_to_json(const WitnessFileData& data);
void write_witness_file(const std::string& path, const WitnessFileData& data);

/// Parses and validates the checksum; throws config_error on corruption.
WitnessFileData read_witness_file(const std::string& path);

struct SolveOutcome {
  std::string rhs_name;
  std::vector<double> coefficients;
  double residual = 0.0;
  double orthogonality_defect = 0.0;
  bool verdict = false;
  std::optional<double> stored_residual;  // witness replay only
  std::optional<bool> reproduced;
};

std::string solve_report_json(const BuiltScenario& built, const SolveOutcome& outcome,
                              double wall_ms);

std::string adversary_report_json(const BuiltScenario& built, const AdversaryWitness& witness,
                                  const WitnessCheck& check, const WorstCaseReport& worst,
                                  double wall_ms);

/// Fixed header: n,t,det,cond,norm,orth_defect,residual,sup_residual,wall_ms,error
std::string sweep_csv(const std::vector<SweepEntry>& entries);

}  // namespace galcert
