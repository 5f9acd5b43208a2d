#include "galcert/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "galcert/errors.hpp"

namespace galcert {

const char* errc_name(errc code) {
  switch (code) {
    case errc::invalid_argument: return "invalid-argument";
    case errc::grid_mismatch: return "grid-mismatch";
    case errc::independence_loss: return "independence-loss";
    case errc::images_dependent: return "images-dependent";
    case errc::cannot_extend: return "cannot-extend";
    case errc::singular_system: return "singular-system";
    case errc::size_limit: return "size-limit";
    case errc::no_witness: return "no-witness";
    case errc::singular_gram: return "singular-gram";
    case errc::incompatible_spaces: return "incompatible-spaces";
    case errc::config_error: return "config-error";
    case errc::io_error: return "io-error";
  }
  return "unknown";
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  out_ += '{';
  need_comma_ = false;
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  out_ += '[';
  need_comma_ = false;
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::key(std::string_view name) {
  if (need_comma_) out_ += ',';
  out_ += '"';
  out_ += name;
  out_ += "\":";
  need_comma_ = false;
  after_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::string(std::string_view value) {
  separate();
  out_ += '"';
  for (char c : value) {
    switch (c) {
      case '"': out_ += "\\\""; break;
      case '\\': out_ += "\\\\"; break;
      case '\n': out_ += "\\n"; break;
      case '\t': out_ += "\\t"; break;
      case '\r': out_ += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out_ += buf;
        } else {
          out_ += c;
        }
    }
  }
  out_ += '"';
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::number(double value) {
  separate();
  if (!std::isfinite(value)) {
    out_ += "null";
  } else {
    out_ += format_number(value);
  }
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::boolean(bool value) {
  separate();
  out_ += value ? "true" : "false";
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::null() {
  separate();
  out_ += "null";
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::raw(std::string_view json) {
  separate();
  out_ += json;
  need_comma_ = true;
  return *this;
}

void JsonWriter::separate() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (need_comma_) {
    out_ += ',';
    need_comma_ = false;
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(errc::io_error, "cannot open for writing: " + path);
  out << content;
  if (!out) throw Error(errc::io_error, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::io_error, "cannot open for reading: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string witness_checksum(const WitnessFileData& data) {
  // Canonical rendering from parsed values (not file bytes), so reading and
  // rewriting reproduces the same digest for the same binary64 payload.
  std::string canon;
  canon.reserve(32 * (data.span_coeffs.size() + data.samples.size()) + 256);
  auto put = [&canon](const std::string& piece) {
    canon += piece;
    canon += ';';
  };
  put(format_number(data.lower));
  put(format_number(data.upper));
  put(std::to_string(data.panels));
  put(std::to_string(data.nodes_per_panel));
  put(std::to_string(data.n));
  put(std::to_string(data.t));
  for (double v : data.span_coeffs) put(format_number(v));
  for (double v : data.samples) put(format_number(v));
  put(format_number(data.norm));
  put(format_number(data.orthogonality_defect));
  put(format_number(data.residual));
  put(format_number(data.epsilon_floor));
  put(format_number(data.max_coeff));
  char digest[32];
  std::snprintf(digest, sizeof(digest), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(canon)));
  return digest;
}

std::string witness_to_json(const WitnessFileData& data) {
  JsonWriter w;
  w.begin_object();
  w.key("format").string("galcert-witness-v1");
  w.key("domain");
  w.begin_object();
  w.key("lower").number(data.lower);
  w.key("upper").number(data.upper);
  w.end_object();
  w.key("grid");
  w.begin_object();
  w.key("panels").number(static_cast<double>(data.panels));
  w.key("nodes_per_panel").number(static_cast<double>(data.nodes_per_panel));
  w.end_object();
  w.key("n").number(static_cast<double>(data.n));
  w.key("t").number(static_cast<double>(data.t));
  w.key("span_coeffs");
  w.begin_array();
  for (double v : data.span_coeffs) w.number(v);
  w.end_array();
  w.key("samples");
  w.begin_array();
  for (double v : data.samples) w.number(v);
  w.end_array();
  w.key("certificate");
  w.begin_object();
  w.key("norm").number(data.norm);
  w.key("orthogonality_defect").number(data.orthogonality_defect);
  w.key("residual").number(data.residual);
  w.key("epsilon_floor").number(data.epsilon_floor);
  w.key("max_coeff").number(data.max_coeff);
  w.end_object();
  w.key("checksum").string(witness_checksum(data));
  w.end_object();
  return w.str() + "\n";
}

void write_witness_file(const std::string& path, const WitnessFileData& data) {
  write_text_file(path, witness_to_json(data));
}

WitnessFileData read_witness_file(const std::string& path) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::config_error, std::string("witness file is not valid JSON: ") + e.what());
  }
  try {
    if (root.at("format").get<std::string>() != "galcert-witness-v1")
      throw Error(errc::config_error, "unknown witness format");
    WitnessFileData data;
    data.lower = root.at("domain").at("lower").get<double>();
    data.upper = root.at("domain").at("upper").get<double>();
    data.panels = root.at("grid").at("panels").get<std::size_t>();
    data.nodes_per_panel = root.at("grid").at("nodes_per_panel").get<std::size_t>();
    data.n = root.at("n").get<std::size_t>();
    data.t = root.at("t").get<std::size_t>();
    data.span_coeffs = root.at("span_coeffs").get<std::vector<double>>();
    data.samples = root.at("samples").get<std::vector<double>>();
    const auto& cert = root.at("certificate");
    data.norm = cert.at("norm").get<double>();
    data.orthogonality_defect = cert.at("orthogonality_defect").get<double>();
    data.residual = cert.at("residual").get<double>();
    data.epsilon_floor = cert.at("epsilon_floor").get<double>();
    data.max_coeff = cert.at("max_coeff").get<double>();
    const std::string stored = root.at("checksum").get<std::string>();
    if (stored != witness_checksum(data))
      throw Error(errc::config_error, "witness checksum mismatch (file corrupted?)");
    return data;
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::config_error, std::string("malformed witness file: ") + e.what());
  }
}

namespace {

void emit_galerkin_block(JsonWriter& w, const GalerkinSystem& system) {
  w.key("galerkin");
  w.begin_object();
  w.key("det").number(system.det);
  w.key("condition").number(system.condition_estimate);
  w.key("correct").boolean(system.correct);
  w.end_object();
}

}  // namespace

std::string solve_report_json(const BuiltScenario& built, const SolveOutcome& outcome,
                              double wall_ms) {
  JsonWriter w;
  w.begin_object();
  w.key("report").string("solve");
  w.key("scenario");
  w.raw(scenario_to_json(built.scenario));
  w.key("rhs").string(outcome.rhs_name);
  emit_galerkin_block(w, built.system);
  w.key("solution");
  w.begin_object();
  w.key("coefficients");
  w.begin_array();
  for (double c : outcome.coefficients) w.number(c);
  w.end_array();
  w.key("residual").number(outcome.residual);
  w.key("orthogonality_defect").number(outcome.orthogonality_defect);
  w.end_object();
  if (outcome.stored_residual) {
    w.key("witness_replay");
    w.begin_object();
    w.key("stored_residual").number(*outcome.stored_residual);
    w.key("reproduced").boolean(outcome.reproduced.value_or(false));
    w.end_object();
  }
  w.key("timing_ms").number(wall_ms);
  w.key("verdict").string(outcome.verdict ? "pass" : "fail");
  w.end_object();
  return w.str() + "\n";
}

std::string adversary_report_json(const BuiltScenario& built, const AdversaryWitness& witness,
                                  const WitnessCheck& check, const WorstCaseReport& worst,
                                  double wall_ms) {
  JsonWriter w;
  w.begin_object();
  w.key("report").string("adversary");
  w.key("scenario");
  w.raw(scenario_to_json(built.scenario));
  emit_galerkin_block(w, built.system);
  w.key("witness");
  w.begin_object();
  w.key("norm").number(witness.norm);
  w.key("orthogonality_defect").number(witness.orthogonality_defect);
  w.key("residual").number(witness.residual);
  w.key("epsilon_floor").number(witness.epsilon_floor);
  w.key("max_coeff").number(check.max_coeff);
  w.end_object();
  w.key("verification");
  w.begin_object();
  w.key("norm").number(check.norm);
  w.key("orthogonality_defect").number(check.orthogonality_defect);
  w.key("residual").number(check.residual);
  w.key("span_reconstruction").number(check.span_reconstruction);
  w.key("norm_ok").boolean(check.norm_ok);
  w.key("orth_ok").boolean(check.orth_ok);
  w.key("residual_ok").boolean(check.residual_ok);
  w.key("kernel_ok").boolean(check.kernel_ok);
  w.end_object();
  w.key("worst_case");
  w.begin_object();
  w.key("sup_residual").number(worst.sup_residual);
  w.key("constraint_defect").number(worst.constraint_defect);
  w.end_object();
  w.key("timing_ms").number(wall_ms);
  w.key("verdict").string(check.pass ? "pass" : "fail");
  w.end_object();
  return w.str() + "\n";
}

std::string sweep_csv(const std::vector<SweepEntry>& entries) {
  std::string out = "n,t,det,cond,norm,orth_defect,residual,sup_residual,wall_ms,error\n";
  for (const auto& e : entries) {
    out += std::to_string(e.n);
    out += ',';
    out += std::to_string(e.t);
    out += ',';
    if (e.has_system) {
      out += format_number(e.det);
      out += ',';
      out += format_number(e.condition_estimate);
    } else {
      out += ',';
    }
    out += ',';
    if (e.witness) {
      out += format_number(e.witness->norm);
      out += ',';
      out += format_number(e.witness->orthogonality_defect);
      out += ',';
      out += format_number(e.witness->residual);
    } else {
      out += ",,";
    }
    out += ',';
    if (e.worst) out += format_number(e.worst->sup_residual);
    out += ',';
    out += format_number(e.wall_ms);
    out += ',';
    out += e.error;
    out += '\n';
  }
  return out;
}

}  // namespace galcert
