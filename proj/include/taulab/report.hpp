#pragma once

// CSV and JSON serialization of experiment reports.

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "taulab/config.hpp"
#include "taulab/verify.hpp"

namespace taulab {

inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr const char* kCsvHeader = "p,root,surjective,girth,bound,girth_ok,lambda2,gap,c_sampled,excluded_reason";

/// Shortest round-trip decimal form.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace detail

/// Excluded rows leave the numeric columns empty.
inline void write_csv(const ExperimentReport& rep, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rep.rows) {
    out << r.p << ',';
    if (r.root) out << *r.root;
    out << ',';
    if (r.analysed()) {
      out << (r.surjective ? "true" : "false") << ',' << r.girth << ',' << format_double(r.bound) << ','
          << (r.girth_ok ? "true" : "false") << ',' << format_double(r.lambda2) << ',' << format_double(r.gap) << ','
          << format_double(r.c_sampled) << ',';
    } else {
      out << ",,,,,,," << detail::csv_field(*r.excluded_reason);
    }
    out << '\n';
  }
}

inline std::string report_csv(const ExperimentReport& rep) {
  std::ostringstream ss;
  write_csv(rep, ss);
  return ss.str();
}

inline nlohmann::json row_json(const PrimeRow& r) {
  using nlohmann::json;
  json j{{"p", r.p}, {"root", r.root ? json(*r.root) : json(nullptr)}};
  if (!r.analysed()) {
    j["excluded_reason"] = *r.excluded_reason;
    return j;
  }
  j["surjective"] = r.surjective;
  j["vertex_count"] = r.vertex_count;
  j["girth"] = r.girth;
  j["girth_witness"] = r.girth_witness;
  j["bound"] = r.bound;
  j["girth_ok"] = r.girth_ok;
  j["lambda2"] = r.lambda2;
  j["lambda_min"] = r.lambda_min;
  j["gap"] = r.gap;
  j["spectral"] = {{"iterations", r.spectral_iterations},
                   {"residual", r.spectral_residual},
                   {"converged", r.spectral_converged}};
  j["c_sampled"] = r.c_sampled;
  j["sampler_seed"] = r.sampler_seed;
  j["excluded_reason"] = nullptr;
  return j;
}

inline nlohmann::json mu_growth_json(const MuGrowthReport& m) {
  return {{"pass", m.pass},
          {"r_max", m.r_max},
          {"trials_per_length", m.trials_per_length},
          {"seed", m.seed},
          {"words_checked", m.words_checked},
          {"violations", m.violations},
          {"worst_entry_ratio", m.worst_entry_ratio},
          {"worst_denominator_ratio", m.worst_denominator_ratio},
          {"worst_word", m.worst_word}};
}

inline nlohmann::json relations_json(const RelationReport& rel) {
  using nlohmann::json;
  return {{"max_length", rel.max_length},
          {"words_checked", rel.words_checked},
          {"identity_relation", rel.identity_relation ? json(rel.identity_relation->str()) : json(nullptr)},
          {"pm_identity_relation", rel.pm_identity_relation ? json(rel.pm_identity_relation->str()) : json(nullptr)},
          {"free_up_to_length", rel.free_up_to_length()}};
}

inline nlohmann::json report_json(const ExperimentReport& rep, const Config& cfg) {
  using nlohmann::json;
  json rows = json::array();
  for (const auto& r : rep.rows) rows.push_back(row_json(r));
  auto opt = [](const std::optional<double>& x) { return x ? json(*x) : json(nullptr); };
  return {{"tool", "taulab"},
          {"version", kToolVersion},
          {"config", config_to_json(cfg)},
          {"field", rep.field_desc},
          {"generators", rep.generator_desc},
          {"M", {{"value", rep.M.value}, {"error", rep.M.error}, {"upper", rep.M.upper()}}},
          {"C", rep.C},
          {"relations", relations_json(rep.relations)},
          {"freeness_ok", rep.freeness_ok},
          {"mu_growth", rep.mu_growth ? mu_growth_json(*rep.mu_growth) : json(nullptr)},
          {"rows", rows},
          {"min_gap", opt(rep.min_gap)},
          {"min_normalized_gap", opt(rep.min_normalized_gap)},
          {"notes", rep.notes},
          {"all_assertions_pass", rep.all_assertions_pass()}};
}

inline std::string report_json_text(const ExperimentReport& rep, const Config& cfg) {
  return report_json(rep, cfg).dump(2) + "\n";
}

/// Writes the formats selected by `format` (csv, json or both) to the
/// paths in cfg.output.
inline void emit_report(const ExperimentReport& rep, const Config& cfg, const std::string& format) {
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw Error("write to " + path + " failed");
  };
  if (format == "csv" || format == "both") write(cfg.output.csv, report_csv(rep));
  if (format == "json" || format == "both") write(cfg.output.json, report_json_text(rep, cfg));
}

}  // namespace taulab
