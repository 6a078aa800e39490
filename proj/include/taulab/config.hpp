#pragma once

// JSON experiment configuration: parsing, validation and re-serialization.

#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "taulab/matgroup.hpp"
#include "taulab/verify.hpp"

namespace taulab {

using RationalMatrix = std::array<std::array<std::vector<Rational>, 2>, 2>;

struct SamplerConfig {
  std::size_t trials = 16;
  std::uint64_t seed = 1;
  friend bool operator==(const SamplerConfig&, const SamplerConfig&) = default;
};

struct MuCheckConfig {
  std::size_t r_max = 25;  // 0 disables the check
  std::size_t trials = 1000;
  std::uint64_t seed = 7;
  friend bool operator==(const MuCheckConfig&, const MuCheckConfig&) = default;
};

struct OutputConfig {
  std::string csv = "report.csv";
  std::string json = "report.json";
  std::string format = "both";  // csv | json | both
  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct Config {
  std::vector<BigInt> minpoly;
  RationalMatrix a;
  RationalMatrix b;
  std::uint32_t p_min = 3;
  std::uint32_t p_max = 61;
  std::uint64_t vertex_budget = 8'000'000;
  double spectral_tol = 1e-8;
  SamplerConfig sampler;
  std::size_t relation_check_depth = 10;
  bool enforce_freeness = true;
  std::vector<std::uint32_t> nested_primes;
  MuCheckConfig mu_check;
  unsigned jobs = 1;
  OutputConfig output;

  friend bool operator==(const Config&, const Config&) = default;
};

namespace detail {

using nlohmann::json;

inline std::string where(const std::string& path) { return "field '" + path + "'"; }

inline BigInt json_bigint(const json& j, const std::string& path) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? BigInt(j.get<std::uint64_t>()) : BigInt(j.get<std::int64_t>());
  if (j.is_string()) {
    const Rational r = parse_rational(j.get<std::string>());
    if (boost::multiprecision::denominator(r) != 1) throw ParseError(where(path) + ": expected an integer");
    return boost::multiprecision::numerator(r);
  }
  throw ParseError(where(path) + ": expected an integer or integer string");
}

inline Rational json_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(json_bigint(j, path));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(where(path) + ": " + e.what());
    }
  }
  throw ParseError(where(path) + ": expected a rational (\"p/q\" string or integer)");
}

inline json rational_json(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  if (boost::multiprecision::denominator(r) == 1 && num >= std::numeric_limits<std::int64_t>::min() &&
      num <= std::numeric_limits<std::int64_t>::max())
    return num.convert_to<std::int64_t>();
  return format_rational(r);
}

template <class T>
T json_uint(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(where(path) + ": expected a non-negative integer");
  if (j.is_number_unsigned()) return static_cast<T>(j.get<std::uint64_t>());
  const auto v = j.get<std::int64_t>();
  if (v < 0) throw ParseError(where(path) + ": expected a non-negative integer, got " + std::to_string(v));
  return static_cast<T>(v);
}

/// A field element is an array of rationals (power-basis coordinates); a bare
/// rational is accepted as a constant.
inline std::vector<Rational> json_element(const json& j, const std::string& path) {
  std::vector<Rational> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(json_rational(j[i], path + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(json_rational(j, path));
  }
  return out;
}

inline RationalMatrix json_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 || !j[1].is_array() || j[1].size() != 2)
    throw ParseError(where(path) + ": expected a 2x2 array of field elements");
  RationalMatrix m;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c)
      m[r][c] = json_element(j[r][c], path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  return m;
}

inline json matrix_json(const RationalMatrix& m) {
  json out = json::array();
  for (const auto& row : m) {
    json jr = json::array();
    for (const auto& e : row) {
      json je = json::array();
      for (const auto& c : e) je.push_back(rational_json(c));
      jr.push_back(je);
    }
    out.push_back(jr);
  }
  return out;
}

}  // namespace detail

/// Parses and validates a configuration from JSON text. ParseError carries
/// the line/column of a syntax error or the path of a mistyped field;
/// ValidationError lists every violated bound.
inline Config parse_config_text(const std::string& text) {
  using detail::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config must be a JSON object");

  Config cfg;
  if (!j.contains("field") || !j["field"].is_object() || !j["field"].contains("minpoly") ||
      !j["field"]["minpoly"].is_array())
    throw ParseError(detail::where("field.minpoly") + ": required array of integer coefficients");
  const json& mp = j["field"]["minpoly"];
  for (std::size_t i = 0; i < mp.size(); ++i)
    cfg.minpoly.push_back(detail::json_bigint(mp[i], "field.minpoly[" + std::to_string(i) + "]"));
  if (!j.contains("generators") || !j["generators"].is_object() || !j["generators"].contains("a") ||
      !j["generators"].contains("b"))
    throw ParseError(detail::where("generators") + ": required object with matrices a and b");
  cfg.a = detail::json_matrix(j["generators"]["a"], "generators.a");
  cfg.b = detail::json_matrix(j["generators"]["b"], "generators.b");

  if (j.contains("p_min")) cfg.p_min = detail::json_uint<std::uint32_t>(j["p_min"], "p_min");
  if (j.contains("p_max")) cfg.p_max = detail::json_uint<std::uint32_t>(j["p_max"], "p_max");
  if (j.contains("vertex_budget")) cfg.vertex_budget = detail::json_uint<std::uint64_t>(j["vertex_budget"], "vertex_budget");
  if (j.contains("spectral_tol")) {
    if (!j["spectral_tol"].is_number()) throw ParseError(detail::where("spectral_tol") + ": expected a number");
    cfg.spectral_tol = j["spectral_tol"].get<double>();
  }
  if (j.contains("sampler")) {
    const json& s = j["sampler"];
    if (!s.is_object()) throw ParseError(detail::where("sampler") + ": expected an object");
    if (s.contains("trials")) cfg.sampler.trials = detail::json_uint<std::size_t>(s["trials"], "sampler.trials");
    if (s.contains("seed")) cfg.sampler.seed = detail::json_uint<std::uint64_t>(s["seed"], "sampler.seed");
  }
  if (j.contains("relation_check_depth"))
    cfg.relation_check_depth = detail::json_uint<std::size_t>(j["relation_check_depth"], "relation_check_depth");
  if (j.contains("enforce_freeness")) {
    if (!j["enforce_freeness"].is_boolean()) throw ParseError(detail::where("enforce_freeness") + ": expected a boolean");
    cfg.enforce_freeness = j["enforce_freeness"].get<bool>();
  }
  if (j.contains("nested_primes") && !j["nested_primes"].is_null()) {
    const json& np = j["nested_primes"];
    if (!np.is_array()) throw ParseError(detail::where("nested_primes") + ": expected an array of primes");
    for (std::size_t i = 0; i < np.size(); ++i)
      cfg.nested_primes.push_back(detail::json_uint<std::uint32_t>(np[i], "nested_primes[" + std::to_string(i) + "]"));
  }
  if (j.contains("mu_check")) {
    const json& m = j["mu_check"];
    if (!m.is_object()) throw ParseError(detail::where("mu_check") + ": expected an object");
    if (m.contains("r_max")) cfg.mu_check.r_max = detail::json_uint<std::size_t>(m["r_max"], "mu_check.r_max");
    if (m.contains("trials")) cfg.mu_check.trials = detail::json_uint<std::size_t>(m["trials"], "mu_check.trials");
    if (m.contains("seed")) cfg.mu_check.seed = detail::json_uint<std::uint64_t>(m["seed"], "mu_check.seed");
  }
  if (j.contains("jobs")) cfg.jobs = detail::json_uint<unsigned>(j["jobs"], "jobs");
  if (j.contains("output")) {
    const json& o = j["output"];
    if (!o.is_object()) throw ParseError(detail::where("output") + ": expected an object");
    for (const char* key : {"csv", "json", "format"}) {
      if (o.contains(key) && !o[key].is_string()) throw ParseError(detail::where(std::string("output.") + key) + ": expected a string");
    }
    if (o.contains("csv")) cfg.output.csv = o["csv"].get<std::string>();
    if (o.contains("json")) cfg.output.json = o["json"].get<std::string>();
    if (o.contains("format")) cfg.output.format = o["format"].get<std::string>();
  }

  std::vector<std::string> problems;
  const std::size_t degree = cfg.minpoly.empty() ? 0 : cfg.minpoly.size() - 1;
  if (degree < 1) problems.push_back("field.minpoly must have degree >= 1");
  for (const auto* m : {&cfg.a, &cfg.b})
    for (const auto& row : *m)
      for (const auto& e : row)
        if (degree >= 1 && (e.empty() || e.size() > degree))
          problems.push_back("generator entries need 1 to " + std::to_string(degree) + " coordinates");
  if (cfg.p_min <= 2) problems.push_back("p_min must be > 2 (got " + std::to_string(cfg.p_min) + ")");
  if (cfg.p_max < cfg.p_min) problems.push_back("p_max must be >= p_min");
  if (cfg.p_max >= (1U << 16)) problems.push_back("p_max must be < 65536");
  if (cfg.vertex_budget == 0) problems.push_back("vertex_budget must be positive");
  if (!(cfg.spectral_tol > 0)) problems.push_back("spectral_tol must be positive");
  if (cfg.sampler.trials == 0) problems.push_back("sampler.trials must be positive");
  if (cfg.relation_check_depth == 0) problems.push_back("relation_check_depth must be positive");
  if (cfg.jobs == 0) problems.push_back("jobs must be positive");
  if (cfg.mu_check.r_max > 0 && cfg.mu_check.trials == 0) problems.push_back("mu_check.trials must be positive");
  for (auto p : cfg.nested_primes)
    if (p <= 2) problems.push_back("nested_primes entries must be odd primes (got " + std::to_string(p) + ")");
  if (cfg.output.format != "csv" && cfg.output.format != "json" && cfg.output.format != "both")
    problems.push_back("output.format must be csv, json or both");
  if (!problems.empty()) {
    std::string msg = "invalid config:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw ValidationError(msg);
  }
  return cfg;
}

inline Config parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

inline nlohmann::json config_to_json(const Config& cfg) {
  using nlohmann::json;
  json mp = json::array();
  for (const auto& c : cfg.minpoly) mp.push_back(detail::rational_json(Rational(c)));
  json np = json::array();
  for (auto p : cfg.nested_primes) np.push_back(p);
  return json{{"field", {{"minpoly", mp}}},
              {"generators", {{"a", detail::matrix_json(cfg.a)}, {"b", detail::matrix_json(cfg.b)}}},
              {"p_min", cfg.p_min},
              {"p_max", cfg.p_max},
              {"vertex_budget", cfg.vertex_budget},
              {"spectral_tol", cfg.spectral_tol},
              {"sampler", {{"trials", cfg.sampler.trials}, {"seed", cfg.sampler.seed}}},
              {"relation_check_depth", cfg.relation_check_depth},
              {"enforce_freeness", cfg.enforce_freeness},
              {"nested_primes", np},
              {"mu_check", {{"r_max", cfg.mu_check.r_max}, {"trials", cfg.mu_check.trials}, {"seed", cfg.mu_check.seed}}},
              {"jobs", cfg.jobs},
              {"output", {{"csv", cfg.output.csv}, {"json", cfg.output.json}, {"format", cfg.output.format}}}};
}

/// Field and generator system described by the config. Missing trailing
/// coordinates of an entry are zero.
inline GeneratorSystem make_generators(const Config& cfg) {
  const FieldPtr field = NumberField::create(cfg.minpoly);
  auto element = [&](const std::vector<Rational>& coords) { return FieldElement(field, coords); };
  auto matrix = [&](const RationalMatrix& m) {
    return Mat2K(element(m[0][0]), element(m[0][1]), element(m[1][0]), element(m[1][1]));
  };
  return GeneratorSystem::create(matrix(cfg.a), matrix(cfg.b));
}

inline ExperimentOptions experiment_options(const Config& cfg) {
  ExperimentOptions opt;
  opt.p_min = cfg.p_min;
  opt.p_max = cfg.p_max;
  opt.vertex_budget = cfg.vertex_budget;
  opt.spectral_tol = cfg.spectral_tol;
  opt.sampler_trials = cfg.sampler.trials;
  opt.seed = cfg.sampler.seed;
  opt.relation_check_depth = cfg.relation_check_depth;
  opt.enforce_freeness = cfg.enforce_freeness;
  opt.jobs = cfg.jobs;
  opt.mu_r_max = cfg.mu_check.r_max;
  opt.mu_trials = cfg.mu_check.trials;
  opt.mu_seed = cfg.mu_check.seed;
  return opt;
}

/// The Sanov pair a = [[1,2],[0,1]], b = [[1,0],[2,1]] over Q.
inline Config sanov_config() {
  Config cfg;
  cfg.minpoly = {0, 1};
  auto m = [](int e00, int e01, int e10, int e11) {
    RationalMatrix r;
    r[0][0] = {Rational(e00)};
    r[0][1] = {Rational(e01)};
    r[1][0] = {Rational(e10)};
    r[1][1] = {Rational(e11)};
    return r;
  };
  cfg.a = m(1, 2, 0, 1);
  cfg.b = m(1, 0, 2, 1);
  return cfg;
}

}  // namespace taulab
