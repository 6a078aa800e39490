// taulab: girth, surjectivity and expansion scans of Cayley graphs of
// SL(2,p) quotients of two-generator matrix groups over number fields.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "taulab/config.hpp"
#include "taulab/report.hpp"
#include "taulab/verify.hpp"

namespace {

using namespace taulab;

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitError = 2;

void setup_logging() {
  auto logger = spdlog::stderr_color_st("taulab");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("TAULAB_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only honour that for "off".
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
    else spdlog::warn("TAULAB_LOG={} not recognised, using info", env);
  }
}

/// Flags shared by every subcommand; unset optionals leave the config value.
struct Overrides {
  std::string config_path;
  std::optional<std::uint32_t> p_min, p_max;
  std::optional<unsigned> jobs;
  std::optional<std::uint64_t> seed, vertex_budget;
  std::optional<std::string> format;

  void attach(CLI::App* app, bool scan_flags) {
    app->add_option("--config", config_path, "Experiment config (JSON); the Sanov pair over Q when omitted");
    if (!scan_flags) return;
    app->add_option("--p-min", p_min, "Smallest prime scanned (> 2)");
    app->add_option("--p-max", p_max, "Largest prime scanned");
    app->add_option("--jobs", jobs, "Worker threads for per-prime jobs");
    app->add_option("--seed", seed, "Seed for the expansion sampler");
    app->add_option("--vertex-budget", vertex_budget, "Skip primes whose group order exceeds this");
    app->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json", "both"}));
  }

  Config resolve() const {
    Config cfg = config_path.empty() ? sanov_config() : parse_config(config_path);
    if (p_min) cfg.p_min = *p_min;
    if (p_max) cfg.p_max = *p_max;
    if (jobs) cfg.jobs = *jobs;
    if (seed) cfg.sampler.seed = *seed;
    if (vertex_budget) cfg.vertex_budget = *vertex_budget;
    if (format) cfg.output.format = *format;
    // Re-run validation on the merged values.
    return parse_config_text(config_to_json(cfg).dump());
  }
};

int run_scan(const Overrides& ov) {
  const Config cfg = ov.resolve();
  const GeneratorSystem gs = make_generators(cfg);
  spdlog::info("field {}, M = {:.6f}, C = {:.6f}", gs.field()->describe(), gs.M().value, gs.C());
  const ExperimentReport rep = run_girth_experiment(gs, experiment_options(cfg), [](const PrimeRow& r) {
    if (r.analysed())
      spdlog::info("p = {}: girth {} (bound {:.3f}), surjective {}, gap {:.6f}, c ~ {:.6f}", r.p, r.girth, r.bound,
                   r.surjective, r.gap, r.c_sampled);
    else
      spdlog::info("p = {}: excluded ({})", r.p, *r.excluded_reason);
  });
  for (const auto& note : rep.notes) spdlog::warn("{}", note);
  emit_report(rep, cfg, cfg.output.format);
  const bool pass = rep.all_assertions_pass();
  std::cout << (pass ? "PASS" : "FAIL") << " scan " << cfg.p_min << ".." << cfg.p_max << ": " << rep.rows.size()
            << " rows";
  if (rep.min_normalized_gap) std::cout << ", min normalized gap " << format_double(*rep.min_normalized_gap);
  std::cout << '\n';
  return pass ? kExitOk : kExitAssertion;
}

int run_mu(const Overrides& ov, std::size_t r_max, std::size_t trials, std::uint64_t seed) {
  const GeneratorSystem gs = make_generators(ov.resolve());
  const MuGrowthReport m = run_mu_growth_check(gs, r_max, trials, seed);
  std::cout << (m.pass ? "PASS" : "FAIL") << " mu-growth r<=" << r_max << ", " << m.words_checked << " words, "
            << m.violations << " violations, worst entry ratio " << format_double(m.worst_entry_ratio) << " ("
            << m.worst_word << "), worst denominator ratio " << format_double(m.worst_denominator_ratio) << '\n';
  return m.pass ? kExitOk : kExitAssertion;
}

int run_nested(const Overrides& ov, std::vector<std::uint32_t> primes) {
  const Config cfg = ov.resolve();
  if (primes.empty()) primes = cfg.nested_primes;
  if (primes.empty()) primes = {3, 5};
  const NestedReport rep = run_nested_check(make_generators(cfg), primes, cfg.vertex_budget);
  for (const auto& level : rep.levels) {
    std::cout << "level " << level.primes.size() << " [";
    for (std::size_t i = 0; i < level.primes.size(); ++i) std::cout << (i ? "," : "") << level.primes[i];
    std::cout << "]: " << level.closure_size << "/" << level.group_order
              << (level.surjective() ? " surjective" : " NOT surjective") << '\n';
  }
  if (rep.truncated) spdlog::warn("truncated at {}", *rep.truncated);
  return rep.all_surjective() ? kExitOk : kExitAssertion;
}

int run_relations(const Overrides& ov, std::optional<std::size_t> depth) {
  const Config cfg = ov.resolve();
  const std::size_t L = depth.value_or(cfg.relation_check_depth);
  const RelationReport rel = assert_no_short_relations(make_generators(cfg), L);
  std::cout << rel.words_checked << " reduced words of length <= " << L << " checked\n";
  if (rel.pm_identity_relation)
    std::cout << "shortest word equal to +-1: " << rel.pm_identity_relation->str() << '\n';
  if (rel.identity_relation) {
    std::cout << "relation: " << rel.identity_relation->str() << " = 1\n";
    return kExitAssertion;
  }
  std::cout << "no relation up to length " << L << '\n';
  return kExitOk;
}

int run_graph_export(const Overrides& ov, std::uint32_t p, std::optional<std::uint32_t> root, std::string out_path) {
  const Config cfg = ov.resolve();
  const GeneratorSystem gs = make_generators(cfg);
  if (!root) {
    const auto roots = detail::roots_mod(*gs.field(), p);
    if (roots.empty()) throw InvalidIdeal("minimal polynomial has no root mod " + std::to_string(p));
    root = roots.front();
  }
  const PrimeSite site = PrimeSite::create(gs.field(), p, *root);
  const CayleyGraph g = build_graph(reduce_generators(site, gs), cfg.vertex_budget);
  if (out_path.empty()) out_path = "cayley_p" + std::to_string(p) + ".edges";
  std::ofstream out(out_path);
  if (!out) throw Error("cannot open " + out_path + " for writing");
  const std::size_t edges = g.write_edge_list(out);
  std::cout << out_path << ": " << g.vertex_count() << " vertices, " << edges << " edges\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Girth and expansion experiments for SL(2,p) Cayley graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Overrides scan_ov, mu_ov, nested_ov, rel_ov, export_ov;
  auto* scan = app.add_subcommand("scan", "Girth / surjectivity / spectral scan over split primes");
  scan_ov.attach(scan, true);

  auto* mu = app.add_subcommand("mu-check", "House growth of cleared word products");
  mu_ov.attach(mu, false);
  std::size_t r_max = 25, trials = 1000;
  std::uint64_t mu_seed = 7;
  mu->add_option("--r-max", r_max, "Longest word length")->capture_default_str();
  mu->add_option("--trials", trials, "Random reduced words per length")->capture_default_str();
  mu->add_option("--seed", mu_seed, "Sampler seed")->capture_default_str();

  auto* nested = app.add_subcommand("nested", "CRT surjectivity onto products of SL(2,p_i)");
  nested_ov.attach(nested, false);
  std::vector<std::uint32_t> primes;
  nested->add_option("--primes", primes, "Ascending primes (default: config nested_primes, else 3,5)")->delimiter(',');

  auto* relations = app.add_subcommand("relations", "Search for short relations between the generators");
  rel_ov.attach(relations, false);
  std::optional<std::size_t> depth;
  relations->add_option("--depth", depth, "Maximum word length (default: config relation_check_depth)");

  auto* gexport = app.add_subcommand("graph-export", "Write the Cayley graph mod p as a labeled edge list");
  export_ov.attach(gexport, false);
  std::uint32_t p = 0;
  std::optional<std::uint32_t> root;
  std::string out_path;
  gexport->add_option("--p", p, "Prime")->required();
  gexport->add_option("--root", root, "Root of the minimal polynomial mod p (default: smallest)");
  gexport->add_option("--out", out_path, "Output path (default: cayley_p<p>.edges)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*scan) return run_scan(scan_ov);
    if (*mu) return run_mu(mu_ov, r_max, trials, mu_seed);
    if (*nested) return run_nested(nested_ov, primes);
    if (*relations) return run_relations(rel_ov, depth);
    if (*gexport) return run_graph_export(export_ov, p, root, out_path);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitError;
  }
  return kExitError;
}
