#pragma once

// Experiments over prime ranges: girth lower bound,
// surjectivity onto SL(2,p), spectral gaps, sampled expansion, the
// house-growth bound on cleared word products, and CRT surjectivity onto
// products of SL(2,p_i).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "taulab/cayley_graph.hpp"
#include "taulab/expansion.hpp"
#include "taulab/girth.hpp"
#include "taulab/matgroup.hpp"
#include "taulab/reduction.hpp"
#include "taulab/spectral.hpp"

namespace taulab {

struct PrimeRow {
  std::uint32_t p = 0;
  std::optional<std::uint32_t> root;
  bool surjective = false;
  std::size_t vertex_count = 0;
  std::size_t girth = 0;
  std::string girth_witness;
  double bound = 0;
  bool girth_ok = false;
  double lambda2 = 0;
  double lambda_min = 0;
  double gap = 0;
  std::size_t spectral_iterations = 0;
  double spectral_residual = 0;
  bool spectral_converged = false;
  double c_sampled = 0;
  std::uint64_t sampler_seed = 0;
  /// Set when no graph was analysed for this prime.
  std::optional<std::string> excluded_reason;

  bool analysed() const { return !excluded_reason.has_value(); }
};

struct ExperimentOptions {
  std::uint32_t p_min = 3;
  std::uint32_t p_max = 61;
  std::uint64_t vertex_budget = 8'000'000;
  double spectral_tol = 1e-8;
  std::size_t spectral_max_iter = 3000;
  std::size_t sampler_trials = 16;
  std::uint64_t seed = 1;
  std::size_t relation_check_depth = 10;
  /// Abort when a relation of length <= relation_check_depth exists.
  bool enforce_freeness = true;
  unsigned jobs = 1;
  /// House-growth check run alongside the scan (skipped when mu_r_max == 0).
  std::size_t mu_r_max = 25;
  std::size_t mu_trials = 1000;
  std::uint64_t mu_seed = 7;
};

struct MuGrowthReport {
  bool pass = true;
  std::size_t r_max = 0;
  std::size_t trials_per_length = 0;
  std::uint64_t seed = 0;
  std::uint64_t words_checked = 0;
  std::uint64_t violations = 0;
  /// max house(entry) / (2M)^r over all sampled words.
  double worst_entry_ratio = 0;
  /// max house(Z) / M^r over all sampled words.
  double worst_denominator_ratio = 0;
  std::string worst_word;
};

struct ExperimentReport {
  std::string field_desc;
  std::string generator_desc;
  Bounded M;
  double C = 0;
  RelationReport relations;
  bool freeness_ok = true;
  std::vector<PrimeRow> rows;
  std::optional<MuGrowthReport> mu_growth;
  /// Minimum gap and gap / k over analysed surjective rows (monitored, not asserted).
  std::optional<double> min_gap;
  std::optional<double> min_normalized_gap;
  std::vector<std::string> notes;

  bool mu_growth_pass() const { return !mu_growth || mu_growth->pass; }

  /// girth_ok, surjectivity and gap positivity on every analysed row, the
  /// house-growth check, and the freeness precondition.
  bool all_assertions_pass() const {
    if (!freeness_ok || !mu_growth_pass()) return false;
    return std::all_of(rows.begin(), rows.end(), [](const PrimeRow& r) {
      return !r.analysed() || (r.girth_ok && r.surjective && r.gap > 0);
    });
  }
};

/// Girth bound C ln p for the certified constant C.
inline double girth_bound(double C, std::uint32_t p) { return C * std::log(static_cast<double>(p)); }

inline std::uint64_t row_seed(std::uint64_t seed, std::uint32_t p) { return SplitMix64(seed).split(p).next(); }

/// Builds and analyses the Cayley graph for one prime site.
inline PrimeRow analyse_prime(const GeneratorSystem& gs, const PrimeSite& site, const ExperimentOptions& opt) {
  PrimeRow row;
  row.p = site.p();
  row.root = site.root();
  row.bound = girth_bound(gs.C(), site.p());
  if (sl2_order(site.p()) > opt.vertex_budget) {
    row.excluded_reason = "|SL(2," + std::to_string(site.p()) + ")| exceeds vertex budget";
    return row;
  }
  try {
    const ReducedGenerators red = reduce_generators(site, gs);
    const CayleyGraph g = build_graph(red, opt.vertex_budget);
    row.vertex_count = g.vertex_count();
    row.surjective = g.surjective();
    const GirthReport gr = girth(g);
    row.girth = gr.found ? gr.girth : 0;
    row.girth_witness = gr.witness_string(g);
    row.girth_ok = gr.found && static_cast<double>(row.girth) >= row.bound;
    const SpectralReport sp = spectral_gap(g, opt.spectral_tol, opt.spectral_max_iter);
    row.lambda2 = sp.lambda2;
    row.lambda_min = sp.lambda_min;
    row.gap = sp.gap;
    row.spectral_iterations = sp.iterations;
    row.spectral_residual = sp.residual;
    row.spectral_converged = sp.converged;
    row.sampler_seed = row_seed(opt.seed, site.p());
    row.c_sampled = expansion_sampled(g, opt.sampler_trials, row.sampler_seed).c_value();
  } catch (const Error& e) {
    row.excluded_reason = e.what();
  }
  return row;
}

/// Samples `trials_per_length` uniform reduced words of each length 1..r_max
/// and checks house(entry) <= (2M)^r and house(Z) <= M^r on the cleared
/// product, allowing a relative slack of rel_tol plus the house error bounds.
inline MuGrowthReport run_mu_growth_check(const GeneratorSystem& gs, std::size_t r_max, std::size_t trials_per_length,
                                          std::uint64_t seed, double rel_tol = 1e-9) {
  if (r_max < 1) throw Error("mu-growth check needs r_max >= 1");
  MuGrowthReport rep;
  rep.r_max = r_max;
  rep.trials_per_length = trials_per_length;
  rep.seed = seed;
  const double M = gs.M().upper();
  const SplitMix64 root(seed);
  for (std::size_t r = 1; r <= r_max; ++r) {
    SplitMix64 rng = root.split(r);
    const double entry_bound = std::pow(2.0 * M, static_cast<double>(r));
    const double denom_bound = std::pow(M, static_cast<double>(r));
    for (std::size_t t = 0; t < trials_per_length; ++t) {
      const ReducedWord w = ReducedWord::random(r, rng);
      const ClearedMatrix c = eval_word_cleared(w, gs);
      ++rep.words_checked;
      bool bad = false;
      for (const auto& e : c.star.entries()) {
        const Bounded h = house(e);
        const double ratio = h.value / entry_bound;
        if (ratio > rep.worst_entry_ratio) {
          rep.worst_entry_ratio = ratio;
          rep.worst_word = w.str();
        }
        bad |= h.lower() > entry_bound * (1.0 + rel_tol);
      }
      const Bounded hz = house(c.denom);
      rep.worst_denominator_ratio = std::max(rep.worst_denominator_ratio, hz.value / denom_bound);
      bad |= hz.lower() > denom_bound * (1.0 + rel_tol);
      if (bad) ++rep.violations;
    }
  }
  rep.pass = rep.violations == 0;
  return rep;
}

/// Scans every completely split prime in [p_min, p_max] (smallest root as
/// the site). Primes excluded for ramification, denominators, the vertex
/// budget or a per-row error get a row with excluded_reason; inert and
/// partially split primes get none. Rows come back sorted by p whatever
/// the job count. `on_row` (optional) is called as rows finish, possibly
/// from worker threads, serialized by a mutex.
inline ExperimentReport run_girth_experiment(const GeneratorSystem& gs, const ExperimentOptions& opt,
                                             const std::function<void(const PrimeRow&)>& on_row = {}) {
  ExperimentReport rep;
  rep.field_desc = gs.field()->describe();
  rep.generator_desc = "a = " + gs.a().str() + ", b = " + gs.b().str();
  rep.M = gs.M();
  rep.C = gs.C();

  const SplitScan scan = split_primes(*gs.field(), gs, opt.p_min, opt.p_max);

  rep.relations = assert_no_short_relations(gs, opt.relation_check_depth);
  if (!rep.relations.free_up_to_length()) {
    rep.notes.push_back("relation " + rep.relations.identity_relation->str() + " = id of length " +
                        std::to_string(rep.relations.identity_relation->size()) + ": generators are not free");
    if (opt.enforce_freeness) {
      rep.freeness_ok = false;
      rep.notes.push_back("experiment aborted: freeness precondition failed");
      return rep;
    }
  }
  if (opt.mu_r_max > 0) rep.mu_growth = run_mu_growth_check(gs, opt.mu_r_max, opt.mu_trials, opt.mu_seed);

  std::vector<PrimeRow> rows;
  std::vector<std::optional<PrimeSite>> sites;
  for (const auto& sp : scan.split) {
    PrimeRow placeholder;
    placeholder.p = sp.p;
    rows.push_back(placeholder);
    sites.push_back(PrimeSite::create(gs.field(), sp.p, sp.roots.front()));
  }
  for (const auto& ex : scan.excluded) {
    if (!ex.reported) continue;
    PrimeRow r;
    r.p = ex.p;
    r.excluded_reason = ex.reason;
    rows.push_back(r);
    sites.emplace_back();
  }

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      if (sites[i]) rows[i] = analyse_prime(gs, *sites[i], opt);
      if (on_row) {
        std::lock_guard lock(mu);
        on_row(rows[i]);
      }
    }
  };
  const unsigned jobs = std::max(1U, opt.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  std::sort(rows.begin(), rows.end(), [](const PrimeRow& x, const PrimeRow& y) { return x.p < y.p; });
  rep.rows = std::move(rows);

  for (const auto& r : rep.rows) {
    if (!r.analysed() || !r.surjective) continue;
    if (!rep.min_gap || r.gap < *rep.min_gap) rep.min_gap = r.gap;
    const double ng = r.gap / 4.0;
    if (!rep.min_normalized_gap || ng < *rep.min_normalized_gap) rep.min_normalized_gap = ng;
  }
  return rep;
}

struct NestedLevel {
  std::vector<std::uint32_t> primes;
  std::uint64_t closure_size = 0;
  std::uint64_t group_order = 0;

  bool surjective() const { return closure_size == group_order; }
};

struct NestedReport {
  std::vector<NestedLevel> levels;
  /// Set when the vertex budget stopped the descent early.
  std::optional<std::string> truncated;

  bool all_surjective() const {
    return std::all_of(levels.begin(), levels.end(), [](const NestedLevel& l) { return l.surjective(); });
  }
};

/// For each prefix P_1...P_l of the given primes (smallest root per prime),
/// the BFS closure of the CRT-reduced generators in prod SL(2,p_i).
inline NestedReport run_nested_check(const GeneratorSystem& gs, const std::vector<std::uint32_t>& primes,
                                     std::uint64_t vertex_budget) {
  std::vector<PrimeSite> sites;
  for (auto p : primes) {
    const auto roots = detail::roots_mod(*gs.field(), p);
    if (roots.empty()) throw InvalidIdeal(std::to_string(p) + " has no root of the minimal polynomial");
    sites.push_back(PrimeSite::create(gs.field(), p, roots.front()));
  }
  const IdealProduct full(sites);

  NestedReport rep;
  for (std::size_t level = 1; level <= sites.size(); ++level) {
    const IdealProduct ideal(std::vector<PrimeSite>(sites.begin(), sites.begin() + static_cast<std::ptrdiff_t>(level)));
    const SL2ProductGroup group(ideal.primes());
    if (group.order() > vertex_budget) {
      rep.truncated = "level " + std::to_string(level) + " (" + group.describe() + ", order " +
                      std::to_string(group.order()) + ") exceeds the vertex budget";
      break;
    }
    std::array<std::vector<ModpMatrix>, 4> images;
    for (Letter l : kLetters) images[index(l)] = crt_reduce(ideal, gs.matrix(l));
    const CayleyGraph g = build_graph(group, labeled(images), vertex_budget);
    rep.levels.push_back({ideal.primes(), g.vertex_count(), group.order()});
  }
  return rep;
}

}  // namespace taulab
