#pragma once

// The expander-definition constant
//   c(G) = min over nonempty proper A of |dA| / ((1 - |A|/n) |A|),
// where dA is the set of vertices outside A adjacent to A.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "taulab/cayley_graph.hpp"
#include "taulab/random.hpp"

namespace taulab {

/// Exact value of the ratio |dA| n / ((n - |A|) |A|) for one subset size.
struct ExpansionRatio {
  std::uint64_t boundary = 0;
  std::uint64_t size = 0;
  std::uint64_t n = 0;

  double value() const {
    return static_cast<double>(boundary) * static_cast<double>(n) /
           (static_cast<double>(n - size) * static_cast<double>(size));
  }
  /// The ratio as a reduced fraction num / den.
  std::pair<std::uint64_t, std::uint64_t> fraction() const {
    std::uint64_t num = boundary * n, den = (n - size) * size;
    const std::uint64_t g = std::gcd(num, den);
    return {num / g, den / g};
  }
  friend bool operator<(const ExpansionRatio& x, const ExpansionRatio& y) {
    return static_cast<__uint128_t>(x.boundary) * ((y.n - y.size) * y.size) * x.n <
           static_cast<__uint128_t>(y.boundary) * ((x.n - x.size) * x.size) * y.n;
  }
};

enum class ExpansionMode { exact, sampled };

struct ExpansionReport {
  ExpansionMode mode = ExpansionMode::exact;
  ExpansionRatio best;
  /// Vertices of a subset attaining `best`.
  std::vector<std::uint32_t> witness_set;
  std::uint64_t subsets_examined = 0;
  std::uint64_t seed = 0;

  double c_value() const { return best.value(); }
};

namespace detail {

/// Boundary size of a vertex subset; `mark` is scratch of size n, all zero on
/// entry and on exit.
inline std::uint64_t vertex_boundary(const CayleyGraph& g, std::span<const std::uint32_t> subset,
                                     std::vector<std::uint8_t>& mark) {
  for (auto v : subset) mark[v] = 1;
  std::uint64_t boundary = 0;
  std::vector<std::uint32_t> touched;
  for (auto v : subset) {
    for (auto u : g.neighbors(v)) {
      if (mark[u] == 0) {
        mark[u] = 2;
        touched.push_back(u);
        ++boundary;
      }
    }
  }
  for (auto v : subset) mark[v] = 0;
  for (auto u : touched) mark[u] = 0;
  return boundary;
}

}  // namespace detail

/// Ratio of one subset (exposed for cross-graph comparisons).
inline ExpansionRatio expansion_ratio(const CayleyGraph& g, std::span<const std::uint32_t> subset) {
  std::vector<std::uint8_t> mark(g.vertex_count(), 0);
  return {detail::vertex_boundary(g, subset, mark), subset.size(), g.vertex_count()};
}

inline constexpr std::size_t kExactExpansionLimit = 24;

/// Exhaustive minimum over all 2^n - 2 nonempty proper subsets, visited in
/// Gray-code order so each step updates neighbor counts of one vertex.
inline ExpansionReport expansion_exact(const CayleyGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n > kExactExpansionLimit)
    throw TooLarge("exact expansion needs <= " + std::to_string(kExactExpansionLimit) + " vertices, got " +
                   std::to_string(n));
  if (n < 2) throw TooLarge("exact expansion needs at least two vertices");

  // Distinct neighbors: the boundary is a set, multiplicity is irrelevant.
  std::vector<std::vector<std::uint32_t>> nbrs(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    auto ns = g.neighbors(v);
    nbrs[v].assign(ns.begin(), ns.end());
    std::sort(nbrs[v].begin(), nbrs[v].end());
    nbrs[v].erase(std::unique(nbrs[v].begin(), nbrs[v].end()), nbrs[v].end());
  }

  std::vector<std::uint32_t> count(n, 0);  // neighbors inside A
  std::uint32_t in_set = 0;
  std::uint64_t size = 0, boundary = 0;
  ExpansionReport rep;
  rep.mode = ExpansionMode::exact;
  bool have = false;
  std::uint32_t best_mask = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    const auto v = static_cast<std::uint32_t>(std::countr_zero(i));
    const std::uint32_t bit = 1U << v;
    if ((in_set & bit) == 0) {
      for (auto u : nbrs[v]) {
        if (count[u]++ == 0 && (in_set & (1U << u)) == 0) ++boundary;
      }
      if (count[v] > 0) --boundary;
      in_set |= bit;
      ++size;
    } else {
      in_set &= ~bit;
      --size;
      if (count[v] > 0) ++boundary;
      for (auto u : nbrs[v]) {
        if (--count[u] == 0 && (in_set & (1U << u)) == 0) --boundary;
      }
    }
    if (size == n) continue;
    ++rep.subsets_examined;
    const ExpansionRatio r{boundary, size, n};
    if (!have || r < rep.best) {
      rep.best = r;
      best_mask = in_set;
      have = true;
    }
  }
  for (std::uint32_t v = 0; v < n; ++v)
    if (best_mask & (1U << v)) rep.witness_set.push_back(v);
  return rep;
}

namespace detail {

/// A vertex subset with incrementally maintained boundary size.
class SubsetState {
 public:
  explicit SubsetState(const CayleyGraph& g)
      : n_(g.vertex_count()), k_(g.k_reg()), nbr_(n_ * k_), count_(n_, 0), inside_(n_, 0) {
    // Repeated neighbors are replaced by kNone so each distinct one counts once.
    for (std::uint32_t v = 0; v < n_; ++v) {
      auto ns = g.neighbors(v);
      for (std::size_t i = 0; i < k_; ++i) {
        const bool repeat = std::find(ns.begin(), ns.begin() + static_cast<std::ptrdiff_t>(i), ns[i]) !=
                            ns.begin() + static_cast<std::ptrdiff_t>(i);
        nbr_[v * k_ + i] = repeat ? CayleyGraph::kNone : ns[i];
      }
    }
  }

  void toggle(std::uint32_t v) {
    const std::uint32_t* row = nbr_.data() + v * k_;
    if (!inside_[v]) {
      for (std::size_t i = 0; i < k_; ++i) {
        const std::uint32_t u = row[i];
        if (u != CayleyGraph::kNone && count_[u]++ == 0 && !inside_[u]) ++boundary_;
      }
      if (count_[v] > 0) --boundary_;
      inside_[v] = 1;
      ++size_;
    } else {
      inside_[v] = 0;
      --size_;
      if (count_[v] > 0) ++boundary_;
      for (std::size_t i = 0; i < k_; ++i) {
        const std::uint32_t u = row[i];
        if (u != CayleyGraph::kNone && --count_[u] == 0 && !inside_[u]) --boundary_;
      }
    }
  }

  void assign(std::span<const std::uint32_t> subset) {
    clear();
    for (auto v : subset) toggle(v);
  }

  void clear() {
    for (std::uint32_t v = 0; v < n_; ++v)
      if (inside_[v]) toggle(v);
  }

  bool contains(std::uint32_t v) const { return inside_[v] != 0; }
  std::size_t size() const { return size_; }
  ExpansionRatio ratio() const { return {boundary_, size_, n_}; }

  std::vector<std::uint32_t> members() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; v < n_; ++v)
      if (inside_[v]) out.push_back(v);
    return out;
  }

  /// Greedy single-vertex toggles while they strictly lower the ratio.
  /// Returns the number of subsets evaluated.
  std::uint64_t descend(int max_passes) {
    std::uint64_t evaluated = 0;
    ExpansionRatio current = ratio();
    bool improved = true;
    for (int pass = 0; pass < max_passes && improved; ++pass) {
      improved = false;
      for (std::uint32_t v = 0; v < n_; ++v) {
        if ((inside_[v] && size_ == 1) || (!inside_[v] && size_ + 1 == n_)) continue;
        toggle(v);
        ++evaluated;
        const ExpansionRatio r = ratio();
        if (r < current) {
          current = r;
          improved = true;
        } else {
          toggle(v);
        }
      }
    }
    return evaluated;
  }

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<std::uint32_t> nbr_;
  std::vector<std::uint32_t> count_;
  std::vector<std::uint8_t> inside_;
  std::uint64_t boundary_ = 0;
  std::uint64_t size_ = 0;
};

}  // namespace detail

inline constexpr int kDescentPasses = 8;
/// Graphs up to this size get a greedy descent from every random sample;
/// larger ones only from the best sample.
inline constexpr std::size_t kDescendAllLimit = 4096;

/// Upper bound on the exact constant from sampled subsets: every prefix of
/// the BFS order from the identity (these include all balls), plus `trials`
/// uniformly random subsets whose sizes are stratified over 1..n-1, each
/// stratum drawing from its own split of `seed`. Samples are improved by
/// greedy single-vertex toggles; every set evaluated is a genuine subset,
/// so the result never undercuts the exact constant.
inline ExpansionReport expansion_sampled(const CayleyGraph& g, std::size_t trials, std::uint64_t seed) {
  const std::size_t n = g.vertex_count();
  if (trials < 1) throw Error("expansion_sampled: trials must be >= 1");
  if (n < 2) throw Error("expansion_sampled: graph needs at least two vertices");

  ExpansionReport rep;
  rep.mode = ExpansionMode::sampled;
  rep.seed = seed;
  bool have = false;
  auto offer = [&](const ExpansionRatio& r) {
    ++rep.subsets_examined;
    if (!have || r < rep.best) {
      rep.best = r;
      have = true;
      return true;
    }
    return false;
  };

  detail::SubsetState state(g);

  // BFS order from vertex 0; prefixes grow one vertex at a time.
  std::vector<std::uint32_t> order;
  order.reserve(n);
  {
    std::vector<std::uint8_t> seen(n, 0);
    order.push_back(0);
    seen[0] = 1;
    for (std::size_t h = 0; h < order.size(); ++h)
      for (auto u : g.neighbors(order[h]))
        if (!seen[u]) {
          seen[u] = 1;
          order.push_back(u);
        }
    std::size_t best_prefix = 0;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      state.toggle(order[i]);
      if (offer(state.ratio())) best_prefix = i + 1;
    }
    rep.witness_set.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_prefix));
  }

  const bool descend_all = n <= kDescendAllLimit;
  const SplitMix64 root(seed);
  const std::size_t strata = std::min<std::size_t>(trials, n - 1);
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0U);
  std::vector<std::uint8_t> mark(n, 0);
  std::vector<SplitMix64> streams;
  streams.reserve(strata);
  for (std::size_t s = 0; s < strata; ++s) streams.push_back(root.split(s));
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t s = t % strata;
    // Stratum s covers sizes [lo, hi) of 1..n-1.
    const std::uint64_t lo = 1 + s * (n - 1) / strata, hi = 1 + (s + 1) * (n - 1) / strata;
    SplitMix64& rng = streams[s];
    const std::uint64_t size = lo + rng.below(hi - lo);
    for (std::uint64_t i = 0; i < size; ++i) std::swap(perm[i], perm[i + rng.below(n - i)]);
    const std::span<const std::uint32_t> subset(perm.data(), size);
    if (descend_all) {
      state.assign(subset);
      rep.subsets_examined += state.descend(kDescentPasses);
      if (offer(state.ratio())) rep.witness_set = state.members();
    } else if (offer({detail::vertex_boundary(g, subset, mark), size, n})) {
      rep.witness_set.assign(subset.begin(), subset.end());
    }
  }

  state.assign(rep.witness_set);
  rep.subsets_examined += state.descend(kDescentPasses);
  if (offer(state.ratio())) rep.witness_set = state.members();
  std::sort(rep.witness_set.begin(), rep.witness_set.end());
  return rep;
}

struct MonotonicityReport {
  bool holds = true;
  std::uint64_t subsets_checked = 0;
  /// Element ranks of a subset whose ratio dropped, when one was found.
  std::vector<std::uint64_t> counterexample;
};

/// Checks ratio(big, A) >= ratio(small, A) pointwise for `trials` seeded
/// subsets A (stratified sizes), where both graphs live on the same group
/// elements and big's labels extend small's. Subsets are chosen as element
/// sets, so the two graphs' vertex numberings need not agree.
inline MonotonicityReport check_edge_monotonicity(const CayleyGraph& small, const CayleyGraph& big,
                                                  std::size_t trials, std::uint64_t seed) {
  if (small.group_desc() != big.group_desc() || small.vertex_count() != big.vertex_count())
    throw VertexSetMismatch("graphs live on different vertex sets: " + small.group_desc() + " vs " +
                            big.group_desc());
  const std::size_t n = small.vertex_count();
  std::vector<std::uint32_t> to_big(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    const std::uint32_t w = big.vertex_of_rank(small.element_ranks()[v]);
    if (w == CayleyGraph::kNone) throw VertexSetMismatch("graphs cover different group elements");
    to_big[v] = w;
  }
  if (n < 2) return {};

  MonotonicityReport rep;
  const SplitMix64 root(seed);
  const std::size_t strata = std::min<std::size_t>(std::max<std::size_t>(trials, 1), n - 1);
  std::vector<std::uint32_t> perm(n), mapped;
  std::iota(perm.begin(), perm.end(), 0U);
  std::vector<std::uint8_t> mark_small(n, 0), mark_big(n, 0);
  std::vector<SplitMix64> streams;
  for (std::size_t s = 0; s < strata; ++s) streams.push_back(root.split(s));
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t s = t % strata;
    const std::uint64_t lo = 1 + s * (n - 1) / strata, hi = 1 + (s + 1) * (n - 1) / strata;
    SplitMix64& rng = streams[s];
    const std::uint64_t size = lo + rng.below(hi - lo);
    for (std::uint64_t i = 0; i < size; ++i) std::swap(perm[i], perm[i + rng.below(n - i)]);
    const std::span<const std::uint32_t> subset(perm.data(), size);
    mapped.clear();
    for (auto v : subset) mapped.push_back(to_big[v]);
    const ExpansionRatio rs{detail::vertex_boundary(small, subset, mark_small), size, n};
    const ExpansionRatio rb{detail::vertex_boundary(big, mapped, mark_big), size, n};
    ++rep.subsets_checked;
    if (rb < rs) {
      rep.holds = false;
      for (auto v : subset) rep.counterexample.push_back(small.element_ranks()[v]);
      std::sort(rep.counterexample.begin(), rep.counterexample.end());
      break;
    }
  }
  return rep;
}

}  // namespace taulab
