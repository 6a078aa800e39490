#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "taulab/cayley_graph.hpp"
#include "taulab/expansion.hpp"
#include "taulab/girth.hpp"
#include "taulab/matgroup.hpp"
#include "taulab/reduction.hpp"
#include "taulab/spectral.hpp"

using namespace taulab;

namespace {

ReducedGenerators sanov_mod(std::uint32_t p) {
  return reduce_generators(PrimeSite::create(NumberField::rationals(), p, 0), GeneratorSystem::sanov());
}

CayleyGraph sanov_graph(std::uint32_t p) { return build_graph(sanov_mod(p), 1u << 24); }

// Regression values from the non-backtracking BFS, cross-checked below by
// exhaustive word evaluation where g <= 12.
const std::map<std::uint32_t, std::size_t> kSanovGirth = {
    {3, 3},   {5, 5},   {7, 6},   {11, 9},  {13, 10}, {17, 10}, {19, 10}, {23, 12},
    {29, 10}, {31, 14}, {37, 14}, {41, 10}, {43, 14}, {47, 14}, {53, 14}, {59, 14}, {61, 16}};

}  // namespace

TEST(CayleyGraph, SanovSurjectsSmallPrimes) {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const auto g = sanov_graph(p);
    // Brute-force count of det-1 matrices mod p.
    std::uint64_t det1 = 0;
    for (std::uint32_t a = 0; a < p; ++a)
      for (std::uint32_t b = 0; b < p; ++b)
        for (std::uint32_t c = 0; c < p; ++c)
          for (std::uint32_t d = 0; d < p; ++d) det1 += (a * d + p * p - b * c) % p == 1;
    EXPECT_EQ(g.vertex_count(), det1) << p;
    EXPECT_TRUE(g.surjective());
    std::set<std::uint64_t> ranks(g.element_ranks().begin(), g.element_ranks().end());
    EXPECT_EQ(ranks.size(), det1);
  }
}

TEST(CayleyGraph, RegularityAndInverseSymmetry) {
  const auto g = sanov_graph(7);
  EXPECT_EQ(g.k_reg(), 4u);
  for (std::uint32_t u = 0; u < g.vertex_count(); ++u)
    for (std::size_t l = 0; l < g.k_reg(); ++l) {
      const auto v = g.neighbor(u, l);
      ASSERT_LT(v, g.vertex_count());
      EXPECT_EQ(g.neighbor(v, g.inverse_label(l)), u);
    }
}

TEST(CayleyGraph, ProductGroupClosure) {
  const auto gs = GeneratorSystem::sanov();
  const IdealProduct ideal({PrimeSite::create(gs.field(), 3, 0), PrimeSite::create(gs.field(), 5, 0)});
  std::array<std::vector<ModpMatrix>, 4> images;
  for (Letter l : kLetters) images[index(l)] = crt_reduce(ideal, gs.matrix(l));
  const auto g = build_graph(SL2ProductGroup(ideal.primes()), labeled(images), 1u << 20);
  EXPECT_EQ(g.vertex_count(), 2880u);
  EXPECT_TRUE(g.surjective());
}

TEST(CayleyGraph, BudgetAndEdgeList) {
  EXPECT_THROW(build_graph(sanov_mod(5), 100), CapacityExceeded);
  std::ostringstream out;
  const auto g = sanov_graph(5);
  EXPECT_EQ(g.write_edge_list(out), 240u);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 240);
}

TEST(Girth, FourCycle) {
  const auto g = diagnostic::cycle(4);
  const auto r = girth(g);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.girth, 4u);
  EXPECT_EQ(r.witness_string(g), "aaaa");
}

TEST(Girth, SingleEdgeHasNoCycle) { EXPECT_FALSE(girth(diagnostic::k2()).found); }

TEST(Girth, SanovPinnedValuesAndWitnesses) {
  const auto gs = GeneratorSystem::sanov();
  for (const auto& [p, want] : kSanovGirth) {
    const auto g = sanov_graph(p);
    const auto r = girth(g);
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.girth, want) << "p = " << p;
    EXPECT_GE(static_cast<double>(r.girth), gs.C() * std::log(static_cast<double>(p)));
    // Witness is a reduced word whose reduction is the identity.
    const auto w = ReducedWord::parse(r.witness_string(g));
    const auto site = PrimeSite::create(gs.field(), p, 0);
    EXPECT_EQ(reduce_mod(site, eval_word(w, gs)), (ModpMatrix{p, {1, 0, 0, 1}})) << p;
  }
}

TEST(Girth, NoShorterWordReducesToIdentity) {
  for (const auto& [p, g] : kSanovGirth) {
    if (g > 12) continue;
    const auto r = sanov_mod(p);
    const ModpMatrix id{p, {1, 0, 0, 1}};
    std::size_t shortest = 0;
    enumerate_reduced_words(
        id, g, [&](const ModpMatrix& m, Letter l) { return modp_mul(m, r.images[index(l)]); },
        [&](const ModpMatrix& m, const std::vector<Letter>& path) {
          if (m == id && shortest == 0) shortest = path.size();
          return true;
        });
    EXPECT_EQ(shortest, g) << "p = " << p;
  }
}

TEST(Spectral, FourCycleAndK4) {
  const auto c4 = spectral_gap(diagnostic::cycle(4));
  EXPECT_NEAR(c4.lambda2, 0.0, 1e-9);
  EXPECT_NEAR(c4.gap, 2.0, 1e-9);
  EXPECT_NEAR(c4.lambda_min, -2.0, 1e-9);
  const auto k4 = spectral_gap(diagnostic::k4());
  EXPECT_NEAR(k4.lambda2, -1.0, 1e-9);
  EXPECT_NEAR(k4.gap, 4.0, 1e-9);
}

TEST(Spectral, LanczosAgreesWithDenseOnSmallGraphs) {
  std::vector<CayleyGraph> graphs = {diagnostic::cycle(4), diagnostic::k4(), sanov_graph(3), sanov_graph(5),
                                     sanov_graph(7)};
  for (std::uint32_t m = 5; m <= 40; m += 7) graphs.push_back(diagnostic::cycle(m));
  for (const auto& g : graphs) {
    const auto rep = spectral_gap(g);
    ASSERT_TRUE(rep.dense_lambda2.has_value());
    EXPECT_TRUE(rep.converged);
    EXPECT_NEAR(rep.lambda2, *rep.dense_lambda2, 1e-6) << g.group_desc();
    EXPECT_NEAR(rep.lambda_min, *rep.dense_lambda_min, 1e-6) << g.group_desc();
  }
  // Cycle oracle: second eigenvalue of C_m is 2 cos(2 pi / m).
  for (std::uint32_t m = 5; m <= 40; m += 7)
    EXPECT_NEAR(spectral_gap(diagnostic::cycle(m)).lambda2, 2 * std::cos(2 * M_PI / m), 1e-6);
}

TEST(Spectral, SanovModFiveHasPositiveGap) {
  const auto rep = spectral_gap(sanov_graph(5));
  EXPECT_LT(rep.lambda2, 4.0);
  EXPECT_GT(rep.gap, 0.0);
}

TEST(Expansion, ExactDiagnostics) {
  const auto c4 = expansion_exact(diagnostic::cycle(4));
  EXPECT_EQ(c4.best.fraction(), (std::pair<std::uint64_t, std::uint64_t>{4, 3}));
  EXPECT_EQ(c4.subsets_examined, 14u);
  EXPECT_EQ(c4.witness_set.size(), 3u);
  const auto k2 = expansion_exact(diagnostic::k2());
  EXPECT_DOUBLE_EQ(k2.c_value(), 2.0);
  EXPECT_THROW(expansion_exact(sanov_graph(5)), TooLarge);
}

TEST(Expansion, ExactMatchesNaiveScanOnSmallCycles) {
  for (std::uint32_t m = 3; m <= 10; ++m) {
    const auto g = diagnostic::cycle(m);
    ExpansionRatio best{1, 0, m};
    bool have = false;
    for (std::uint32_t mask = 1; mask + 1 < (1u << m); ++mask) {
      std::vector<std::uint32_t> s;
      for (std::uint32_t v = 0; v < m; ++v)
        if (mask >> v & 1) s.push_back(v);
      const auto r = expansion_ratio(g, s);
      if (!have || r < best) best = r, have = true;
    }
    EXPECT_DOUBLE_EQ(expansion_exact(g).c_value(), best.value()) << m;
  }
}

TEST(Expansion, SanovModThreeExactIsOne) {
  const auto rep = expansion_exact(sanov_graph(3));
  EXPECT_EQ(rep.best.fraction(), (std::pair<std::uint64_t, std::uint64_t>{1, 1}));
  EXPECT_EQ(rep.witness_set.size(), 12u);
}

TEST(Expansion, SampledNeverBelowExact) {
  std::vector<CayleyGraph> graphs = {diagnostic::cycle(4), diagnostic::k4(), diagnostic::k2(), sanov_graph(3)};
  for (std::uint32_t m = 5; m <= 12; ++m) graphs.push_back(diagnostic::cycle(m));
  for (const auto& g : graphs) {
    const double exact = expansion_exact(g).c_value();
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const double sampled = expansion_sampled(g, 100, seed).c_value();
      EXPECT_GE(sampled, exact) << g.group_desc();
    }
  }
  EXPECT_DOUBLE_EQ(expansion_sampled(diagnostic::cycle(4), 100, 9).c_value(), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(expansion_sampled(sanov_graph(3), 1000, 1).c_value(), 1.0);
}

TEST(Expansion, SampledIsDeterministic) {
  const auto g = sanov_graph(11);
  const auto x = expansion_sampled(g, 20, 42), y = expansion_sampled(g, 20, 42);
  EXPECT_EQ(x.best.fraction(), y.best.fraction());
  EXPECT_EQ(x.witness_set, y.witness_set);
}

TEST(Expansion, CheegerDirectionConsistency) {
  for (const auto& g : {diagnostic::cycle(6), diagnostic::k4(), sanov_graph(5)}) {
    const double c = expansion_sampled(g, 50, 1).c_value();
    const double gap = spectral_gap(g).gap;
    EXPECT_EQ(c > 0, gap > 1e-9);
  }
}

TEST(Expansion, EdgeMonotonicityWithExtraGenerator) {
  const auto r = sanov_mod(5);
  const SL2Group group(5);
  const auto small = build_graph(r, 1000);
  LabeledGenerators<Residues> gens = labeled(r);
  gens.elements.push_back({1, 1, 0, 1});
  gens.elements.push_back(group.inverse({1, 1, 0, 1}));
  gens.inverse_of.insert(gens.inverse_of.end(), {5, 4});
  gens.names.insert(gens.names.end(), {"t", "T"});
  const auto big = build_graph(group, gens, 1000);
  const auto rep = check_edge_monotonicity(small, big, 10000, 7);
  EXPECT_TRUE(rep.holds);
  EXPECT_EQ(rep.subsets_checked, 10000u);
  EXPECT_TRUE(check_edge_monotonicity(small, small, 100, 7).holds);
  EXPECT_THROW(check_edge_monotonicity(small, sanov_graph(7), 10, 1), VertexSetMismatch);
}
