#include <gtest/gtest.h>

#include <set>

#include "taulab/groups.hpp"
#include "taulab/matgroup.hpp"
#include "taulab/random.hpp"
#include "taulab/reduction.hpp"

using namespace taulab;

namespace {

FieldPtr Q() { return NumberField::rationals(); }
FieldPtr sqrt2() { return NumberField::create({-2, 0, 1}); }

GeneratorSystem toy_sqrt2() {
  auto f = sqrt2();
  const auto one = FieldElement::one(f), zero = FieldElement::zero(f), t = FieldElement::generator(f);
  return GeneratorSystem::create(Mat2K(one, t, zero, one), Mat2K(one, zero, t, one));
}

ModpMatrix mm(std::uint32_t p, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) {
  return {p, {a, b, c, d}};
}

std::vector<std::uint32_t> split_list(const SplitScan& s) {
  std::vector<std::uint32_t> out;
  for (const auto& sp : s.split) out.push_back(sp.p);
  return out;
}

}  // namespace

TEST(SplitPrimes, RationalFieldSplitsEverywhere) {
  const auto s = split_primes(*Q(), GeneratorSystem::sanov(), 3, 20);
  EXPECT_EQ(split_list(s), (std::vector<std::uint32_t>{3, 5, 7, 11, 13, 17, 19}));
  for (const auto& sp : s.split) EXPECT_EQ(sp.roots, std::vector<std::uint32_t>{0});
}

TEST(SplitPrimes, Sqrt2) {
  const auto gs = toy_sqrt2();
  const auto s = split_primes(*gs.field(), gs, 3, 20);
  ASSERT_EQ(split_list(s), (std::vector<std::uint32_t>{7, 17}));
  EXPECT_EQ(s.split[0].roots, (std::vector<std::uint32_t>{3, 4}));
  EXPECT_EQ(s.split[1].roots, (std::vector<std::uint32_t>{6, 11}));
  EXPECT_EQ(split_list(split_primes(*gs.field(), gs, 3, 50)),
            (std::vector<std::uint32_t>{7, 17, 23, 31, 41, 47}));
}

TEST(SplitPrimes, Sqrt2ThreeIsExcluded) {
  const auto gs = toy_sqrt2();
  const auto s = split_primes(*gs.field(), gs, 3, 3);
  EXPECT_TRUE(s.split.empty());
  ASSERT_EQ(s.excluded.size(), 1u);
  EXPECT_EQ(s.excluded[0].p, 3u);
  EXPECT_THROW(PrimeSite::create(gs.field(), 3, 0), InvalidIdeal);
}

TEST(SplitPrimes, RootCountMatchesDegreeOracle) {
  // Independent count of roots of x^3 - x - 1 by evaluation.
  auto f = NumberField::create({-1, -1, 0, 1});
  const auto gs = GeneratorSystem::unchecked(Mat2K::identity(f), Mat2K::identity(f));
  const auto s = split_primes(*f, gs, 3, 400);
  std::set<std::uint32_t> split;
  for (const auto& sp : s.split) {
    EXPECT_EQ(sp.roots.size(), 3u);
    split.insert(sp.p);
  }
  for (std::uint32_t p = 3; p <= 400; ++p) {
    if (!is_prime(p) || p == 23) continue;
    int roots = 0;
    for (std::uint64_t x = 0; x < p; ++x) roots += (x * x % p * x + 2 * p - x - 1) % p == 0;
    EXPECT_EQ(split.count(p) == 1, roots == 3) << p;
  }
  EXPECT_FALSE(split.count(23));
  EXPECT_THROW(split_primes(*f, gs, 10, 5), EmptyRange);
}

TEST(ReduceMod, Examples) {
  const auto site5 = PrimeSite::create(Q(), 5, 0);
  EXPECT_EQ(reduce_mod(site5, GeneratorSystem::sanov().a()), mm(5, 1, 2, 0, 1));
  EXPECT_EQ(reduce_mod(site5, Mat2K::rational(Q(), Rational(1, 2), 0, 0, 2)), mm(5, 3, 0, 0, 2));

  const auto gs = toy_sqrt2();
  const auto site7 = PrimeSite::create(gs.field(), 7, 3);
  EXPECT_EQ(reduce_mod(site7, gs.a()), mm(7, 1, 3, 0, 1));
  EXPECT_THROW(reduce_mod(site5, Mat2K::rational(Q(), Rational(1, 5), 0, 0, 5)), NonInvertibleDenominator);
}

TEST(ReduceMod, HomomorphismAndDeterminant) {
  const auto gs = toy_sqrt2();
  SplitMix64 rng(3);
  for (std::uint32_t p : {7u, 17u, 23u}) {
    for (auto root : detail::roots_mod(*gs.field(), p)) {
      const auto site = PrimeSite::create(gs.field(), p, root);
      for (int i = 0; i < 50; ++i) {
        const auto x = eval_word(ReducedWord::random(1 + rng.below(8), rng), gs);
        const auto y = eval_word(ReducedWord::random(1 + rng.below(8), rng), gs);
        const auto rx = reduce_mod(site, x);
        EXPECT_TRUE(rx.is_unimodular());
        EXPECT_EQ(reduce_mod(site, mat_mul(x, y)), modp_mul(rx, reduce_mod(site, y)));
      }
    }
  }
}

TEST(ReduceGenerators, Examples) {
  const auto gs = GeneratorSystem::sanov();
  for (std::uint32_t p : {3u, 5u}) {
    const auto r = reduce_generators(PrimeSite::create(Q(), p, 0), gs);
    EXPECT_FALSE(r.degenerate);
    std::set<std::array<std::uint32_t, 4>> distinct;
    for (const auto& m : r.images) distinct.insert(m.entries);
    EXPECT_EQ(distinct.size(), 4u) << p;
  }
  const auto r3 = reduce_generators(PrimeSite::create(Q(), 3, 0), gs);
  EXPECT_EQ(r3.images[index(Letter::A)], mm(3, 1, 1, 0, 1));

  const auto id = GeneratorSystem::unchecked(Mat2K::identity(Q()), Mat2K::identity(Q()));
  EXPECT_TRUE(reduce_generators(PrimeSite::create(Q(), 5, 0), id).degenerate);
}

TEST(CrtReduce, Examples) {
  const IdealProduct ideal({PrimeSite::create(Q(), 3, 0), PrimeSite::create(Q(), 5, 0)});
  const auto t = crt_reduce(ideal, GeneratorSystem::sanov().a());
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0], mm(3, 1, 2, 0, 1));
  EXPECT_EQ(t[1], mm(5, 1, 2, 0, 1));
  EXPECT_TRUE(crt_reduce(IdealProduct(std::vector<PrimeSite>{}), GeneratorSystem::sanov().a()).empty());
  EXPECT_THROW(IdealProduct({PrimeSite::create(Q(), 3, 0), PrimeSite::create(Q(), 3, 0)}), InvalidIdeal);
}

TEST(SL2Group, OrderMatchesBruteForceEnumeration) {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    std::uint64_t count = 0;
    const SL2Group g(p);
    for (std::uint32_t a = 0; a < p; ++a)
      for (std::uint32_t b = 0; b < p; ++b)
        for (std::uint32_t c = 0; c < p; ++c)
          for (std::uint32_t d = 0; d < p; ++d)
            if ((a * d + p * p - b * c) % p == 1) {
              ++count;
              const Residues x{a, b, c, d};
              EXPECT_EQ(g.unrank(g.rank(x)), x);
              EXPECT_LT(g.rank(x), g.order());
            }
    EXPECT_EQ(count, g.order());
  }
  EXPECT_EQ(sl2_order(3), 24u);
  EXPECT_EQ(sl2_order(5), 120u);
  EXPECT_EQ(sl2_order(7), 336u);
}
