#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "taulab/report.hpp"
#include "taulab/verify.hpp"

using namespace taulab;

namespace {

GeneratorSystem toy_sqrt2() {
  auto f = NumberField::create({-2, 0, 1});
  const auto one = FieldElement::one(f), zero = FieldElement::zero(f), t = FieldElement::generator(f);
  return GeneratorSystem::create(Mat2K(one, t, zero, one), Mat2K(one, zero, t, one));
}

ExperimentOptions quick(std::uint32_t p_min, std::uint32_t p_max) {
  ExperimentOptions opt;
  opt.p_min = p_min;
  opt.p_max = p_max;
  opt.mu_r_max = 0;
  opt.relation_check_depth = 6;
  return opt;
}

std::vector<std::uint32_t> primes_of(const ExperimentReport& rep) {
  std::vector<std::uint32_t> out;
  for (const auto& r : rep.rows) out.push_back(r.p);
  return out;
}

}  // namespace

TEST(GirthExperiment, SanovUpToSixtyOne) {
  const auto gs = GeneratorSystem::sanov();
  const auto rep = run_girth_experiment(gs, quick(3, 61));
  EXPECT_EQ(primes_of(rep), (std::vector<std::uint32_t>{3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61}));
  for (const auto& r : rep.rows) {
    ASSERT_TRUE(r.analysed());
    EXPECT_TRUE(r.surjective) << r.p;
    EXPECT_EQ(r.vertex_count, static_cast<std::size_t>(r.p) * (r.p * r.p - 1));
    EXPECT_TRUE(r.girth_ok) << r.p;
    EXPECT_NEAR(r.bound, std::log(r.p) / std::log(6.0), 1e-9);
    EXPECT_GT(r.gap, 0);
    EXPECT_TRUE(r.spectral_converged) << r.p;
    EXPECT_GT(r.c_sampled, 0);
  }
  EXPECT_TRUE(rep.all_assertions_pass());
  ASSERT_TRUE(rep.min_gap.has_value());
  EXPECT_NEAR(*rep.min_normalized_gap, *rep.min_gap / 4, 1e-15);

  // Weak growth: the larger half of the range reaches at least the girth of the smaller half.
  const std::size_t mid = rep.rows.size() / 2;
  std::size_t low = 0, high = 0;
  for (std::size_t i = 0; i < mid; ++i) low = std::max(low, rep.rows[i].girth);
  for (std::size_t i = mid; i < rep.rows.size(); ++i) high = std::max(high, rep.rows[i].girth);
  EXPECT_GE(high, low);
}

TEST(GirthExperiment, JobCountDoesNotChangeRows) {
  const auto gs = GeneratorSystem::sanov();
  auto opt = quick(3, 40);
  const auto serial = run_girth_experiment(gs, opt);
  opt.jobs = 4;
  const auto parallel = run_girth_experiment(gs, opt);
  EXPECT_EQ(report_csv(serial), report_csv(parallel));
}

TEST(GirthExperiment, Sqrt2ToyRowsOnlyForSplitPrimes) {
  auto opt = quick(3, 50);
  opt.enforce_freeness = false;
  opt.relation_check_depth = 8;
  const auto rep = run_girth_experiment(toy_sqrt2(), opt);
  EXPECT_EQ(primes_of(rep), (std::vector<std::uint32_t>{7, 17, 23, 31, 41, 47}));
  EXPECT_FALSE(rep.relations.free_up_to_length());
  EXPECT_FALSE(rep.notes.empty());
}

TEST(GirthExperiment, FreenessFailureAborts) {
  auto opt = quick(3, 50);
  opt.relation_check_depth = 8;
  const auto rep = run_girth_experiment(toy_sqrt2(), opt);
  EXPECT_FALSE(rep.freeness_ok);
  EXPECT_TRUE(rep.rows.empty());
  EXPECT_FALSE(rep.all_assertions_pass());
}

TEST(GirthExperiment, EmptyAdmissibleSet) {
  auto opt = quick(3, 4);
  opt.enforce_freeness = false;
  const auto rep = run_girth_experiment(toy_sqrt2(), opt);
  EXPECT_TRUE(rep.rows.empty());
  EXPECT_TRUE(rep.all_assertions_pass());
  EXPECT_EQ(report_csv(rep), std::string(kCsvHeader) + "\n");
}

TEST(GirthExperiment, RamifiedPrimeGetsExcludedRow) {
  auto f = NumberField::create({-1, -1, 0, 1});
  const auto one = FieldElement::one(f), zero = FieldElement::zero(f);
  const auto a = Mat2K(one, FieldElement(f, {0, 2}), zero, one);
  const auto b = Mat2K(one, zero, FieldElement(f, {0, 0, 2}), one);
  auto opt = quick(20, 30);
  opt.relation_check_depth = 4;
  const auto rep = run_girth_experiment(GeneratorSystem::create(a, b), opt);
  ASSERT_EQ(rep.rows.size(), 1u);
  EXPECT_EQ(rep.rows[0].p, 23u);
  EXPECT_EQ(rep.rows[0].excluded_reason, "divides discriminant");
}

TEST(GirthExperiment, DenominatorPrimeGetsExcludedRow) {
  const auto Q = NumberField::rationals();
  const auto gs =
      GeneratorSystem::create(Mat2K::rational(Q, 1, Rational(4, 3), 0, 1), Mat2K::rational(Q, 1, 0, Rational(4, 3), 1));
  auto opt = quick(3, 7);
  opt.enforce_freeness = false;
  const auto rep = run_girth_experiment(gs, opt);
  EXPECT_EQ(primes_of(rep), (std::vector<std::uint32_t>{3, 5, 7}));
  EXPECT_EQ(rep.rows[0].excluded_reason, "divides generator denominator");
  EXPECT_FALSE(rep.rows[0].root.has_value());
  for (std::size_t i = 1; i < 3; ++i) {
    EXPECT_TRUE(rep.rows[i].analysed());
    EXPECT_TRUE(rep.rows[i].surjective) << rep.rows[i].p;
  }
}

TEST(MuGrowth, SanovPasses) {
  const auto rep = run_mu_growth_check(GeneratorSystem::sanov(), 15, 300, 7);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.violations, 0u);
  EXPECT_EQ(rep.words_checked, 15u * 300u);
  EXPECT_LE(rep.worst_entry_ratio, 1.0);
}

TEST(MuGrowth, LengthOneRatioIsOneHalf) {
  const auto rep = run_mu_growth_check(GeneratorSystem::sanov(), 1, 100, 1);
  EXPECT_DOUBLE_EQ(rep.worst_entry_ratio, 0.5);
}

TEST(MuGrowth, WordAbRatio) {
  const auto gs = GeneratorSystem::sanov();
  const auto c = eval_word_cleared(ReducedWord::parse("ab"), gs);
  double worst = 0;
  for (const auto& e : c.star.entries()) worst = std::max(worst, house(e).value);
  EXPECT_DOUBLE_EQ(worst / std::pow(2 * gs.M().value, 2), 0.3125);
}

TEST(MuGrowth, Sqrt2ToyPairPasses) {
  EXPECT_TRUE(run_mu_growth_check(toy_sqrt2(), 12, 100, 3).pass);
}

TEST(NestedCheck, Examples) {
  const auto gs = GeneratorSystem::sanov();
  const auto r35 = run_nested_check(gs, {3, 5}, 8'000'000);
  ASSERT_EQ(r35.levels.size(), 2u);
  EXPECT_EQ(r35.levels[0].closure_size, 24u);
  EXPECT_EQ(r35.levels[1].closure_size, 2880u);
  EXPECT_TRUE(r35.all_surjective());

  const auto r57 = run_nested_check(gs, {5, 7}, 8'000'000);
  EXPECT_EQ(r57.levels.back().closure_size, 40320u);
  EXPECT_EQ(r57.levels.back().group_order, 40320u);

  const auto single = run_nested_check(gs, {11}, 8'000'000);
  ASSERT_EQ(single.levels.size(), 1u);
  EXPECT_TRUE(single.levels[0].surjective());
}

TEST(NestedCheck, BudgetTruncates) {
  const auto rep = run_nested_check(GeneratorSystem::sanov(), {3, 5, 7}, 10'000);
  EXPECT_EQ(rep.levels.size(), 2u);
  EXPECT_TRUE(rep.truncated.has_value());
}

TEST(NestedCheck, InertPrimeRejected) {
  EXPECT_THROW(run_nested_check(toy_sqrt2(), {3}, 1000), InvalidIdeal);
}
