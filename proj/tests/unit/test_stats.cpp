#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/fixtures.hpp"
#include "wattmark/errors.hpp"
#include "wattmark/stats/analysis.hpp"
#include "wattmark/stats/distributions.hpp"

namespace wattmark::stats {
namespace {

using testing::rel_diff;
using testing::stats_fixture;

const nlohmann::json& reference() {
  static const nlohmann::json ref = testing::stats_reference();
  return ref;
}

ConditionMatrix fixture_matrix(const std::string& name) {
  return read_matrix_csv(stats_fixture(name + ".csv"));
}

// Shapiro-Wilk ------------------------------------------------------------

TEST(ShapiroWilk, RoystonPublishedExample) {
  // Worked example shipped with AS R94: W = .83467, p = .000914.
  const std::vector<double> x{.139, .157, .175, .256, .344, .413, .503, .577, .614,
                              .655, .954, 1.392, 1.557, 1.648, 1.690, 1.994, 2.174,
                              2.206, 3.245, 3.510, 3.571, 4.354, 4.980, 6.084, 8.351};
  const auto r = shapiro_wilk(x);
  EXPECT_NEAR(r.w, 0.83467, 5e-6);
  EXPECT_NEAR(r.p, 0.000914, 5e-6);
  EXPECT_FALSE(r.normal);
}

TEST(ShapiroWilk, MatchesReferenceOnNormalFixture) {
  const auto x = testing::read_sample_csv(stats_fixture("sw_normal_50.csv"));
  ASSERT_EQ(x.size(), 50u);
  const auto& ref = reference()["shapiro"]["sw_normal_50"];
  const auto r = shapiro_wilk(x);
  EXPECT_NEAR(r.w, ref["w"].get<double>(), 1e-4);
  EXPECT_NEAR(r.p, ref["p"].get<double>(), 1e-4);
  EXPECT_TRUE(r.normal);
}

TEST(ShapiroWilk, SkewedFixtureIsNonNormal) {
  const auto x = testing::read_sample_csv(stats_fixture("sw_exponential_50.csv"));
  const auto& ref = reference()["shapiro"]["sw_exponential_50"];
  const auto r = shapiro_wilk(x);
  EXPECT_NEAR(r.w, ref["w"].get<double>(), 1e-4);
  EXPECT_NEAR(r.p, ref["p"].get<double>(), 1e-4);
  EXPECT_FALSE(r.normal);
}

TEST(ShapiroWilk, ConstantSampleIsDegenerate) {
  const std::vector<double> x{5, 5, 5, 5};
  EXPECT_THROW(shapiro_wilk(x), DegenerateError);
}

TEST(ShapiroWilk, RejectsTooFewAndTooMany) {
  EXPECT_THROW(shapiro_wilk(std::vector<double>{1.0, 2.0}), TooFewSamplesError);
  EXPECT_THROW(shapiro_wilk(std::vector<double>(5001, 1.0)), ContractViolation);
}

TEST(ShapiroWilk, ExactForThreeValues) {
  // Equally spaced triple is perfectly linear in the normal scores: W = 1, p = 1.
  const auto r = shapiro_wilk(std::vector<double>{1.0, 2.0, 3.0});
  EXPECT_NEAR(r.w, 1.0, 1e-12);
  EXPECT_NEAR(r.p, 1.0, 1e-9);
  const auto skew = shapiro_wilk(std::vector<double>{0.0, 0.01, 1.0});
  EXPECT_LT(skew.w, 0.8);
  EXPECT_GE(skew.p, 0.0);
}

TEST(ShapiroWilk, InvariantUnderAffineMaps) {
  std::mt19937_64 rng(7);
  std::gamma_distribution<double> g(2.0, 1.0);
  std::vector<double> x(40);
  for (auto& v : x) v = g(rng);
  const auto base = shapiro_wilk(x);
  for (auto& v : x) v = 1e3 * v - 17.0;
  const auto moved = shapiro_wilk(x);
  EXPECT_LT(rel_diff(moved.w, base.w), 1e-12);
  EXPECT_LT(rel_diff(moved.p, base.p), 1e-9);
}

// Sphericity, epsilon, ANOVA against the committed reference ---------------

class FixtureMatrices : public ::testing::TestWithParam<std::string> {};

TEST_P(FixtureMatrices, MatchReferenceImplementation) {
  const auto name = GetParam();
  const auto m = fixture_matrix(name);
  const auto& ref = reference()["matrices"][name];

  const auto aov = rm_anova(m);
  EXPECT_EQ(aov.df_num, ref["anova"]["df_num"].get<int>());
  EXPECT_EQ(aov.df_den, ref["anova"]["df_den"].get<int>());
  EXPECT_LT(rel_diff(aov.f, ref["anova"]["f"]), 1e-9);
  EXPECT_LT(rel_diff(aov.eta_g_sq, ref["anova"]["eta_g_sq"]), 1e-9);
  EXPECT_LT(rel_diff(aov.ss_conditions, ref["anova"]["ss_conditions"]), 1e-9);
  EXPECT_LT(rel_diff(aov.ss_error, ref["anova"]["ss_error"]), 1e-9);
  EXPECT_LT(rel_diff(aov.p, ref["anova"]["p"]), 1e-6);
  EXPECT_LT(rel_diff(aov.gg_epsilon, ref["anova"]["gg_epsilon"]), 1e-9);
  EXPECT_LT(rel_diff(aov.p_gg, ref["anova"]["p_gg"]), 1e-6);

  const auto sph = mauchly(m);
  EXPECT_EQ(sph.df, ref["sphericity"]["df"].get<int>());
  EXPECT_LT(rel_diff(sph.w, ref["sphericity"]["w"]), 1e-6);
  EXPECT_LT(rel_diff(sph.chi_sq, ref["sphericity"]["chi_sq"]), 1e-6);
  EXPECT_LT(rel_diff(sph.p, ref["sphericity"]["p"]), 1e-6);

  const auto pairs = paired_t_bonferroni(m, 0.05);
  ASSERT_EQ(pairs.size(), ref["pairwise"].size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& rp = ref["pairwise"][i];
    EXPECT_EQ(pairs[i].a, rp["a"].get<std::string>());
    EXPECT_EQ(pairs[i].b, rp["b"].get<std::string>());
    EXPECT_LT(rel_diff(pairs[i].t, rp["t"]), 1e-9);
    EXPECT_EQ(pairs[i].df, rp["df"].get<int>());
    EXPECT_LT(rel_diff(pairs[i].p_raw, rp["p_raw"]), 1e-6);
    EXPECT_LT(rel_diff(pairs[i].p_corrected, rp["p_corrected"]), 1e-6);
  }

  for (std::size_t j = 0; j < m.conditions(); ++j) {
    const auto sw = shapiro_wilk(m.column(j));
    EXPECT_LT(rel_diff(sw.w, ref["normality"][j]["w"]), 1e-6);
    EXPECT_NEAR(sw.p, ref["normality"][j]["p"].get<double>(), 1e-4);
  }
}

INSTANTIATE_TEST_SUITE_P(Committed, FixtureMatrices,
                         ::testing::Values("hand_4x3", "matrix_01", "matrix_02", "matrix_03",
                                           "matrix_04", "matrix_05"));

TEST(Mauchly, DfForThreeConditionsIsTwo) {
  EXPECT_EQ(mauchly(fixture_matrix("matrix_01")).df, 2);
}

TEST(Mauchly, TwoConditionsAreTriviallySpherical) {
  std::mt19937_64 rng(3);
  const auto m = testing::random_matrix(rng, 10, 2);
  const auto s = mauchly(m);
  EXPECT_TRUE(s.trivial);
  EXPECT_DOUBLE_EQ(s.w, 1.0);
  EXPECT_DOUBLE_EQ(s.p, 1.0);
  EXPECT_DOUBLE_EQ(gg_epsilon(m), 1.0);
}

TEST(Mauchly, SingularContrastCovarianceIsDegenerate) {
  // Third column is an exact affine combination: contrasts are rank 1.
  std::vector<double> v;
  for (int i = 0; i < 6; ++i) {
    const double a = i * 1.5 + (i % 2);
    v.insert(v.end(), {a, 2.0 * a, 3.0 * a});
  }
  const ConditionMatrix m({"a", "b", "c"}, 6, v);
  EXPECT_THROW(mauchly(m), DegenerateError);
}

TEST(Mauchly, NeedsMoreSubjectsThanConditions) {
  const ConditionMatrix m({"a", "b", "c", "d"}, 4,
                          {1, 2, 3, 4, 2, 1, 4, 3, 3, 4, 1, 2, 4, 3, 2, 1.5});
  EXPECT_THROW(mauchly(m), ContractViolation);
}

TEST(GreenhouseGeisser, PerfectlySphericalCovarianceGivesOne) {
  // Contrast scores with orthogonal, equal-norm, zero-mean columns, mapped
  // back through the orthonormal contrasts and shifted per subject.
  const std::vector<double> y1{1, -1, 1, -1};
  const std::vector<double> y2{1, 1, -1, -1};
  const double s2 = std::sqrt(2.0);
  const double s6 = std::sqrt(6.0);
  std::vector<double> v;
  for (int i = 0; i < 4; ++i) {
    const double offset = 10.0 + 3.0 * i;
    v.push_back(offset + y1[i] / s2 + y2[i] / s6);
    v.push_back(offset - y1[i] / s2 + y2[i] / s6);
    v.push_back(offset - 2.0 * y2[i] / s6);
  }
  const ConditionMatrix m({"a", "b", "c"}, 4, v);
  EXPECT_NEAR(gg_epsilon(m), 1.0, 1e-9);
}

TEST(GreenhouseGeisser, WithinBounds) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const auto m = testing::random_matrix(rng, 8, 4);
    const double e = gg_epsilon(m);
    EXPECT_GE(e, 1.0 / 3.0);
    EXPECT_LE(e, 1.0);
  }
}

TEST(RmAnova, DfForPaperShape) {
  std::mt19937_64 rng(1);
  const auto a = rm_anova(testing::random_matrix(rng, 50, 3));
  EXPECT_EQ(a.df_num, 2);
  EXPECT_EQ(a.df_den, 98);
}

TEST(RmAnova, NullEffectGivesZeroF) {
  // Each subject constant across conditions; subjects differ.
  const ConditionMatrix m({"a", "b", "c"}, 3, {1, 1, 1, 4, 4, 4, 9, 9, 9});
  const auto a = rm_anova(m);
  EXPECT_EQ(a.f, 0.0);
  EXPECT_EQ(a.p, 1.0);
  EXPECT_EQ(a.eta_g_sq, 0.0);
  EXPECT_FALSE(a.exact_fit);
}

TEST(RmAnova, ExactFitReportsInfiniteF) {
  // Purely additive subject + condition effects: zero residual.
  const ConditionMatrix m({"a", "b", "c"}, 3, {1, 2, 4, 2, 3, 5, 7, 8, 10});
  const auto a = rm_anova(m);
  EXPECT_TRUE(a.exact_fit);
  EXPECT_TRUE(std::isinf(a.f));
  EXPECT_EQ(a.p, 0.0);
}

TEST(RmAnova, ConstantMatrixIsDegenerate) {
  const ConditionMatrix m({"a", "b"}, 3, {2, 2, 2, 2, 2, 2});
  EXPECT_THROW(rm_anova(m), DegenerateError);
}

TEST(RmAnova, SumOfSquaresDecomposes) {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 100; ++rep) {
    const auto m = testing::random_matrix(rng, 3 + rep % 20, 2 + rep % 5, 2.0);
    const auto a = rm_anova(m);
    EXPECT_LT(rel_diff(a.ss_subjects + a.ss_conditions + a.ss_error, a.ss_total), 1e-9);
  }
}

TEST(RmAnova, TwoConditionFEqualsPairedTSquared) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const auto m = testing::random_matrix(rng, 12, 2);
    const auto a = rm_anova(m);
    const auto t = paired_t_bonferroni(m).front().t;
    EXPECT_LT(rel_diff(a.f, t * t), 1e-9);
    EXPECT_LT(rel_diff(a.p, paired_t_bonferroni(m).front().p_raw), 1e-9);
  }
}

// Pairwise -----------------------------------------------------------------

TEST(Pairwise, BonferroniClampsAtOne) {
  EXPECT_DOUBLE_EQ(bonferroni(0.5, 3), 1.0);
  EXPECT_DOUBLE_EQ(bonferroni(0.01, 3), 0.03);
}

TEST(Pairwise, IdenticalColumnsAreDegenerate) {
  const ConditionMatrix m({"a", "b"}, 3, {1, 1, 2, 2, 5, 5});
  EXPECT_THROW(paired_t_bonferroni(m), DegenerateError);
}

TEST(Pairwise, RejectImpliesRawBelowAlphaOverM) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> shift(0.0, 0.6);
  for (int rep = 0; rep < 200; ++rep) {
    auto m = testing::random_matrix(rng, 10, 4);
    const double s = shift(rng);
    m = m.transformed([&](std::size_t, std::size_t j, double v) { return v + s * j; });
    const auto pairs = paired_t_bonferroni(m, 0.05);
    ASSERT_EQ(pairs.size(), 6u);
    for (const auto& p : pairs) {
      EXPECT_EQ(p.reject, p.p_corrected < 0.05);
      if (p.reject) EXPECT_LT(p.p_raw, 0.05 / 6);
      EXPECT_DOUBLE_EQ(p.p_corrected, std::min(1.0, 6 * p.p_raw));
    }
  }
}

TEST(Pairwise, SignFollowsFirstMinusSecond) {
  const ConditionMatrix m({"lo", "hi"}, 4, {1, 2, 2, 3.5, 3, 4.2, 4, 5.1});
  const auto r = paired_t_bonferroni(m).front();
  EXPECT_LT(r.t, 0.0);
  EXPECT_EQ(r.a, "lo");
  EXPECT_EQ(r.b, "hi");
}

// Pipeline -------------------------------------------------------------------

TEST(Analyze, TwoConditionsUseUncorrectedP) {
  std::mt19937_64 rng(23);
  const auto b = analyze(testing::random_matrix(rng, 20, 2));
  EXPECT_TRUE(b.sphericity.trivial);
  EXPECT_FALSE(b.used_gg);
  EXPECT_EQ(b.operative_p, b.anova.p);
}

TEST(Analyze, SphericityViolationSwitchesToGreenhouseGeisser) {
  // One condition's variance inflated fourfold.
  const auto m = fixture_matrix("matrix_02");
  const auto b = analyze(m, 0.05);
  EXPECT_LT(b.sphericity.p, 0.05);
  EXPECT_TRUE(b.used_gg);
  EXPECT_EQ(b.operative_p, b.anova.p_gg);
  EXPECT_LT(rel_diff(b.operative_p, reference()["matrices"]["matrix_02"]["anova"]["p_gg"]), 1e-6);
  EXPECT_GT(b.operative_p, b.anova.p);
}

TEST(Analyze, NullDataRarelyRejects) {
  std::mt19937_64 rng(2024);
  int kept = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto b = analyze(testing::random_matrix(rng, 50, 3), 0.05);
    if (!b.reject) ++kept;
  }
  EXPECT_GE(kept, 90);
}

TEST(Analyze, InvariantUnderShiftScaleAndSubjectOffsets) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const auto m = testing::random_matrix(rng, 15, 3);
    const auto base = analyze(m);
    std::vector<double> offsets(m.subjects());
    for (auto& o : offsets) o = 5.0 * z(rng);
    const auto shifted = analyze(m.transformed([](auto, auto, double v) { return v + 123.0; }));
    const auto scaled = analyze(m.transformed([](auto, auto, double v) { return v * 7.5; }));
    const auto offset =
        analyze(m.transformed([&](std::size_t i, auto, double v) { return v + offsets[i]; }));
    for (const auto* other : {&shifted, &scaled, &offset}) {
      EXPECT_LT(rel_diff(other->anova.f, base.anova.f), 1e-9);
      EXPECT_LT(rel_diff(other->anova.p, base.anova.p), 1e-9);
      EXPECT_LT(rel_diff(other->anova.gg_epsilon, base.anova.gg_epsilon), 1e-9);
      EXPECT_LT(rel_diff(other->sphericity.w, base.sphericity.w), 1e-9);
      for (std::size_t i = 0; i < base.pairwise.size(); ++i) {
        EXPECT_LT(rel_diff(other->pairwise[i].t, base.pairwise[i].t), 1e-9);
      }
    }
    EXPECT_LT(rel_diff(scaled.anova.eta_g_sq, base.anova.eta_g_sq), 1e-9);
    EXPECT_LT(rel_diff(shifted.anova.eta_g_sq, base.anova.eta_g_sq), 1e-9);
  }
}

TEST(Distributions, TailsStayMeaningfulFarBelowMachineEpsilon) {
  const double p = f_upper_p(24268.23, 2, 98);
  EXPECT_GT(p, 0.0);
  EXPECT_LT(p, 1e-100);
  EXPECT_GT(t_two_sided_p(220.0, 49), 0.0);
  EXPECT_NEAR(t_two_sided_p(0.0, 10), 1.0, 1e-15);
  EXPECT_NEAR(chi_sq_upper_p(5.991464547107979, 2), 0.05, 1e-12);
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-12);
}

TEST(ConditionMatrixCsv, RoundTripsExactly) {
  std::mt19937_64 rng(8);
  const auto m = testing::random_matrix(rng, 6, 3);
  std::stringstream ss;
  write_matrix_csv(ss, m);
  const auto back = read_matrix_csv(ss);
  EXPECT_EQ(back.labels(), m.labels());
  ASSERT_EQ(back.values().size(), m.values().size());
  for (std::size_t i = 0; i < m.values().size(); ++i) EXPECT_EQ(back.values()[i], m.values()[i]);
}

TEST(ConditionMatrixCsv, RejectsRaggedRows) {
  std::stringstream ss("a,b\n1,2\n3\n4,5\n");
  EXPECT_THROW(read_matrix_csv(ss), SchemaError);
}

}  // namespace
}  // namespace wattmark::stats
