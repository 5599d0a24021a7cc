#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace bratteli;

namespace {

WeightedSystem fack_marechal_geometric(std::size_t levels) {
  return WeightedSystem(catalog::fack_marechal(
      [](std::size_t n) { return std::pow(4.0, double(n)); }, [](std::size_t) { return 1.0; },
      levels));
}

/// Closed form of the variation after levels m+1 .. n for A_k = [[p,r],[r,p]]:
/// B_k = A_k / (p+r) has eigenvalue (p-r)/(p+r) on (1,-1), so delta_v has
/// variation prod (p_k - r_k)/(p_k + r_k).
double fm_product(std::size_t m, std::size_t n, double (*p)(std::size_t)) {
  double prod = 1.0;
  for (std::size_t k = m + 1; k <= n; ++k) prod *= (p(k) - 1.0) / (p(k) + 1.0);
  return prod;
}

double four_pow(std::size_t k) { return std::pow(4.0, double(k)); }

}  // namespace

TEST(VariationCondition, StationaryPositiveIsUnique) {
  const WeightedSystem s(catalog::stationary_from_matrix({{2, 1}, {1, 3}}, 40));
  const auto v = check_variation_condition(s, 0, 40, 1e-8);
  EXPECT_EQ(v.status, VerdictStatus::UniqueAtTolerance);
  EXPECT_TRUE(v.certified());
  EXPECT_EQ(v.trace.size(), 40u);
  EXPECT_LE(v.trace.back().value, 1e-8);
  EXPECT_EQ(v.trace.front().level, 1u);
}

TEST(VariationCondition, FackMarechalGeometricStaysAbove) {
  const auto s = fack_marechal_geometric(40);
  const auto v = check_variation_condition(s, 1, 40, 1e-3);
  EXPECT_EQ(v.status, VerdictStatus::Inconclusive);
  EXPECT_FALSE(v.certified());
  for (const auto& point : v.trace) {
    const double closed = fm_product(1, point.level, four_pow);
    EXPECT_NEAR(point.value, closed, 1e-12);
    EXPECT_GE(point.value, 0.6);
  }
}

TEST(VariationCondition, FackMarechalFromLevelZeroMatchesClosedForm) {
  // The first factor is (4-1)/(4+1) = 0.6, so the infinite product is below it.
  const auto s = fack_marechal_geometric(40);
  const auto v = check_variation_condition(s, 0, 40, 1e-3);
  for (const auto& point : v.trace) {
    EXPECT_NEAR(point.value, fm_product(0, point.level, four_pow), 1e-12);
  }
  EXPECT_GT(v.trace.back().value, 0.5);
}

TEST(VariationCondition, FackMarechalUnitMultiplicitiesCollapse) {
  const WeightedSystem s(catalog::fack_marechal([](std::size_t) { return 1.0; },
                                                [](std::size_t) { return 1.0; }, 40));
  const auto v = check_variation_condition(s, 0, 40, 1e-8);
  EXPECT_EQ(v.status, VerdictStatus::UniqueAtTolerance);
  EXPECT_LE(v.trace.front().value, 1e-15);
}

TEST(VariationCondition, SingleVertexLevelIsImmediate) {
  // V(N-1) of a chain has one vertex, so delta_v is constant.
  const WeightedSystem s(catalog::single_vertex({1.0, 2.0}, 6));
  const auto v = check_variation_condition(s, 5, 6, 0.0);
  EXPECT_EQ(v.status, VerdictStatus::UniqueAtTolerance);
  ASSERT_EQ(v.trace.size(), 1u);
  EXPECT_EQ(v.trace[0].value, 0.0);
}

TEST(VariationCondition, PascalDoesNotCollapse) {
  const WeightedSystem s(catalog::pascal(60));
  const auto v = check_variation_condition(s, 1, 60, 1e-8);
  EXPECT_EQ(v.status, VerdictStatus::Inconclusive);
  EXPECT_GE(v.trace.back().value, 0.5);
}

TEST(VariationCondition, RejectsBadLevels) {
  const WeightedSystem s(catalog::pascal(5));
  EXPECT_THROW(check_variation_condition(s, 3, 3, 1e-8), InvalidArgument);
  EXPECT_THROW(check_variation_condition(s, 0, 6, 1e-8), InvalidArgument);
  EXPECT_THROW(check_variation_condition(s, 0, 5, -1.0), InvalidArgument);
}

TEST(VariationCondition, TraceIsMonotoneAndDominatedByEpsilonProduct) {
  std::mt19937 rng(211);
  for (int trial = 0; trial < 60; ++trial) {
    const auto d = support::random_diagram(rng, {12, 4, 4});
    const WeightedSystem s(d);
    const std::size_t base = trial % 4;
    const auto v = check_variation_condition(s, base, 12, 1e-8);
    double bound = 1.0;
    double previous = 1.0;
    for (const auto& point : v.trace) {
      bound *= 1.0 - contraction_epsilon(markovianize(s, point.level));
      EXPECT_LE(point.value, bound + 1e-10);
      EXPECT_LE(point.value, previous + 1e-15);
      previous = point.value;
    }
  }
}

TEST(VariationCondition, MatchesExplicitMatrixProducts) {
  std::mt19937 rng(223);
  for (int trial = 0; trial < 30; ++trial) {
    const WeightedSystem s(support::random_diagram(rng, {6, 4, 3}));
    const auto v = check_variation_condition(s, 1, 6, 1e-8);
    Matrix product = Matrix::Identity(static_cast<Eigen::Index>(s.diagram().vertex_count(1)),
                                      static_cast<Eigen::Index>(s.diagram().vertex_count(1)));
    for (const auto& point : v.trace) {
      product = markovianize(s, point.level).entries() * product;
      double worst = 0.0;
      for (Eigen::Index c = 0; c < product.cols(); ++c) {
        worst = std::max(worst, product.col(c).maxCoeff() - product.col(c).minCoeff());
      }
      EXPECT_NEAR(point.value, worst, 1e-13);
    }
  }
}

TEST(SeriesCondition, StationaryPositiveIsMet) {
  const WeightedSystem s(catalog::stationary_from_matrix({{2, 1}, {1, 3}}, 10));
  const auto v = check_series_condition(s, 10);
  EXPECT_EQ(v.status, VerdictStatus::SufficientConditionMet);
  for (std::size_t i = 0; i < v.trace.size(); ++i) {
    EXPECT_NEAR(v.trace[i].value, double(i + 1) / 3.0, 1e-14);
  }
}

TEST(SeriesCondition, FackMarechalEqualMultiplicitiesUnderDeclaration) {
  const WeightedSystem s(catalog::fack_marechal([](std::size_t n) { return double(n); },
                                                [](std::size_t n) { return double(n); }, 25));
  const auto undeclared = check_series_condition(s, 25);
  EXPECT_EQ(undeclared.status, VerdictStatus::Inconclusive);
  EXPECT_DOUBLE_EQ(undeclared.trace.back().value, 25.0);
  const auto declared = check_series_condition(s, 25, true);
  EXPECT_EQ(declared.status, VerdictStatus::SufficientConditionMet);
  for (std::size_t i = 0; i < declared.trace.size(); ++i) {
    EXPECT_EQ(declared.trace[i].value, double(i + 1));
  }
}

TEST(SeriesCondition, PascalSumStopsAfterTheRootLevel) {
  // A_1 is the positive 2x1 column out of the root; every later A_n has zeros.
  const WeightedSystem s(catalog::pascal(12));
  const auto v = check_series_condition(s, 12);
  EXPECT_EQ(v.status, VerdictStatus::Inconclusive);
  for (const auto& point : v.trace) EXPECT_EQ(point.value, 1.0);
}

TEST(SeriesCondition, PartialSumsNonDecreasing) {
  std::mt19937 rng(227);
  for (int trial = 0; trial < 40; ++trial) {
    const WeightedSystem s(support::random_diagram(rng, {8, 3, 6}));
    const auto v = check_series_condition(s, 8);
    for (std::size_t i = 1; i < v.trace.size(); ++i) {
      EXPECT_GE(v.trace[i].value, v.trace[i - 1].value);
    }
  }
}

TEST(SeriesCondition, RejectsBadHorizon) {
  const WeightedSystem s(catalog::pascal(3));
  EXPECT_THROW(check_series_condition(s, 0), InvalidArgument);
  EXPECT_THROW(check_series_condition(s, 4), InvalidArgument);
}

TEST(VariationDecay, ConstantIsZero) {
  const WeightedSystem s(catalog::pascal(10));
  for (const auto& point : variation_decay(s, CylinderFunction::constant(1.0), 0, 10)) {
    EXPECT_NEAR(point.value, 0.0, 1e-14);
  }
}

TEST(VariationDecay, StationaryGeometricRate) {
  const std::vector<std::vector<double>> a{{2, 1, 1}, {1, 3, 2}, {0.5, 1, 1}};
  const auto d = catalog::stationary_from_matrix(a, 30);
  const WeightedSystem s(d);
  std::mt19937 rng(229);
  const auto f = support::cylinder_from_map(d, 2, support::random_word_values(rng, d, 2));
  const double rate = 1.0 - ratio_bound(s.transition_matrix(1));
  const auto decay = variation_decay(s, f, 2, 30);
  for (std::size_t i = 1; i < decay.size(); ++i) {
    EXPECT_LE(decay[i].value, rate * decay[i - 1].value + 1e-15);
  }
  EXPECT_LE(decay.back().value, std::pow(rate, 28.0) * decay.front().value + 1e-15);
}

TEST(VariationDecay, PascalFirstIncrementStaysLarge) {
  const auto d = catalog::pascal(60);
  const WeightedSystem s(d);
  const auto f = CylinderFunction::tabulate(
      d, 1, [](std::span<const std::size_t>, std::size_t, std::size_t end) { return double(end); });
  const auto decay = variation_decay(s, f, 1, 60);
  // E_n f(k) = k/n exactly, so the variation is 1 at every level.
  for (const auto& point : decay) EXPECT_NEAR(point.value, 1.0, 1e-12);
}

TEST(VariationDecay, MatchesExpectationAndIsMonotone) {
  std::mt19937 rng(233);
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = support::random_diagram(rng, {7, 4, 3});
    const WeightedSystem s(d);
    const auto f = support::cylinder_from_map(d, 2, support::random_word_values(rng, d, 2));
    const auto decay = variation_decay(s, f, 3, 7);
    ASSERT_EQ(decay.size(), 5u);
    for (std::size_t i = 0; i < decay.size(); ++i) {
      EXPECT_NEAR(decay[i].value, variation(expectation(s, f, 3 + i)), 1e-12);
      if (i) EXPECT_LE(decay[i].value, decay[i - 1].value + 1e-14);
    }
  }
}

TEST(VariationDecay, RejectsDepthAboveBase) {
  const auto d = catalog::pascal(5);
  const WeightedSystem s(d);
  const auto f = CylinderFunction::tabulate(
      d, 2, [](std::span<const std::size_t>, std::size_t, std::size_t) { return 0.0; });
  EXPECT_THROW(variation_decay(s, f, 1, 5), InvalidArgument);
  EXPECT_THROW(variation_decay(s, f, 3, 6), InvalidArgument);
}

TEST(Verdict, StatusNames) {
  EXPECT_EQ(to_string(VerdictStatus::UniqueAtTolerance), "UniqueAtTolerance");
  EXPECT_EQ(to_string(VerdictStatus::SufficientConditionMet), "SufficientConditionMet");
  EXPECT_EQ(to_string(VerdictStatus::Inconclusive), "Inconclusive");
}
