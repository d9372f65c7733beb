// Copyright 2026 The Flora Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flora/fis.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "support/oracles.h"

namespace flora::fis {
namespace {

TEST(AggregatorTest, MinPicksSmallest) {
  std::vector<double> xs = {0.9, 0.3};
  EXPECT_EQ(Aggregator::Min().Apply(xs), 0.3);
}

TEST(AggregatorTest, HarmonicMean) {
  std::vector<double> xs = {1.0, 0.5};
  EXPECT_DOUBLE_EQ(Aggregator::Hmean().Apply(xs), 2.0 / 3.0);
  std::vector<double> with_zero = {1.0, 0.0, 0.5};
  EXPECT_EQ(HarmonicMean(with_zero), 0.0);
  std::vector<double> equal = {0.1, 0.1};
  EXPECT_DOUBLE_EQ(HarmonicMean(equal), 0.1);
}

TEST(AggregatorTest, AlphaMeanClamps) {
  std::vector<double> xs = {0.5, 0.1, 0.0};
  EXPECT_DOUBLE_EQ(Aggregator::AlphaMean(3).Apply(xs), 0.6);
  std::vector<double> high = {0.9, 0.8};
  EXPECT_EQ(Aggregator::AlphaMean(3).Apply(high), 1.0);
  EXPECT_THROW(Aggregator::AlphaMean(0.5), std::invalid_argument);
}

TEST(AggregatorTest, IdentityNeedsOneValue) {
  std::vector<double> one = {0.4};
  std::vector<double> two = {0.4, 0.5};
  EXPECT_EQ(Aggregator::Identity().Apply(one), 0.4);
  EXPECT_THROW(Aggregator::Identity().Apply(two), std::invalid_argument);
}

TEST(AggregatorTest, Names) {
  EXPECT_EQ(Aggregator::Min().Name(), "min");
  EXPECT_EQ(Aggregator::AlphaMean(3).Name(), "alpha_mean[3]");
}

TEST(SystemTest, RejectsBadRules) {
  System s;
  auto in = s.AddInput("in", 0.5);
  auto x = s.AddOutput("x");
  EXPECT_THROW(s.AddRule({{}, Aggregator::Min(), x}), std::invalid_argument);
  EXPECT_THROW(s.AddRule({{in, x}, Aggregator::Identity(), x}),
               std::invalid_argument);
  EXPECT_THROW(s.AddRule({{x}, Aggregator::Identity(), in}),
               std::invalid_argument);
  EXPECT_THROW(s.AddInput("bad", 1.5), std::invalid_argument);
}

TEST(SolveTest, NoRulesGivesZero) {
  System s;
  auto x = s.AddOutput("x");
  auto y = s.AddOutput("y");
  Assignment a = Solve(s);
  EXPECT_TRUE(a.converged);
  EXPECT_EQ(a[x], 0.0);
  EXPECT_EQ(a[y], 0.0);
}

TEST(SolveTest, ConstantThroughIdentity) {
  System s = ParseRules("x <= id(0.7)\n");
  Assignment a = Solve(s);
  EXPECT_DOUBLE_EQ(a[*s.Find("x")], 0.7);
}

TEST(SolveTest, MutualRecursion) {
  System s = ParseRules(
      "x <= id(0.5)\n"
      "y <= id(x)\n"
      "x <= id(y)\n");
  Assignment a = Solve(s);
  EXPECT_TRUE(a.converged);
  EXPECT_DOUBLE_EQ(a[*s.Find("x")], 0.5);
  EXPECT_DOUBLE_EQ(a[*s.Find("y")], 0.5);
  EXPECT_TRUE(VerifyLeastFixedPoint(s, a, 1e-3).ok);
}

TEST(SolveTest, InflatedAssignmentIsRejected) {
  System s = ParseRules(
      "x <= id(0.5)\n"
      "y <= id(x)\n"
      "x <= id(y)\n");
  Assignment a = Solve(s);
  VariableId y = *s.Find("y");
  a.values[Index(y)] += 0.2;
  LeastFixedPointCheck check = VerifyLeastFixedPoint(s, a, 1e-3);
  EXPECT_FALSE(check.ok);
  ASSERT_TRUE(check.counterexample.has_value());
  EXPECT_EQ(*check.counterexample, y);
}

TEST(SolveTest, UnsatisfiedRuleIsRejected) {
  System s = ParseRules("x <= id(0.5)\n");
  Assignment a = Solve(s);
  a.values[Index(*s.Find("x"))] = 0.2;
  EXPECT_FALSE(VerifyLeastFixedPoint(s, a, 1e-3).ok);
}

TEST(SolveTest, SweepCapReportsNotConverged) {
  // x creeps toward 1 by halving the gap each sweep.
  System s = ParseRules(
      "x <= alpha_mean[1](x, 1)\n"
      "x <= id(0.1)\n");
  SolveOptions options;
  options.max_sweeps = 3;
  Assignment a = Solve(s, options);
  EXPECT_FALSE(a.converged);
  EXPECT_EQ(a.sweeps, 3);
}

TEST(SolveTest, InitialValueIsAFloor) {
  System s;
  auto x = s.AddOutput("x", 0.4);
  auto c = s.AddConstant(0.2);
  s.AddRule({{c}, Aggregator::Identity(), x});
  EXPECT_DOUBLE_EQ(Solve(s)[x], 0.4);
}

TEST(RuleFileTest, ParsesAllForms) {
  System s = ParseRules(
      "# comment\n"
      "input a = 0.9\n"
      "init y = 0.25\n"
      "x <= min(a, 0.3)   # trailing\n"
      "y <= hmean(a, x)\n"
      "z <= alpha_mean[2](x, y)\n"
      "w <= identity(z)\n");
  EXPECT_TRUE(s.variable(*s.Find("a")).is_input);
  EXPECT_EQ(s.rules().size(), 4u);
  Assignment a = Solve(s);
  EXPECT_DOUBLE_EQ(a[*s.Find("x")], 0.3);
  EXPECT_DOUBLE_EQ(a[*s.Find("y")], 2 / (1 / 0.9 + 1 / 0.3));
}

TEST(RuleFileTest, ErrorsCarryLineNumbers) {
  try {
    ParseRules("x <= min(0.1)\ny <= bogus(x)\n");
    FAIL() << "expected a parse error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(ParseRules("x <= min(1.5)\n"), std::invalid_argument);
  EXPECT_THROW(ParseRules("x <= min(\n"), std::invalid_argument);
  EXPECT_THROW(ParseRules("input a = 0.5\na <= id(0.1)\n"),
               std::invalid_argument);
}

class RandomFisTest : public ::testing::TestWithParam<int> {};

TEST_P(RandomFisTest, MatchesJacobiOracle) {
  std::mt19937_64 rng(1000 + GetParam());
  System s = testing::RandomFis(rng);
  std::vector<std::vector<double>> snapshots;
  Assignment a = Solve(s, {}, [&](std::span<const double> v) {
    snapshots.emplace_back(v.begin(), v.end());
  });
  ASSERT_TRUE(a.converged);
  std::vector<double> oracle = testing::JacobiLeastFixedPoint(s);
  for (size_t i = 0; i < oracle.size(); ++i) {
    EXPECT_NEAR(a.values[i], oracle[i], 1e-6) << "variable " << i;
  }
  for (size_t k = 1; k < snapshots.size(); ++k) {
    for (size_t i = 0; i < oracle.size(); ++i) {
      EXPECT_GE(snapshots[k][i], snapshots[k - 1][i]);
    }
  }
  for (const Rule& rule : s.rules()) {
    EXPECT_GE(a[rule.conclusion] + 1e-9, FiringStrength(rule, a.values));
  }
  EXPECT_TRUE(VerifyLeastFixedPoint(s, a, 1e-3).ok);
}

TEST_P(RandomFisTest, RuleOrderDoesNotChangeTheFixedPoint) {
  std::mt19937_64 rng(5000 + GetParam());
  System s = testing::RandomFis(rng);
  std::vector<size_t> order(s.rules().size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  Assignment a = Solve(s);
  Assignment b = Solve(s.WithRuleOrder(order));
  for (size_t i = 0; i < a.values.size(); ++i) {
    EXPECT_NEAR(a.values[i], b.values[i], 1e-7);
  }
}

TEST_P(RandomFisTest, ConstantRuleEqualsInitialValue) {
  std::mt19937_64 rng(9000 + GetParam());
  System base = testing::RandomFis(rng);
  double c = std::uniform_real_distribution<double>(0, 1)(rng);
  VariableId x = *base.Find("x0");

  System with_rule = base;
  with_rule.AddRule({{with_rule.AddConstant(c)}, Aggregator::Identity(), x});

  // Same system with x0 starting at max(initial, c).
  System seeded;
  for (const Variable& v : base.variables()) {
    if (v.is_input) {
      seeded.AddInput(v.name, v.value);
    } else {
      double init = v.value;
      if (v.name == "x0") init = std::max(init, c);
      seeded.AddOutput(v.name, init);
    }
  }
  for (const Rule& r : base.rules()) seeded.AddRule(r);

  Assignment a = Solve(with_rule);
  Assignment b = Solve(seeded);
  for (size_t i = 0; i < b.values.size(); ++i) {
    EXPECT_NEAR(a.values[i], b.values[i], 1e-7);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomFisTest, ::testing::Range(0, 200));

}  // namespace
}  // namespace flora::fis
