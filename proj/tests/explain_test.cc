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

#include "flora/explain.h"

#include <gtest/gtest.h>

#include <cmath>

#include "flora/engine.h"
#include "support/synthetic.h"

namespace flora {
namespace {

double Hmean(const std::vector<double>& v) {
  double inv = 0;
  for (double x : v) {
    if (x == 0) return 0;
    inv += 1 / x;
  }
  return v.size() / inv;
}

// Entity-rule strength from the recorded evidence, computed independently.
double OracleStrength(const Explanation& e) {
  if (e.seed) return 1;
  if (e.evidence.empty()) return 0;
  std::vector<double> heads, rels;
  for (const auto& line : e.evidence) {
    heads.push_back(line.head_score);
    rels.push_back(line.rel_score);
  }
  return std::min({Hmean(heads), Hmean(rels), e.fun_list.value,
                   e.fun_local.value, e.fun_list2.value, e.fun_local2.value});
}

std::optional<EntityId> Resolve(const KnowledgeGraph& kg,
                                const std::string& label, bool literal) {
  return literal ? kg.FindLiteral(label) : kg.FindEntity(label);
}

// The evidence line's fact relation(head, tail) is stored in `kg`.
bool FactExists(const KnowledgeGraph& kg, const std::string& tail,
                const std::string& relation, const std::string& head,
                bool literal) {
  auto t = kg.FindEntity(tail);
  auto r = kg.FindRelation(relation);
  auto h = Resolve(kg, head, literal);
  if (!t || !r || !h) return false;
  auto facts = kg.IncidentFacts(*t);
  return std::find(facts.begin(), facts.end(), Fact{*r, *h}) != facts.end();
}

class ExplanationConsistencyTest
    : public ::testing::TestWithParam<std::tuple<uint64_t, double, double>> {};

TEST_P(ExplanationConsistencyTest, EveryReportedMatchReproduces) {
  auto [seed, drop, dangling] = GetParam();
  testing::SyntheticOptions so;
  so.seed = seed;
  so.drop = drop;
  so.dangling = dangling;
  auto data = testing::MakeSynthetic(so);
  AlignmentReport report = RunAlignment(data.bundle, {});
  ASSERT_FALSE(report.entities.empty());
  size_t checked = 0;
  for (const EntityMatch& m : report.entities) {
    ExplainResult r = report.explanations.Lookup(m.left, m.right);
    ASSERT_EQ(r.status, ExplainStatus::kFound);
    const Explanation& e = *r.explanation;
    EXPECT_EQ(e.strength, m.score);
    EXPECT_NEAR(RecomputeStrength(e), e.strength, 1e-12);
    EXPECT_NEAR(OracleStrength(e), e.strength, 1e-12);
    for (const auto& line : e.evidence) {
      EXPECT_TRUE(FactExists(data.bundle.kg1, e.left, line.relation, line.head,
                             line.literal_head))
          << line.relation << " " << line.head;
      EXPECT_TRUE(FactExists(data.bundle.kg2, e.right, line.relation2,
                             line.head2, line.literal_head))
          << line.relation2 << " " << line.head2;
    }
    ++checked;
  }
  EXPECT_EQ(checked, report.explanations.Reported().size());
}

INSTANTIATE_TEST_SUITE_P(
    Synthetic, ExplanationConsistencyTest,
    ::testing::Values(std::tuple{7u, 0.0, 0.0}, std::tuple{11u, 0.1, 0.0},
                      std::tuple{13u, 0.0, 0.2}, std::tuple{17u, 0.2, 0.2}));

// A singer born on a date in a city; KG2 uses opaque labels.
struct GagaFixture {
  DatasetBundle bundle;
  GagaFixture() {
    bundle.kg1.AddAttribute("Lady_Gaga", "birthDate", "\"1986-03-28\"");
    bundle.kg1.AddAttribute("Lady_Gaga", "name", "\"Lady Gaga\"");
    bundle.kg1.AddTriple("Lady_Gaga", "bornIn", "New_York_City");
    bundle.kg1.AddAttribute("New_York_City", "name", "\"New York City\"");
    bundle.kg1.AddAttribute("Madonna", "birthDate", "\"1958-08-16\"");
    bundle.kg1.AddTriple("Madonna", "bornIn", "Bay_City");
    bundle.kg2.AddAttribute("Q19848", "P569", "\"1986-03-28\"");
    bundle.kg2.AddTriple("Q19848", "P19", "Q60");
    bundle.kg2.AddAttribute("Q60", "P1448", "\"New York City\"");
    bundle.kg2.AddAttribute("Q1744", "P569", "\"1958-08-16\"");
    bundle.kg2.AddTriple("Q1744", "P19", "Q2000");
  }
};

TEST(ExplainTest, DateAndRelationalEvidence) {
  GagaFixture f;
  AlignmentReport report = RunAlignment(f.bundle, {});
  ExplainResult r = report.explanations.Lookup("Lady_Gaga", "Q19848");
  ASSERT_EQ(r.status, ExplainStatus::kFound);
  const Explanation& e = *r.explanation;
  ASSERT_EQ(e.evidence.size(), 2u);
  std::string text = RenderText(e);
  EXPECT_NE(text.find("birthDate^-1"), std::string::npos) << text;
  EXPECT_NE(text.find("P569^-1"), std::string::npos) << text;
  EXPECT_NE(text.find("bornIn^-1"), std::string::npos) << text;
  EXPECT_NE(text.find("P19^-1"), std::string::npos) << text;
  EXPECT_NE(text.find("1986-03-28"), std::string::npos) << text;
  EXPECT_NE(text.find("(literal)"), std::string::npos) << text;
  EXPECT_NEAR(RecomputeStrength(e), e.strength, 1e-12);
}

TEST(ExplainTest, EvidenceInDescendingContribution) {
  Explanation e;
  e.left = "a";
  e.right = "b";
  e.evidence = {{"weak", "W", 0.2, "h1", "H1", 1.0, false},
                {"strong", "S", 0.9, "h2", "H2", 1.0, false}};
  std::string text = RenderText(e);
  EXPECT_LT(text.find("strong("), text.find("weak("));
}

TEST(ExplainTest, SeedExplanation) {
  Explanation e = MakeSeedExplanation("a", "A");
  EXPECT_TRUE(e.seed);
  EXPECT_EQ(e.strength, 1.0);
  EXPECT_EQ(RecomputeStrength(e), 1.0);
  EXPECT_NE(RenderText(e).find("seed (training data), score 1"),
            std::string::npos);
}

TEST(ExplainTest, SeededPairInReport) {
  GagaFixture f;
  AddSeedLinks({{"Madonna", "Q1744"}}, f.bundle);
  AlignmentReport report = RunAlignment(f.bundle, {});
  ExplainResult r = report.explanations.Lookup("Madonna", "Q1744");
  ASSERT_EQ(r.status, ExplainStatus::kFound);
  EXPECT_TRUE(r.explanation->seed);
  EXPECT_EQ(r.explanation->strength, 1.0);
}

TEST(ExplainTest, SingleLiteralFact) {
  DatasetBundle bundle;
  bundle.kg1.AddAttribute("x", "born", "1986-03-28");
  bundle.kg2.AddAttribute("X", "P569", "1986-03-28");
  LiteralSimTable table = BuildLiteralTable(bundle.kg1, bundle.kg2, {});
  Aligner aligner(bundle, table, {});
  RuleInstance rule =
      aligner.EvaluatePair(*bundle.kg1.FindEntity("x"),
                           *bundle.kg2.FindEntity("X"));
  Explanation e = MakeExplanation(rule, bundle.kg1, bundle.kg2);
  ASSERT_EQ(e.evidence.size(), 1u);
  const EvidenceLine& line = e.evidence[0];
  EXPECT_TRUE(line.literal_head);
  EXPECT_EQ(e.strength,
            std::min({line.head_score, line.rel_score, e.fun_list.value,
                      e.fun_local.value, e.fun_list2.value,
                      e.fun_local2.value}));
}

TEST(ExplainTest, LookupStatuses) {
  ExplanationStore store;
  Explanation reported = MakeSeedExplanation("a", "A");
  reported.reported = true;
  store.Add(reported);
  Explanation kept;
  kept.left = "b";
  kept.right = "B";
  kept.strength = 0.05;
  store.Add(kept);
  store.AddScored("c", "C", 0.4);
  store.AddScored("a", "A", 1.0);

  EXPECT_EQ(store.Lookup("a", "A").status, ExplainStatus::kFound);
  ExplainResult below = store.Lookup("b", "B");
  EXPECT_EQ(below.status, ExplainStatus::kNotReported);
  EXPECT_EQ(below.best_score, 0.05);
  ASSERT_TRUE(below.explanation.has_value());
  ExplainResult pruned = store.Lookup("c", "C");
  EXPECT_EQ(pruned.status, ExplainStatus::kNotReported);
  EXPECT_EQ(pruned.best_score, 0.4);
  EXPECT_FALSE(pruned.explanation.has_value());
  ExplainResult never = store.Lookup("a", "B");
  EXPECT_EQ(never.status, ExplainStatus::kNeverScored);
  EXPECT_FALSE(never.best_score.has_value());
  ASSERT_EQ(store.Reported().size(), 1u);
  EXPECT_EQ(store.Reported()[0]->left, "a");
}

TEST(ExplainTest, JsonRoundTrip) {
  GagaFixture f;
  AlignmentReport report = RunAlignment(f.bundle, {});
  ASSERT_FALSE(report.explanations.all().empty());
  for (const Explanation& e : report.explanations.all()) {
    std::string line = ToJsonLine(e);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    Explanation back = FromJsonLine(line);
    EXPECT_EQ(back.left, e.left);
    EXPECT_EQ(back.right, e.right);
    EXPECT_EQ(back.strength, e.strength);
    EXPECT_EQ(back.seed, e.seed);
    EXPECT_EQ(back.reported, e.reported);
    EXPECT_EQ(back.head_mean, e.head_mean);
    EXPECT_EQ(back.rel_mean, e.rel_mean);
    ASSERT_EQ(back.evidence.size(), e.evidence.size());
    for (size_t i = 0; i < e.evidence.size(); ++i) {
      EXPECT_EQ(back.evidence[i].relation, e.evidence[i].relation);
      EXPECT_EQ(back.evidence[i].head2, e.evidence[i].head2);
      EXPECT_EQ(back.evidence[i].head_score, e.evidence[i].head_score);
      EXPECT_EQ(back.evidence[i].rel_score, e.evidence[i].rel_score);
      EXPECT_EQ(back.evidence[i].literal_head, e.evidence[i].literal_head);
    }
    for (auto member : {&Explanation::fun_list, &Explanation::fun_local,
                        &Explanation::fun_list2, &Explanation::fun_local2}) {
      EXPECT_EQ((back.*member).value, (e.*member).value);
      EXPECT_EQ((back.*member).mode, (e.*member).mode);
      EXPECT_EQ((back.*member).samples, (e.*member).samples);
    }
    EXPECT_EQ(RecomputeStrength(back), RecomputeStrength(e));
  }
  EXPECT_THROW(FromJsonLine("{not json"), std::runtime_error);
}

}  // namespace
}  // namespace flora
