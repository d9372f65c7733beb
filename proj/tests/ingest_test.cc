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

#include "flora/ingest.h"

#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "support/scratch_dir.h"
#include "support/synthetic.h"

namespace flora {
namespace {

using testing::ScratchDir;

ParseReport Parse(const std::string& text, LiteralMode mode,
                  KnowledgeGraph& kg, const IngestOptions& options = {}) {
  std::istringstream in(text);
  return ParseTriples(in, "test", mode, kg, options);
}

TEST(ParseTriplesTest, RelationalLine) {
  KnowledgeGraph kg;
  ParseReport report = Parse("A\tp\tB\n", LiteralMode::kRelational, kg);
  EXPECT_EQ(report.lines, 1u);
  EXPECT_EQ(report.added, 1u);
  auto b = kg.FindEntity("B");
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(kg.kind(*b), EntityKind::kInstance);
  EXPECT_EQ(kg.IncidentFacts(*b).size(), 1u);
}

TEST(ParseTriplesTest, AttributeDate) {
  KnowledgeGraph kg;
  Parse("A\tbirthDate\t\"1986-03-28\"\n", LiteralMode::kAttribute, kg);
  auto lit = kg.FindLiteral("1986-03-28");
  ASSERT_TRUE(lit.has_value());
  EXPECT_EQ(kg.literal(*lit)->type, LiteralType::kDate);
  EXPECT_EQ(kg.literal(*lit)->date.year, 1986);
  EXPECT_EQ(kg.literal(*lit)->date.month, 3);
  EXPECT_EQ(kg.literal(*lit)->date.day, 28);
}

TEST(ParseTriplesTest, AttributeNumber) {
  KnowledgeGraph kg;
  Parse("A\theight\t\"1.75\"\n", LiteralMode::kAttribute, kg);
  auto lit = kg.FindLiteral("1.75");
  ASSERT_TRUE(lit.has_value());
  EXPECT_EQ(kg.literal(*lit)->type, LiteralType::kNumber);
  EXPECT_EQ(kg.literal(*lit)->number, 1.75);
}

TEST(ParseTriplesTest, DuplicatesCountedNotAdded) {
  KnowledgeGraph kg;
  ParseReport report =
      Parse("A\tp\tB\nA\tp\tB\r\n\n", LiteralMode::kRelational, kg);
  EXPECT_EQ(report.lines, 2u);
  EXPECT_EQ(report.added, 1u);
  EXPECT_EQ(report.duplicates, 1u);
  EXPECT_EQ(kg.num_triples(), 1u);
}

TEST(ParseTriplesTest, TypeRelationMarksClass) {
  KnowledgeGraph kg;
  Parse("A\trdf:type\tPerson\n", LiteralMode::kRelational, kg);
  EXPECT_EQ(kg.kind(*kg.FindEntity("Person")), EntityKind::kClass);
  EXPECT_EQ(kg.kind(*kg.FindEntity("A")), EntityKind::kInstance);
}

TEST(ParseTriplesTest, FewMalformedLinesAreDiagnosed) {
  std::string text;
  for (int i = 0; i < 200; ++i) {
    text += "e" + std::to_string(i) + "\tp\te" + std::to_string(i + 1) + "\n";
  }
  text += "only\ttwo\n";
  text += "a\t\tb\n";
  KnowledgeGraph kg;
  ParseReport report = Parse(text, LiteralMode::kRelational, kg);
  EXPECT_EQ(report.lines, 202u);
  EXPECT_EQ(report.added, 200u);
  ASSERT_EQ(report.diagnostics.size(), 2u);
  EXPECT_NE(report.diagnostics[0].find("test:201"), std::string::npos);
}

TEST(ParseTriplesTest, TooManyMalformedLinesAreFatal) {
  std::string text;
  for (int i = 0; i < 98; ++i) text += "a\tp\tb" + std::to_string(i) + "\n";
  text += "bad\nbad too\n";
  KnowledgeGraph kg;
  try {
    Parse(text, LiteralMode::kRelational, kg);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("2 of 100"), std::string::npos);
  }
}

TEST(ParseTriplesTest, UnreadableFileIsFatal) {
  KnowledgeGraph kg;
  EXPECT_THROW(ParseTripleFile("/nonexistent/rel", LiteralMode::kRelational,
                               kg),
               DataError);
}

TEST(ReadLinksTest, ParsesAndRejects) {
  ScratchDir dir;
  auto links = ReadLinks(dir.Write("links", "a\tb\nc\td\r\n\n"));
  EXPECT_EQ(links, (std::vector<LabelPair>{{"a", "b"}, {"c", "d"}}));
  EXPECT_THROW(ReadLinks(dir.Write("bad", "a\n")), DataError);
  EXPECT_TRUE(ReadLinks(dir.Write("empty", "")).empty());
}

TEST(ReadRelationLinksTest, Ops) {
  ScratchDir dir;
  auto links = ReadRelationLinks(
      dir.Write("rel", "father\tSUB\tparent\nx\tEQV\ty\nm\tSUP\tn\n"));
  ASSERT_EQ(links.size(), 3u);
  EXPECT_EQ(links[0].op, RelationOp::kSub);
  EXPECT_EQ(links[1].op, RelationOp::kEqv);
  EXPECT_EQ(links[2].op, RelationOp::kSup);
  EXPECT_THROW(ReadRelationLinks(dir.Write("bad", "a\tLIKE\tb\n")), DataError);
  for (RelationOp op : {RelationOp::kSub, RelationOp::kSup, RelationOp::kEqv}) {
    EXPECT_EQ(ParseRelationOp(ToString(op)), op);
  }
}

void WriteOpenEa(const ScratchDir& dir, bool empty_rel) {
  dir.Write("rel_triples_1", empty_rel ? "" : "a\tp\tb\nb\tq\tc\n");
  dir.Write("rel_triples_2", empty_rel ? "" : "A\tP\tB\n");
  dir.Write("attr_triples_1", "a\tname\t\"alpha\"\nb\tborn\t\"1990-01-01\"\n");
  dir.Write("attr_triples_2", "A\tlabel\t\"alpha\"@en\n");
  dir.Write("ent_links", "a\tA\nb\tB\n");
}

TEST(LoadOpenEaDirTest, LoadsBothSides) {
  ScratchDir dir;
  WriteOpenEa(dir, false);
  DatasetBundle bundle = LoadOpenEaDir(dir.path().string());
  KgStats s1 = Stats(bundle.kg1);
  EXPECT_EQ(s1.relational_triples, 2u);
  EXPECT_EQ(s1.attribute_triples, 2u);
  EXPECT_EQ(s1.entities, 3u);
  EXPECT_EQ(s1.literals, 2u);
  EXPECT_EQ(s1.relations, 4u);
  KgStats s2 = Stats(bundle.kg2);
  EXPECT_EQ(s2.relational_triples, 1u);
  EXPECT_EQ(s2.attribute_triples, 1u);
  EXPECT_EQ(bundle.gold_entity_links.size(), 2u);
  EXPECT_TRUE(bundle.warnings.empty());
}

TEST(LoadOpenEaDirTest, MissingFileIsNamed) {
  ScratchDir dir;
  WriteOpenEa(dir, false);
  std::filesystem::remove(dir.path() / "attr_triples_2");
  try {
    LoadOpenEaDir(dir.path().string());
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("attr_triples_2"), std::string::npos);
  }
}

TEST(LoadOpenEaDirTest, EmptyRelationalFilesWarn) {
  ScratchDir dir;
  WriteOpenEa(dir, true);
  DatasetBundle bundle = LoadOpenEaDir(dir.path().string());
  EXPECT_EQ(Stats(bundle.kg1).relational_triples, 0u);
  EXPECT_EQ(Stats(bundle.kg2).relational_triples, 0u);
  EXPECT_EQ(bundle.gold_entity_links.size(), 2u);
  size_t no_rel = 0;
  for (const auto& w : bundle.warnings) {
    no_rel += w.find("no relational triples") != std::string::npos;
  }
  EXPECT_EQ(no_rel, 2u);
}

TEST(LoadOpenEaDirTest, UnknownGoldLabelsWarn) {
  ScratchDir dir;
  WriteOpenEa(dir, false);
  dir.Write("ent_links", "a\tA\nghost\tB\n");
  DatasetBundle bundle = LoadOpenEaDir(dir.path().string());
  EXPECT_EQ(bundle.gold_entity_links.size(), 2u);
  ASSERT_EQ(bundle.warnings.size(), 1u);
  EXPECT_NE(bundle.warnings[0].find("1 links"), std::string::npos);
}

TEST(SeedLinksTest, UnknownLabelsSkippedWithWarning) {
  ScratchDir dir;
  WriteOpenEa(dir, false);
  DatasetBundle bundle = LoadOpenEaDir(dir.path().string());
  LoadSeedLinks(dir.Write("seeds", "a\tA\nzz\tB\n"), bundle);
  EXPECT_EQ(bundle.seed_links, (std::vector<LabelPair>{{"a", "A"}}));
  ASSERT_EQ(bundle.warnings.size(), 1u);
  EXPECT_NE(bundle.warnings[0].find("zz"), std::string::npos);
}

TEST(SeedLinksTest, EmptyFileMeansNoSeeds) {
  ScratchDir dir;
  WriteOpenEa(dir, false);
  DatasetBundle bundle = LoadOpenEaDir(dir.path().string());
  LoadSeedLinks(dir.Write("seeds", ""), bundle);
  EXPECT_TRUE(bundle.seed_links.empty());
  EXPECT_TRUE(bundle.warnings.empty());
}

// Label-level view of a KG: facts with labels, plus literal kinds.
std::multiset<std::string> Canonical(const KnowledgeGraph& kg) {
  std::multiset<std::string> out;
  for (const Triple& t : kg.triples()) {
    std::string tail = kg.label(t.tail);
    if (const LiteralValue* lit = kg.literal(t.tail)) {
      tail = "lit:" + std::to_string(static_cast<int>(lit->type)) + ":" +
             lit->Key();
    }
    out.insert(kg.label(t.head) + "|" + kg.label(t.relation) + "|" + tail);
  }
  for (uint32_t i = 0; i < kg.num_entities(); ++i) {
    EntityId e{i};
    if (kg.is_literal(e)) continue;
    std::string facts;
    for (const Fact& f : kg.IncidentFacts(e)) {
      facts += kg.label(f.relation) + ">" + kg.label(f.head) + ";";
    }
    out.insert("in:" + kg.label(e) + ":" + facts);
  }
  return out;
}

TEST(RoundTripTest, WriteAndReloadIsIsomorphic) {
  testing::SyntheticOptions options;
  options.entities = 60;
  options.relational_triples = 200;
  options.attribute_triples = 80;
  auto data = testing::MakeSynthetic(options);
  for (const KnowledgeGraph* kg : {&data.bundle.kg1, &data.bundle.kg2}) {
    ScratchDir dir;
    WriteTripleFiles(*kg, dir.File("rel"), dir.File("attr"));
    DatasetBundle reloaded =
        LoadTriplePair(dir.File("rel"), dir.File("attr"), dir.File("rel"),
                       dir.File("attr"));
    KgStats a = Stats(*kg);
    KgStats b = Stats(reloaded.kg1);
    EXPECT_EQ(a.entities, b.entities);
    EXPECT_EQ(a.literals, b.literals);
    EXPECT_EQ(a.relations, b.relations);
    EXPECT_EQ(a.relational_triples, b.relational_triples);
    EXPECT_EQ(a.attribute_triples, b.attribute_triples);
    EXPECT_EQ(Canonical(*kg), Canonical(reloaded.kg1));
  }
}

}  // namespace
}  // namespace flora
