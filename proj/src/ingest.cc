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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>

namespace flora {
namespace {

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::string_view StripCr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::ifstream Open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  return in;
}

}  // namespace

std::string_view ToString(RelationOp op) {
  switch (op) {
    case RelationOp::kSub:
      return "SUB";
    case RelationOp::kSup:
      return "SUP";
    case RelationOp::kEqv:
      return "EQV";
  }
  return "?";
}

std::optional<RelationOp> ParseRelationOp(std::string_view text) {
  if (text == "SUB") return RelationOp::kSub;
  if (text == "SUP") return RelationOp::kSup;
  if (text == "EQV") return RelationOp::kEqv;
  return std::nullopt;
}

ParseReport ParseTriples(std::istream& in, const std::string& source,
                         LiteralMode mode, KnowledgeGraph& kg,
                         const IngestOptions& options) {
  ParseReport report;
  std::string raw;
  size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string_view line = StripCr(raw);
    if (line.empty()) continue;
    ++report.lines;
    auto fields = SplitTabs(line);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() ||
        fields[2].empty()) {
      report.diagnostics.push_back(source + ":" + std::to_string(number) +
                                   ": expected 3 non-empty tab-separated "
                                   "fields");
      continue;
    }
    bool added = false;
    if (mode == LiteralMode::kAttribute) {
      added = kg.AddAttribute(fields[0], fields[1], fields[2]);
    } else {
      added = kg.AddTriple(fields[0], fields[1], fields[2]);
      if (std::find(options.type_relations.begin(),
                    options.type_relations.end(),
                    fields[1]) != options.type_relations.end()) {
        kg.MarkClass(*kg.FindEntity(fields[2]));
      }
    }
    ++(added ? report.added : report.duplicates);
  }
  if (report.lines > 0 &&
      static_cast<double>(report.diagnostics.size()) >
          options.max_malformed_fraction * static_cast<double>(report.lines)) {
    std::string message = source + ": " +
                          std::to_string(report.diagnostics.size()) + " of " +
                          std::to_string(report.lines) +
                          " lines malformed; first: " +
                          report.diagnostics.front();
    throw DataError(message);
  }
  return report;
}

ParseReport ParseTripleFile(const std::string& path, LiteralMode mode,
                            KnowledgeGraph& kg, const IngestOptions& options) {
  std::ifstream in = Open(path);
  return ParseTriples(in, path, mode, kg, options);
}

KgStats Stats(const KnowledgeGraph& kg) {
  KgStats stats;
  for (uint32_t i = 0; i < kg.num_entities(); ++i) {
    ++(kg.is_literal(EntityId(i)) ? stats.literals : stats.entities);
  }
  stats.relations = kg.num_relations() / 2;
  stats.attribute_triples = kg.num_literal_triples();
  stats.relational_triples = kg.num_triples() - kg.num_literal_triples();
  return stats;
}

std::vector<LabelPair> ReadLinks(const std::string& path) {
  std::ifstream in = Open(path);
  std::vector<LabelPair> links;
  std::string raw;
  size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string_view line = StripCr(raw);
    if (line.empty()) continue;
    auto fields = SplitTabs(line);
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty()) {
      throw DataError(path + ":" + std::to_string(number) +
                      ": expected label1<TAB>label2");
    }
    links.push_back({std::string(fields[0]), std::string(fields[1])});
  }
  return links;
}

std::vector<RelationLink> ReadRelationLinks(const std::string& path) {
  std::ifstream in = Open(path);
  std::vector<RelationLink> links;
  std::string raw;
  size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string_view line = StripCr(raw);
    if (line.empty()) continue;
    auto fields = SplitTabs(line);
    std::optional<RelationOp> op;
    if (fields.size() >= 3) op = ParseRelationOp(fields[1]);
    if (!op) {
      throw DataError(path + ":" + std::to_string(number) +
                      ": expected label1<TAB>SUB|SUP|EQV<TAB>label2");
    }
    links.push_back(
        {std::string(fields[0]), *op, std::string(fields[2])});
  }
  return links;
}

namespace {

void CheckLinks(DatasetBundle& bundle, const std::vector<LabelPair>& links,
                const std::string& what) {
  size_t missing = 0;
  for (const LabelPair& link : links) {
    if (!bundle.kg1.FindEntity(link.left) ||
        !bundle.kg2.FindEntity(link.right)) {
      ++missing;
    }
  }
  if (missing > 0) {
    bundle.warnings.push_back(what + ": " + std::to_string(missing) +
                              " links name unknown entities");
  }
}

void LoadSide(const std::string& rel, const std::string& attr,
              KnowledgeGraph& kg, DatasetBundle& bundle,
              const IngestOptions& options) {
  ParseReport report = ParseTripleFile(rel, LiteralMode::kRelational, kg,
                                       options);
  if (report.added == 0) {
    bundle.warnings.push_back(rel + ": no relational triples");
  }
  for (auto& d : report.diagnostics) bundle.warnings.push_back(std::move(d));
  if (!attr.empty()) {
    ParseReport attrs =
        ParseTripleFile(attr, LiteralMode::kAttribute, kg, options);
    for (auto& d : attrs.diagnostics) bundle.warnings.push_back(std::move(d));
  }
}

}  // namespace

DatasetBundle LoadOpenEaDir(const std::string& dir,
                            const IngestOptions& options) {
  namespace fs = std::filesystem;
  const char* names[] = {"rel_triples_1", "rel_triples_2", "attr_triples_1",
                         "attr_triples_2", "ent_links"};
  for (const char* name : names) {
    if (!fs::is_regular_file(fs::path(dir) / name)) {
      throw DataError("missing " + (fs::path(dir) / name).string());
    }
  }
  auto path = [&](const char* name) { return (fs::path(dir) / name).string(); };
  DatasetBundle bundle;
  LoadSide(path("rel_triples_1"), path("attr_triples_1"), bundle.kg1, bundle,
           options);
  LoadSide(path("rel_triples_2"), path("attr_triples_2"), bundle.kg2, bundle,
           options);
  bundle.gold_entity_links = ReadLinks(path("ent_links"));
  CheckLinks(bundle, bundle.gold_entity_links, "ent_links");
  return bundle;
}

DatasetBundle LoadTriplePair(const std::string& rel1, const std::string& attr1,
                             const std::string& rel2, const std::string& attr2,
                             const IngestOptions& options) {
  DatasetBundle bundle;
  LoadSide(rel1, attr1, bundle.kg1, bundle, options);
  LoadSide(rel2, attr2, bundle.kg2, bundle, options);
  return bundle;
}

void AddSeedLinks(std::vector<LabelPair> links, DatasetBundle& bundle) {
  for (LabelPair& link : links) {
    if (!bundle.kg1.FindEntity(link.left) ||
        !bundle.kg2.FindEntity(link.right)) {
      bundle.warnings.push_back("seed " + link.left + " / " + link.right +
                                ": unknown entity, skipped");
      continue;
    }
    bundle.seed_links.push_back(std::move(link));
  }
}

void LoadSeedLinks(const std::string& path, DatasetBundle& bundle) {
  AddSeedLinks(ReadLinks(path), bundle);
}

void WriteTripleFiles(const KnowledgeGraph& kg, const std::string& rel_path,
                      const std::string& attr_path) {
  std::ofstream rel(rel_path);
  std::ofstream attr(attr_path);
  if (!rel || !attr) {
    throw DataError("cannot write " + rel_path + " / " + attr_path);
  }
  for (const Triple& t : kg.triples()) {
    if (kg.is_literal(t.tail)) {
      attr << kg.label(t.head) << '\t' << kg.label(t.relation) << "\t\""
           << kg.label(t.tail) << "\"\n";
    } else {
      rel << kg.label(t.head) << '\t' << kg.label(t.relation) << '\t'
          << kg.label(t.tail) << '\n';
    }
  }
}

}  // namespace flora
