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

#ifndef FLORA_INGEST_H_
#define FLORA_INGEST_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flora/kg.h"

namespace flora {

// Bad or unreadable input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LiteralMode { kRelational, kAttribute };

struct IngestOptions {
  // Relation labels whose objects are marked as classes.
  std::vector<std::string> type_relations = {
      "type", "rdf:type", "http://www.w3.org/1999/02/22-rdf-syntax-ns#type",
      "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>"};
  // Above this fraction of malformed lines a file is rejected.
  double max_malformed_fraction = 0.01;
};

struct ParseReport {
  size_t lines = 0;  // non-blank lines
  size_t added = 0;
  size_t duplicates = 0;
  std::vector<std::string> diagnostics;  // one entry per malformed line
};

// Reads head<TAB>relation<TAB>tail lines into `kg`. In attribute mode the
// tail becomes a typed literal. Throws DataError if the file cannot be read
// or more than max_malformed_fraction of its lines are malformed.
ParseReport ParseTripleFile(const std::string& path, LiteralMode mode,
                            KnowledgeGraph& kg,
                            const IngestOptions& options = {});
ParseReport ParseTriples(std::istream& in, const std::string& source,
                         LiteralMode mode, KnowledgeGraph& kg,
                         const IngestOptions& options = {});

struct LabelPair {
  std::string left;
  std::string right;

  auto operator<=>(const LabelPair&) const = default;
};

enum class RelationOp { kSub, kSup, kEqv };
std::string_view ToString(RelationOp op);
std::optional<RelationOp> ParseRelationOp(std::string_view text);

struct RelationLink {
  std::string left;
  RelationOp op;
  std::string right;

  auto operator<=>(const RelationLink&) const = default;
};

struct KgStats {
  size_t entities = 0;  // instances and classes
  size_t literals = 0;
  size_t relations = 0;  // declared relations, inverses not counted
  size_t relational_triples = 0;
  size_t attribute_triples = 0;
};
KgStats Stats(const KnowledgeGraph& kg);

struct DatasetBundle {
  KnowledgeGraph kg1{"kg1"};
  KnowledgeGraph kg2{"kg2"};
  std::vector<LabelPair> gold_entity_links;
  std::vector<RelationLink> gold_relation_links;
  std::vector<LabelPair> seed_links;
  std::vector<std::string> warnings;
};

// Two-column TSV. Throws DataError if unreadable or a line is malformed.
std::vector<LabelPair> ReadLinks(const std::string& path);
// label1<TAB>op<TAB>label2 with op in {SUB, SUP, EQV}.
std::vector<RelationLink> ReadRelationLinks(const std::string& path);

// Loads rel_triples_{1,2}, attr_triples_{1,2} and ent_links from an
// OpenEA-style directory.
DatasetBundle LoadOpenEaDir(const std::string& dir,
                            const IngestOptions& options = {});

// Loads a plain pair of KGs: relational files plus optional attribute files
// (empty path = none).
DatasetBundle LoadTriplePair(const std::string& rel1, const std::string& attr1,
                             const std::string& rel2, const std::string& attr2,
                             const IngestOptions& options = {});

// Attaches seed links; labels that do not resolve in their KG are skipped
// with a warning.
void LoadSeedLinks(const std::string& path, DatasetBundle& bundle);
void AddSeedLinks(std::vector<LabelPair> links, DatasetBundle& bundle);

// Writes relational and attribute triples back out in the input format.
void WriteTripleFiles(const KnowledgeGraph& kg, const std::string& rel_path,
                      const std::string& attr_path);

}  // namespace flora

#endif  // FLORA_INGEST_H_
