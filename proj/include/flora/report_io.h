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

#ifndef FLORA_REPORT_IO_H_
#define FLORA_REPORT_IO_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "flora/config.h"
#include "flora/engine.h"
#include "flora/explain.h"

namespace flora {

// File names inside a run directory.
inline constexpr char kEntitiesFile[] = "entities.tsv";
inline constexpr char kRelationsFile[] = "relations.tsv";
inline constexpr char kRankingFile[] = "ranking.tsv";
inline constexpr char kExplanationsFile[] = "explanations.jsonl";
inline constexpr char kManifestFile[] = "manifest.json";

// Six decimal places.
std::string FormatScore(double score);

// label1<TAB>label2<TAB>score, in report order.
void WriteEntities(const std::string& path,
                   const std::vector<EntityMatch>& entities);
// label1<TAB>op<TAB>label2<TAB>score12<TAB>score21 for pairs with an op.
void WriteRelations(const std::string& path,
                    const std::vector<RelationMatch>& relations);
// label1<TAB>label2<TAB>score for every pair ever scored.
void WriteRanking(const std::string& path,
                  const std::vector<ScoredPair>& ranking);
void WriteExplanations(const std::string& path,
                       const ExplanationStore& explanations);

// Three-column score files (entities or ranking). Throws DataError.
std::vector<ScoredPair> ReadScoredPairs(const std::string& path);
std::vector<Explanation> ReadExplanations(const std::string& path);

// Explanations and ranking of a finished run directory.
ExplanationStore LoadExplanationStore(const std::string& run_dir);

struct InputDigest {
  std::string role;  // e.g. "kg1", "seeds"
  std::string path;
  std::string sha256;
};

struct RunManifest {
  Config config;
  std::vector<InputDigest> inputs;
  std::string literal_provider;
  size_t literal_pairs = 0;
  int threads = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> deltas;
  std::vector<std::pair<std::string, double>> timings;  // seconds per phase
  size_t entity_matches = 0;
  size_t relation_matches = 0;
  std::vector<std::string> warnings;
};

// Hex SHA-256 of a file's bytes. Throws DataError if unreadable.
std::string Sha256File(const std::string& path);

void WriteManifest(const std::string& path, const RunManifest& manifest);
RunManifest ReadManifest(const std::string& path);

// Writes all outputs of `report` into `dir`, creating it if needed.
void WriteRunDirectory(const std::string& dir, const AlignmentReport& report);

}  // namespace flora

#endif  // FLORA_REPORT_IO_H_
