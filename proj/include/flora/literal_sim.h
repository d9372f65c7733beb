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

#ifndef FLORA_LITERAL_SIM_H_
#define FLORA_LITERAL_SIM_H_

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flora/kg.h"
#include "flora/parallel.h"

namespace flora {

// 1 when both are dates with the same calendar day (and the same time if
// both carry one), else 0.
double MatchDates(const LiteralValue& a, const LiteralValue& b);
// 1 when |a - b| <= 1e-9 * max(|a|, |b|), else 0. Non-finite input gives 0.
double MatchNumbers(double a, double b);
// Case-folded, whitespace-collapsed form used by the trigram provider.
std::string NormalizeString(std::string_view s);
// Jaccard overlap of the character 3-gram multisets of the normalized
// strings. Strings shorter than three bytes count as a single gram.
double TrigramSimilarity(std::string_view a, std::string_view b);
// Score for any two literals; different types never match.
double LiteralSimilarity(const LiteralValue& a, const LiteralValue& b);

// Sparse, immutable-after-build map from (KG1 literal, KG2 literal) to a
// score in (0, 1]. Absent pairs score 0.
class LiteralSimTable {
 public:

  LiteralSimTable() = default;
  LiteralSimTable(std::string provider, double theta_s)
      : provider_(std::move(provider)), theta_s_(theta_s) {}

  double Score(EntityId left, EntityId right) const;
  // Keeps the larger score if the pair is already present.
  void Set(EntityId left, EntityId right, double score);

  std::span<const std::pair<EntityId, double>> Row(EntityId left) const;
  size_t num_rows() const { return rows_.size(); }
  size_t size() const { return size_; }

  const std::string& provider() const { return provider_; }
  double theta_s() const { return theta_s_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  void AddWarning(std::string warning) {
    warnings_.push_back(std::move(warning));
  }

 private:
  std::string provider_ = "none";
  double theta_s_ = 0.7;
  std::vector<std::vector<std::pair<EntityId, double>>> rows_;
  size_t size_ = 0;
  std::vector<std::string> warnings_;
};

struct LiteralSimOptions {
  double theta_s = 0.7;
  int top_k = 10;
  // Empty selects the builtin trigram provider; otherwise a TSV of
  // literal1<TAB>literal2<TAB>score rows.
  std::string precomputed_path;
};

// String pairs only: for every KG1 string, its top_k KG2 strings scoring at
// least theta_s under the trigram provider.
void AddTrigramStrings(const KnowledgeGraph& kg1, const KnowledgeGraph& kg2,
                       double theta_s, int top_k, Execution execution,
                       LiteralSimTable& table);

// String pairs from a precomputed file. Rows naming unknown literals, or
// non-string literals, are skipped with a warning. Throws
// std::runtime_error when the file cannot be read.
void AddPrecomputedStrings(const std::string& path, const KnowledgeGraph& kg1,
                           const KnowledgeGraph& kg2, double theta_s,
                           int top_k, LiteralSimTable& table);

// Exact date and number matches.
void AddDatesAndNumbers(const KnowledgeGraph& kg1, const KnowledgeGraph& kg2,
                        LiteralSimTable& table);

LiteralSimTable BuildLiteralTable(const KnowledgeGraph& kg1,
                                  const KnowledgeGraph& kg2,
                                  const LiteralSimOptions& options,
                                  Execution execution = Execution::kParallel);

}  // namespace flora

#endif  // FLORA_LITERAL_SIM_H_
