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

#ifndef FLORA_EVAL_H_
#define FLORA_EVAL_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flora/engine.h"
#include "flora/ingest.h"
#include "flora/kg.h"

namespace flora {

struct Classification {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  size_t correct = 0;
  size_t predicted = 0;
  size_t gold = 0;
};

// Set semantics over label pairs. Throws std::invalid_argument on empty
// gold; empty predictions give precision 0.
Classification ClassificationMetrics(std::span<const LabelPair> predicted,
                                     std::span<const LabelPair> gold);

struct RankingResult {
  std::map<int, double> hit_at;
  double mrr = 0;
  size_t sources = 0;   // gold sources evaluated
  size_t excluded = 0;  // scored sources absent from gold
};

// One candidate list per source, read from `scored` in any order. A gold
// target ranks 1 + the number of candidates scoring strictly higher, so
// tied candidates share the best rank of their block. Missing targets
// contribute 0.
RankingResult RankingMetrics(std::span<const ScoredPair> scored,
                             std::span<const LabelPair> gold,
                             std::span<const int> ks);

// Fraction of gold sources whose gold target is among the top-scoring
// candidates of that source (all tied maxima count as the top-1 mapping).
double TopOnePrecision(std::span<const ScoredPair> scored,
                       std::span<const LabelPair> gold);

enum class Category { kClass, kRelation, kInstance, kUncategorized };
std::string_view ToString(Category category);

Category Categorize(const std::string& label, const KnowledgeGraph& kg);

// Classification metrics per category of the gold pair's left label.
// Predictions are assigned the category of their left label.
std::map<Category, Classification> CategoryBreakdown(
    std::span<const LabelPair> predicted, std::span<const LabelPair> gold,
    const KnowledgeGraph& kg);

struct EvalReport {
  Classification overall;
  std::optional<RankingResult> ranking;
  std::map<Category, Classification> per_category;
};

// key<TAB>value lines, six decimals for rates.
std::string FormatEvalReport(const EvalReport& report);

}  // namespace flora

#endif  // FLORA_EVAL_H_
