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

#ifndef FLORA_EXPLAIN_H_
#define FLORA_EXPLAIN_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "flora/kg.h"
#include "flora/rule_instance.h"

namespace flora {

struct EvidenceLine {
  std::string relation;
  std::string relation2;
  double rel_score = 0;
  std::string head;
  std::string head2;
  double head_score = 0;
  bool literal_head = false;
};

struct FunValue {
  double value = 1;
  std::string mode = "exact";  // "exact" or "sampled"
  int samples = 0;
};

// A stored match together with the rule firing that justifies it.
struct Explanation {
  std::string left;
  std::string right;
  double strength = 0;
  bool seed = false;      // fixed by training data, no rule behind it
  bool reported = false;  // part of the final one-to-one alignment
  std::vector<EvidenceLine> evidence;
  double head_mean = 0;
  double rel_mean = 0;
  FunValue fun_list;
  FunValue fun_local;
  FunValue fun_list2;
  FunValue fun_local2;
};

Explanation MakeExplanation(const RuleInstance& rule, const KnowledgeGraph& kg1,
                            const KnowledgeGraph& kg2);
Explanation MakeSeedExplanation(std::string left, std::string right);

// Re-evaluates the entity rule from the recorded evidence: head and
// relation harmonic means, then the minimum with the four functionality
// values. Seeds give 1.
double RecomputeStrength(const Explanation& explanation);

// Multi-line plain-text justification, evidence in descending contribution
// order.
std::string RenderText(const Explanation& explanation);

enum class ExplainStatus { kFound, kNotReported, kNeverScored };

struct ExplainResult {
  ExplainStatus status = ExplainStatus::kNeverScored;
  // Set for kFound, and for kNotReported when the pair is still stored.
  std::optional<Explanation> explanation;
  std::optional<double> best_score;  // for kNotReported
};

// Explanations of every stored pair plus the best score of every pair ever
// scored, which separates "scored but not reported" from "never scored".
class ExplanationStore {
 public:
  void Add(Explanation explanation);
  void AddScored(const std::string& left, const std::string& right,
               double score);

  ExplainResult Lookup(const std::string& left, const std::string& right) const;
  std::vector<const Explanation*> Reported() const;
  const std::vector<Explanation>& all() const { return records_; }

 private:
  std::vector<Explanation> records_;
  std::map<std::pair<std::string, std::string>, size_t> by_pair_;
  std::map<std::pair<std::string, std::string>, double> scored_;
};

// Line-delimited JSON, one record per explanation.
std::string ToJsonLine(const Explanation& explanation);
Explanation FromJsonLine(const std::string& line);

}  // namespace flora

#endif  // FLORA_EXPLAIN_H_
