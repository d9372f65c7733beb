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

#ifndef FLORA_ENGINE_H_
#define FLORA_ENGINE_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "flora/config.h"
#include "flora/explain.h"
#include "flora/functionality.h"
#include "flora/ingest.h"
#include "flora/kg.h"
#include "flora/literal_sim.h"
#include "flora/parallel.h"
#include "flora/rule_instance.h"

namespace flora {

// Sparse entity and relation scores. Entity rows are indexed by KG1
// entity; literal pairs and seeds are fixed entries that never change.
// A relation pair's similarity is the bootstrap constant until a
// subrelation step scores it, then max(sub(r, r'), sub(r', r)).
class MatchStore {
 public:
  struct Entry {
    EntityId right;
    double score;
    bool fixed;
    std::shared_ptr<const RuleInstance> rule;
  };

  MatchStore() = default;
  MatchStore(size_t left_count, double theta_r)
      : rows_(left_count), theta_r_(theta_r) {}

  double Score(EntityId left, EntityId right) const;
  const Entry* Find(EntityId left, EntityId right) const;
  std::span<const Entry> Row(EntityId left) const;
  size_t num_rows() const { return rows_.size(); }
  size_t size() const;

  // Fixed entries keep the larger of two scores if set twice.
  void SetFixed(EntityId left, EntityId right, double score);
  // Max-merge. Returns the increase; fixed entries are left alone. At an
  // equal score the rule with more matched positions is kept.
  double Raise(EntityId left, EntityId right, double score,
               std::shared_ptr<const RuleInstance> rule);
  // Drops every non-fixed entry for which `keep` is false.
  template <typename Keep>
  size_t Prune(Keep&& keep);

  // Sum over non-fixed entity entries.
  double EntityTotal() const;

  // Directed subrelation scores. sub12 is keyed (KG1 relation, KG2
  // relation), sub21 (KG2 relation, KG1 relation).
  double Sub12(RelationId r1, RelationId r2) const;
  double Sub21(RelationId r2, RelationId r1) const;
  double RaiseSub12(RelationId r1, RelationId r2, double score);
  double RaiseSub21(RelationId r2, RelationId r1, double score);
  const std::unordered_map<uint64_t, double>& sub12() const { return sub12_; }
  const std::unordered_map<uint64_t, double>& sub21() const { return sub21_; }
  double SubTotal() const;

  double RelSim(RelationId r1, RelationId r2) const;
  double theta_r() const { return theta_r_; }

  static uint64_t Key(uint32_t a, uint32_t b) {
    return (static_cast<uint64_t>(a) << 32) | b;
  }

 private:
  std::vector<std::vector<Entry>> rows_;
  std::unordered_map<uint64_t, double> sub12_;
  std::unordered_map<uint64_t, double> sub21_;
  double theta_r_ = 0.1;
};

template <typename Keep>
size_t MatchStore::Prune(Keep&& keep) {
  size_t removed = 0;
  for (size_t l = 0; l < rows_.size(); ++l) {
    auto& row = rows_[l];
    size_t before = row.size();
    std::erase_if(row, [&](const Entry& e) {
      return !e.fixed && !keep(EntityId(static_cast<uint32_t>(l)), e);
    });
    removed += before - row.size();
  }
  return removed;
}

struct EntityMatch {
  std::string left;
  std::string right;
  double score = 0;
  bool seed = false;
};

struct RelationMatch {
  std::string left;
  std::string right;
  double sub12 = 0;  // left is a subrelation of right
  double sub21 = 0;  // right is a subrelation of left
  // EQV when both directions reach the report threshold, SUB or SUP when
  // only one does, unset otherwise.
  std::optional<RelationOp> op;
};

struct ScoredPair {
  std::string left;
  std::string right;
  double score = 0;
};

struct AlignmentReport {
  Config config;
  std::string literal_provider;
  size_t literal_pairs = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> deltas;  // per iteration
  // Descending score, then labels.
  std::vector<EntityMatch> entities;
  // Every relation pair with a positive score in either direction.
  std::vector<RelationMatch> relations;
  // Best score ever reached by every scored non-literal pair, including
  // pairs later pruned. Grouped by left label, descending score.
  std::vector<ScoredPair> ranking;
  ExplanationStore explanations;
};

// The alignment loop: literal and seed initialization, then alternating
// entity and subrelation steps with optional mutual-best pruning, until the
// total score changes by less than epsilon.
class Aligner {
 public:
  Aligner(const DatasetBundle& bundle, const LiteralSimTable& literals,
          Config config);

  // Resets the store to literal pairs and seeds.
  void Initialize();

  // KG2 entities sharing matched facts with t, best first, at most
  // candidate_cap of them.
  std::vector<EntityId> CandidateSearch(EntityId t) const;
  // Strongest entity-rule firing for (t, t'), the longest prefix on ties;
  // strength 0 when no fact pair matches.
  RuleInstance EvaluatePair(EntityId t, EntityId t2) const;

  // Returns the summed score increase.
  double EntityStep(Execution execution = Execution::kParallel);
  double SubrelationStep(Execution execution = Execution::kParallel);
  // Keeps entries that are maximal in both their row and column. Returns
  // the number of entries dropped.
  size_t MaxAssignment();

  AlignmentReport Run(Execution execution = Execution::kParallel);
  AlignmentReport MakeReport() const;

  const MatchStore& store() const { return store_; }
  MatchStore& mutable_store() { return store_; }
  const Config& config() const { return config_; }
  const KnowledgeGraph& kg1() const { return kg1_; }
  const KnowledgeGraph& kg2() const { return kg2_; }
  const FunctionalityCache& fun1() const { return fun1_; }
  const FunctionalityCache& fun2() const { return fun2_; }
  // Called after each iteration of Run with the iteration number.
  void set_iteration_hook(std::function<void(int, const Aligner&)> hook) {
    hook_ = std::move(hook);
  }

 private:
  struct Update {
    EntityId right;
    std::shared_ptr<const RuleInstance> rule;
  };
  void EvaluateEntity(EntityId t, std::vector<Update>& out) const;
  void RecordScored(EntityId left, EntityId right, double score);

  const KnowledgeGraph& kg1_;
  const KnowledgeGraph& kg2_;
  const DatasetBundle& bundle_;
  const LiteralSimTable& literals_;
  Config config_;
  FunctionalityCache fun1_;
  FunctionalityCache fun2_;
  MatchStore store_;
  std::unordered_map<uint64_t, double> scored_;
  int iterations_ = 0;
  bool converged_ = false;
  std::vector<double> deltas_;
  std::function<void(int, const Aligner&)> hook_;
};

// Builds the literal table and runs the whole pipeline.
AlignmentReport RunAlignment(const DatasetBundle& bundle, const Config& config,
                             const std::string& similarity_file = "",
                             Execution execution = Execution::kParallel);

}  // namespace flora

#endif  // FLORA_ENGINE_H_
