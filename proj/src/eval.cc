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

#include "flora/eval.h"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "flora/report_io.h"

namespace flora {
namespace {

double F1(double p, double r) { return p + r == 0 ? 0.0 : 2 * p * r / (p + r); }

std::unordered_map<std::string, std::vector<const ScoredPair*>> BySource(
    std::span<const ScoredPair> scored) {
  std::unordered_map<std::string, std::vector<const ScoredPair*>> lists;
  for (const ScoredPair& p : scored) lists[p.left].push_back(&p);
  return lists;
}

std::map<std::string, std::string> GoldTargets(
    std::span<const LabelPair> gold) {
  std::map<std::string, std::string> targets;
  for (const LabelPair& g : gold) targets.emplace(g.left, g.right);
  return targets;
}

}  // namespace

Classification ClassificationMetrics(std::span<const LabelPair> predicted,
                                     std::span<const LabelPair> gold) {
  if (gold.empty()) throw std::invalid_argument("empty gold standard");
  std::set<LabelPair> pred(predicted.begin(), predicted.end());
  std::set<LabelPair> truth(gold.begin(), gold.end());
  Classification c;
  c.predicted = pred.size();
  c.gold = truth.size();
  for (const LabelPair& p : pred) c.correct += truth.count(p);
  c.precision = c.predicted == 0 ? 0.0
                                 : static_cast<double>(c.correct) /
                                       static_cast<double>(c.predicted);
  c.recall = static_cast<double>(c.correct) / static_cast<double>(c.gold);
  c.f1 = F1(c.precision, c.recall);
  return c;
}

RankingResult RankingMetrics(std::span<const ScoredPair> scored,
                             std::span<const LabelPair> gold,
                             std::span<const int> ks) {
  auto lists = BySource(scored);
  auto targets = GoldTargets(gold);
  RankingResult result;
  for (const auto& [source, list] : lists) {
    if (!targets.count(source)) ++result.excluded;
  }
  std::map<int, size_t> hits;
  for (int k : ks) hits[k] = 0;
  double reciprocal_sum = 0;
  for (const auto& [source, target] : targets) {
    ++result.sources;
    auto it = lists.find(source);
    if (it == lists.end()) continue;
    const ScoredPair* hit = nullptr;
    for (const ScoredPair* p : it->second) {
      if (p->right == target && (hit == nullptr || p->score > hit->score)) {
        hit = p;
      }
    }
    if (hit == nullptr) continue;
    size_t rank = 1;
    for (const ScoredPair* p : it->second) {
      if (p->right != target && p->score > hit->score) ++rank;
    }
    reciprocal_sum += 1.0 / static_cast<double>(rank);
    for (auto& [k, count] : hits) {
      if (rank <= static_cast<size_t>(k)) ++count;
    }
  }
  double n = static_cast<double>(result.sources);
  for (const auto& [k, count] : hits) {
    result.hit_at[k] = n == 0 ? 0.0 : static_cast<double>(count) / n;
  }
  result.mrr = n == 0 ? 0.0 : reciprocal_sum / n;
  return result;
}

double TopOnePrecision(std::span<const ScoredPair> scored,
                       std::span<const LabelPair> gold) {
  auto targets = GoldTargets(gold);
  if (targets.empty()) return 0;
  std::unordered_map<std::string, double> best;
  for (const ScoredPair& p : scored) {
    auto [it, inserted] = best.try_emplace(p.left, p.score);
    if (!inserted) it->second = std::max(it->second, p.score);
  }
  std::set<LabelPair> top;
  for (const ScoredPair& p : scored) {
    if (p.score == best[p.left]) top.insert({p.left, p.right});
  }
  size_t correct = 0;
  for (const auto& [source, target] : targets) {
    correct += top.count({source, target});
  }
  return static_cast<double>(correct) / static_cast<double>(targets.size());
}

std::string_view ToString(Category category) {
  switch (category) {
    case Category::kClass:
      return "class";
    case Category::kRelation:
      return "relation";
    case Category::kInstance:
      return "instance";
    case Category::kUncategorized:
      return "uncategorized";
  }
  return "uncategorized";
}

Category Categorize(const std::string& label, const KnowledgeGraph& kg) {
  if (kg.FindRelation(label)) return Category::kRelation;
  auto entity = kg.FindEntity(label);
  if (!entity) return Category::kUncategorized;
  return kg.kind(*entity) == EntityKind::kClass ? Category::kClass
                                                : Category::kInstance;
}

std::map<Category, Classification> CategoryBreakdown(
    std::span<const LabelPair> predicted, std::span<const LabelPair> gold,
    const KnowledgeGraph& kg) {
  std::map<Category, std::vector<LabelPair>> pred, truth;
  for (const LabelPair& p : predicted) {
    pred[Categorize(p.left, kg)].push_back(p);
  }
  for (const LabelPair& g : gold) truth[Categorize(g.left, kg)].push_back(g);
  std::map<Category, Classification> out;
  for (const auto& [category, pairs] : truth) {
    out[category] = ClassificationMetrics(pred[category], pairs);
  }
  return out;
}

std::string FormatEvalReport(const EvalReport& report) {
  std::string out;
  auto line = [&](const std::string& key, const std::string& value) {
    out += key + '\t' + value + '\n';
  };
  auto block = [&](const std::string& prefix, const Classification& c) {
    line(prefix + "precision", FormatScore(c.precision));
    line(prefix + "recall", FormatScore(c.recall));
    line(prefix + "f1", FormatScore(c.f1));
    line(prefix + "correct", std::to_string(c.correct));
    line(prefix + "predicted", std::to_string(c.predicted));
    line(prefix + "gold", std::to_string(c.gold));
  };
  block("", report.overall);
  if (report.ranking) {
    for (const auto& [k, v] : report.ranking->hit_at) {
      line("hit@" + std::to_string(k), FormatScore(v));
    }
    line("mrr", FormatScore(report.ranking->mrr));
    line("ranking_sources", std::to_string(report.ranking->sources));
    line("ranking_excluded", std::to_string(report.ranking->excluded));
  }
  for (const auto& [category, c] : report.per_category) {
    block(std::string(ToString(category)) + ".", c);
  }
  return out;
}

}  // namespace flora
