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

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "flora/fis.h"
#include "json.hpp"

namespace flora {
namespace {

FunValue ToFunValue(const FunEstimate& f) {
  FunValue v;
  v.value = f.value;
  v.mode = f.mode == FunEstimate::Mode::kExact ? "exact" : "sampled";
  v.samples = f.sample_count;
  return v;
}

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string FunText(const FunValue& f) {
  std::string s = Fixed(f.value) + " (" + f.mode;
  if (f.mode == "sampled") s += ", " + std::to_string(f.samples) + " samples";
  return s + ")";
}

nlohmann::json FunJson(const FunValue& f) {
  return {{"value", f.value}, {"mode", f.mode}, {"samples", f.samples}};
}

FunValue FunFromJson(const nlohmann::json& j) {
  FunValue f;
  f.value = j.at("value").get<double>();
  f.mode = j.at("mode").get<std::string>();
  f.samples = j.value("samples", 0);
  return f;
}

}  // namespace

Explanation MakeExplanation(const RuleInstance& rule, const KnowledgeGraph& kg1,
                            const KnowledgeGraph& kg2) {
  Explanation e;
  e.left = kg1.label(rule.left);
  e.right = kg2.label(rule.right);
  e.strength = rule.strength;
  for (const MatchedFact& m : rule.positions) {
    e.evidence.push_back({kg1.label(m.relation), kg2.label(m.relation2),
                          m.rel_score, kg1.label(m.head), kg2.label(m.head2),
                          m.head_score, kg1.is_literal(m.head)});
  }
  e.head_mean = rule.head_mean;
  e.rel_mean = rule.rel_mean;
  e.fun_list = ToFunValue(rule.fun_list);
  e.fun_local = ToFunValue(rule.fun_local);
  e.fun_list2 = ToFunValue(rule.fun_list2);
  e.fun_local2 = ToFunValue(rule.fun_local2);
  return e;
}

Explanation MakeSeedExplanation(std::string left, std::string right) {
  Explanation e;
  e.left = std::move(left);
  e.right = std::move(right);
  e.strength = 1.0;
  e.seed = true;
  e.head_mean = e.rel_mean = 1.0;
  return e;
}

double RecomputeStrength(const Explanation& explanation) {
  if (explanation.seed) return 1.0;
  if (explanation.evidence.empty()) return 0.0;
  std::vector<double> heads, rels;
  for (const EvidenceLine& line : explanation.evidence) {
    heads.push_back(line.head_score);
    rels.push_back(line.rel_score);
  }
  return std::min({fis::HarmonicMean(heads), fis::HarmonicMean(rels),
                   explanation.fun_list.value, explanation.fun_local.value,
                   explanation.fun_list2.value, explanation.fun_local2.value});
}

std::string RenderText(const Explanation& explanation) {
  std::ostringstream out;
  out << explanation.left << " = " << explanation.right << "  score "
      << Fixed(explanation.strength)
      << (explanation.reported ? "  [reported]" : "  [not reported]") << "\n";
  if (explanation.seed) {
    out << "  seed (training data), score 1\n";
    return out.str();
  }
  std::vector<const EvidenceLine*> lines;
  for (const EvidenceLine& line : explanation.evidence) lines.push_back(&line);
  std::stable_sort(lines.begin(), lines.end(), [](auto* a, auto* b) {
    return a->head_score * a->rel_score > b->head_score * b->rel_score;
  });
  out << "  evidence:\n";
  for (const EvidenceLine* line : lines) {
    out << "    " << line->relation << "(" << line->head << ", "
        << explanation.left << ") ~ " << line->relation2 << "("
        << line->head2 << ", " << explanation.right << ")  head "
        << Fixed(line->head_score) << (line->literal_head ? " (literal)" : "")
        << "  relation " << Fixed(line->rel_score) << "\n";
  }
  out << "  head mean      " << Fixed(explanation.head_mean) << "\n"
      << "  relation mean  " << Fixed(explanation.rel_mean) << "\n"
      << "  fun(R)         " << FunText(explanation.fun_list) << "\n"
      << "  fun(R, H)      " << FunText(explanation.fun_local) << "\n"
      << "  fun(R')        " << FunText(explanation.fun_list2) << "\n"
      << "  fun(R', H')    " << FunText(explanation.fun_local2) << "\n";
  return out.str();
}

void ExplanationStore::Add(Explanation explanation) {
  auto key = std::make_pair(explanation.left, explanation.right);
  auto [it, inserted] = by_pair_.try_emplace(key, records_.size());
  if (inserted) {
    records_.push_back(std::move(explanation));
  } else {
    records_[it->second] = std::move(explanation);
  }
  double& best = scored_[key];
  best = std::max(best, records_[by_pair_[key]].strength);
}

void ExplanationStore::AddScored(const std::string& left,
                                 const std::string& right, double score) {
  double& best = scored_[{left, right}];
  best = std::max(best, score);
}

ExplainResult ExplanationStore::Lookup(const std::string& left,
                                       const std::string& right) const {
  ExplainResult result;
  auto key = std::make_pair(left, right);
  auto it = by_pair_.find(key);
  if (it != by_pair_.end()) {
    const Explanation& e = records_[it->second];
    result.explanation = e;
    if (e.reported) {
      result.status = ExplainStatus::kFound;
      return result;
    }
  }
  auto scored = scored_.find(key);
  if (scored != scored_.end() && scored->second > 0) {
    result.status = ExplainStatus::kNotReported;
    result.best_score = scored->second;
    return result;
  }
  if (result.explanation) {
    result.status = ExplainStatus::kNotReported;
    result.best_score = result.explanation->strength;
    return result;
  }
  result.status = ExplainStatus::kNeverScored;
  return result;
}

std::vector<const Explanation*> ExplanationStore::Reported() const {
  std::vector<const Explanation*> out;
  for (const Explanation& e : records_) {
    if (e.reported) out.push_back(&e);
  }
  return out;
}

std::string ToJsonLine(const Explanation& e) {
  nlohmann::json evidence = nlohmann::json::array();
  for (const EvidenceLine& line : e.evidence) {
    evidence.push_back({{"relation", line.relation},
                        {"relation2", line.relation2},
                        {"rel_score", line.rel_score},
                        {"head", line.head},
                        {"head2", line.head2},
                        {"head_score", line.head_score},
                        {"literal_head", line.literal_head}});
  }
  nlohmann::json j = {{"left", e.left},
                      {"right", e.right},
                      {"strength", e.strength},
                      {"seed", e.seed},
                      {"reported", e.reported},
                      {"evidence", evidence},
                      {"head_mean", e.head_mean},
                      {"rel_mean", e.rel_mean},
                      {"fun_list", FunJson(e.fun_list)},
                      {"fun_local", FunJson(e.fun_local)},
                      {"fun_list2", FunJson(e.fun_list2)},
                      {"fun_local2", FunJson(e.fun_local2)}};
  return j.dump();
}

Explanation FromJsonLine(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& ex) {
    throw std::runtime_error(std::string("bad explanation record: ") +
                             ex.what());
  }
  try {
    Explanation e;
    e.left = j.at("left").get<std::string>();
    e.right = j.at("right").get<std::string>();
    e.strength = j.at("strength").get<double>();
    e.seed = j.value("seed", false);
    e.reported = j.value("reported", false);
    for (const auto& item : j.at("evidence")) {
      e.evidence.push_back({item.at("relation").get<std::string>(),
                            item.at("relation2").get<std::string>(),
                            item.at("rel_score").get<double>(),
                            item.at("head").get<std::string>(),
                            item.at("head2").get<std::string>(),
                            item.at("head_score").get<double>(),
                            item.value("literal_head", false)});
    }
    e.head_mean = j.at("head_mean").get<double>();
    e.rel_mean = j.at("rel_mean").get<double>();
    e.fun_list = FunFromJson(j.at("fun_list"));
    e.fun_local = FunFromJson(j.at("fun_local"));
    e.fun_list2 = FunFromJson(j.at("fun_list2"));
    e.fun_local2 = FunFromJson(j.at("fun_local2"));
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw std::runtime_error(std::string("bad explanation record: ") +
                             ex.what());
  }
}

}  // namespace flora
