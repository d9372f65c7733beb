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

#include "flora/engine.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "flora/fis.h"

namespace flora {

// ---------------------------------------------------------------------------
// MatchStore

namespace {

template <typename Row>
auto FindInRow(Row& row, EntityId right) {
  return std::lower_bound(
      row.begin(), row.end(), right,
      [](const auto& e, EntityId id) { return e.right < id; });
}

double Lookup(const std::unordered_map<uint64_t, double>& map, uint64_t key) {
  auto it = map.find(key);
  return it == map.end() ? 0.0 : it->second;
}

double RaiseIn(std::unordered_map<uint64_t, double>& map, uint64_t key,
               double score) {
  if (score <= 0) return 0;
  double& slot = map[key];
  if (score <= slot) return 0;
  double delta = score - slot;
  slot = score;
  return delta;
}

}  // namespace

double MatchStore::Score(EntityId left, EntityId right) const {
  const Entry* e = Find(left, right);
  return e == nullptr ? 0.0 : e->score;
}

const MatchStore::Entry* MatchStore::Find(EntityId left,
                                          EntityId right) const {
  if (Index(left) >= rows_.size()) return nullptr;
  const auto& row = rows_[Index(left)];
  auto it = FindInRow(row, right);
  return it != row.end() && it->right == right ? &*it : nullptr;
}

std::span<const MatchStore::Entry> MatchStore::Row(EntityId left) const {
  if (Index(left) >= rows_.size()) return {};
  return rows_[Index(left)];
}

size_t MatchStore::size() const {
  size_t n = 0;
  for (const auto& row : rows_) n += row.size();
  return n;
}

void MatchStore::SetFixed(EntityId left, EntityId right, double score) {
  if (Index(left) >= rows_.size()) rows_.resize(Index(left) + 1);
  auto& row = rows_[Index(left)];
  auto it = FindInRow(row, right);
  if (it != row.end() && it->right == right) {
    it->score = it->fixed ? std::max(it->score, score) : score;
    it->fixed = true;
    it->rule.reset();
  } else {
    row.insert(it, Entry{right, score, true, nullptr});
  }
}

double MatchStore::Raise(EntityId left, EntityId right, double score,
                         std::shared_ptr<const RuleInstance> rule) {
  if (score <= 0) return 0;
  if (Index(left) >= rows_.size()) rows_.resize(Index(left) + 1);
  auto& row = rows_[Index(left)];
  auto it = FindInRow(row, right);
  if (it != row.end() && it->right == right) {
    if (it->fixed || score < it->score) return 0;
    if (score == it->score) {
      if (rule && (!it->rule ||
                   rule->positions.size() > it->rule->positions.size())) {
        it->rule = std::move(rule);
      }
      return 0;
    }
    double delta = score - it->score;
    it->score = score;
    it->rule = std::move(rule);
    return delta;
  }
  row.insert(it, Entry{right, score, false, std::move(rule)});
  return score;
}

double MatchStore::EntityTotal() const {
  double total = 0;
  for (const auto& row : rows_) {
    for (const Entry& e : row) {
      if (!e.fixed) total += e.score;
    }
  }
  return total;
}

double MatchStore::Sub12(RelationId r1, RelationId r2) const {
  return Lookup(sub12_, Key(Index(r1), Index(r2)));
}

double MatchStore::Sub21(RelationId r2, RelationId r1) const {
  return Lookup(sub21_, Key(Index(r2), Index(r1)));
}

double MatchStore::RaiseSub12(RelationId r1, RelationId r2, double score) {
  return RaiseIn(sub12_, Key(Index(r1), Index(r2)), score);
}

double MatchStore::RaiseSub21(RelationId r2, RelationId r1, double score) {
  return RaiseIn(sub21_, Key(Index(r2), Index(r1)), score);
}

double MatchStore::SubTotal() const {
  double total = 0;
  for (const auto& [key, v] : sub12_) total += v;
  for (const auto& [key, v] : sub21_) total += v;
  return total;
}

double MatchStore::RelSim(RelationId r1, RelationId r2) const {
  auto a = sub12_.find(Key(Index(r1), Index(r2)));
  auto b = sub21_.find(Key(Index(r2), Index(r1)));
  if (a == sub12_.end() && b == sub21_.end()) return theta_r_;
  return std::max(a == sub12_.end() ? 0.0 : a->second,
                  b == sub21_.end() ? 0.0 : b->second);
}

double RecomputeStrength(const RuleInstance& rule) {
  if (rule.positions.empty()) return 0;
  std::vector<double> heads;
  std::vector<double> rels;
  for (const MatchedFact& m : rule.positions) {
    heads.push_back(m.head_score);
    rels.push_back(m.rel_score);
  }
  return std::min({fis::HarmonicMean(heads), fis::HarmonicMean(rels),
                   rule.fun_list.value, rule.fun_local.value,
                   rule.fun_list2.value, rule.fun_local2.value});
}

// ---------------------------------------------------------------------------
// Aligner

namespace {

ListFunOptions FunOptions(const Config& config, uint64_t salt) {
  ListFunOptions options;
  options.exact_cap = config.fun_exact_cap;
  options.budget = config.fun_budget;
  options.seed = config.rng_seed ^ salt;
  return options;
}

}  // namespace

Aligner::Aligner(const DatasetBundle& bundle, const LiteralSimTable& literals,
                 Config config)
    : kg1_(bundle.kg1),
      kg2_(bundle.kg2),
      bundle_(bundle),
      literals_(literals),
      config_(config),
      fun1_(bundle.kg1, FunOptions(config, 0x6b6731)),
      fun2_(bundle.kg2, FunOptions(config, 0x6b6732)) {
  config_.Validate();
  Initialize();
}

void Aligner::Initialize() {
  store_ = MatchStore(kg1_.num_entities(), config_.theta_r);
  for (size_t l = 0; l < literals_.num_rows(); ++l) {
    EntityId left{static_cast<uint32_t>(l)};
    for (const auto& [right, score] : literals_.Row(left)) {
      if (score > 0) store_.SetFixed(left, right, score);
    }
  }
  for (const LabelPair& seed : bundle_.seed_links) {
    auto left = kg1_.FindEntity(seed.left);
    auto right = kg2_.FindEntity(seed.right);
    if (left && right) store_.SetFixed(*left, *right, 1.0);
  }
  scored_.clear();
  deltas_.clear();
  iterations_ = 0;
  converged_ = false;
}

std::vector<EntityId> Aligner::CandidateSearch(EntityId t) const {
  struct Candidate {
    uint32_t count = 0;
    double best = 0;
    size_t last_fact = 0;
  };
  std::unordered_map<uint32_t, Candidate> candidates;
  auto facts = kg1_.IncidentFacts(t);
  for (size_t i = 0; i < facts.size(); ++i) {
    const Fact& f = facts[i];
    for (const MatchStore::Entry& e : store_.Row(f.head)) {
      if (e.score <= 0) continue;
      for (const Fact& g : kg2_.IncidentFacts(e.right)) {
        // g is relation(x, head2), so Inverse(relation)(head2, x) holds.
        EntityId t2 = g.head;
        if (kg2_.is_literal(t2)) continue;
        double rel = store_.RelSim(f.relation, Inverse(g.relation));
        if (rel <= 0) continue;
        Candidate& c = candidates[Index(t2)];
        if (c.last_fact != i + 1) {
          ++c.count;
          c.last_fact = i + 1;
        }
        c.best = std::max(c.best, e.score * rel);
      }
    }
  }
  std::vector<std::pair<EntityId, Candidate>> ranked;
  ranked.reserve(candidates.size());
  for (const auto& [id, c] : candidates) ranked.emplace_back(EntityId(id), c);
  std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) {
      return a.second.count > b.second.count;
    }
    if (a.second.best != b.second.best) return a.second.best > b.second.best;
    return kg2_.label(a.first) < kg2_.label(b.first);
  });
  std::vector<EntityId> result;
  for (const auto& [id, c] : ranked) {
    if (result.size() >= static_cast<size_t>(config_.candidate_cap)) break;
    result.push_back(id);
  }
  return result;
}

RuleInstance Aligner::EvaluatePair(EntityId t, EntityId t2) const {
  RuleInstance best;
  best.left = t;
  best.right = t2;

  auto facts = kg1_.IncidentFacts(t);
  auto facts2 = kg2_.IncidentFacts(t2);
  std::vector<std::pair<EntityId, uint32_t>> by_head;
  by_head.reserve(facts2.size());
  for (uint32_t j = 0; j < facts2.size(); ++j) {
    by_head.emplace_back(facts2[j].head, j);
  }
  std::sort(by_head.begin(), by_head.end());

  struct Candidate {
    uint32_t i;
    uint32_t j;
    double head_score;
    double rel_score;
    double evidence;
  };
  std::vector<Candidate> pairs;
  for (uint32_t i = 0; i < facts.size(); ++i) {
    for (const MatchStore::Entry& e : store_.Row(facts[i].head)) {
      if (e.score <= 0) continue;
      auto lo = std::lower_bound(by_head.begin(), by_head.end(),
                                 std::make_pair(e.right, uint32_t{0}));
      for (auto it = lo; it != by_head.end() && it->first == e.right; ++it) {
        double rel =
            store_.RelSim(facts[i].relation, facts2[it->second].relation);
        if (rel <= 0) continue;
        pairs.push_back({i, it->second, e.score, rel, e.score * rel});
      }
    }
  }
  if (pairs.empty()) return best;
  std::sort(pairs.begin(), pairs.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.evidence != b.evidence) return a.evidence > b.evidence;
              return std::tie(a.i, a.j) < std::tie(b.i, b.j);
            });

  std::vector<bool> used1(facts.size()), used2(facts2.size());
  std::vector<MatchedFact> matched;
  for (const Candidate& c : pairs) {
    if (matched.size() >= static_cast<size_t>(config_.L_max)) break;
    if (used1[c.i] || used2[c.j]) continue;
    used1[c.i] = used2[c.j] = true;
    matched.push_back({facts[c.i].relation, facts[c.i].head,
                       facts2[c.j].relation, facts2[c.j].head, c.head_score,
                       c.rel_score});
  }

  std::vector<Fact> list1, list2;
  std::vector<RelationId> rels1, rels2;
  std::vector<double> heads, rels;
  for (size_t k = 0; k < matched.size(); ++k) {
    const MatchedFact& m = matched[k];
    list1.push_back({m.relation, m.head});
    list2.push_back({m.relation2, m.head2});
    rels1.push_back(m.relation);
    rels2.push_back(m.relation2);
    heads.push_back(m.head_score);
    rels.push_back(m.rel_score);

    double head_mean = fis::HarmonicMean(heads);
    double rel_mean = fis::HarmonicMean(rels);
    double upper = std::min(head_mean, rel_mean);
    // Ties go to the longer prefix.
    if (upper == 0 || upper < best.strength) continue;
    FunEstimate f1 = fun1_.GlobalList(rels1);
    FunEstimate l1 = fun1_.LocalList(list1);
    FunEstimate f2 = fun2_.GlobalList(rels2);
    FunEstimate l2 = fun2_.LocalList(list2);
    double strength = std::min({upper, f1.value, l1.value, f2.value, l2.value});
    if (strength > 0 && strength >= best.strength) {
      best.positions.assign(matched.begin(), matched.begin() + k + 1);
      best.fun_list = f1;
      best.fun_local = l1;
      best.fun_list2 = f2;
      best.fun_local2 = l2;
      best.head_mean = head_mean;
      best.rel_mean = rel_mean;
      best.strength = strength;
    }
  }
  return best;
}

void Aligner::EvaluateEntity(EntityId t, std::vector<Update>& out) const {
  for (EntityId t2 : CandidateSearch(t)) {
    RuleInstance rule = EvaluatePair(t, t2);
    if (rule.strength > 0) {
      out.push_back({t2, std::make_shared<const RuleInstance>(std::move(rule))});
    }
  }
}

void Aligner::RecordScored(EntityId left, EntityId right, double score) {
  double& slot = scored_[MatchStore::Key(Index(left), Index(right))];
  slot = std::max(slot, score);
}

double Aligner::EntityStep(Execution execution) {
  std::vector<EntityId> lefts;
  for (uint32_t i = 0; i < kg1_.num_entities(); ++i) {
    EntityId id{i};
    if (!kg1_.is_literal(id) && !kg1_.IncidentFacts(id).empty()) {
      lefts.push_back(id);
    }
  }
  std::vector<std::vector<Update>> updates(lefts.size());
  const auto n = static_cast<int64_t>(lefts.size());
  if (execution == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (int64_t i = 0; i < n; ++i) EvaluateEntity(lefts[i], updates[i]);
  } else {
    for (int64_t i = 0; i < n; ++i) EvaluateEntity(lefts[i], updates[i]);
  }
  double delta = 0;
  for (size_t i = 0; i < lefts.size(); ++i) {
    for (Update& u : updates[i]) {
      double strength = u.rule->strength;
      RecordScored(lefts[i], u.right, strength);
      delta += store_.Raise(lefts[i], u.right, strength, std::move(u.rule));
    }
  }
  return delta;
}

namespace {

using ScoreRows = std::vector<std::vector<std::pair<EntityId, double>>>;

// For every declared relation of `kg`, the clamped alpha-mean over its
// facts of the best matched counterpart fact under each relation of
// `other`. `rows` maps entities of `kg` to scored counterparts, `score`
// gives the score of a (kg tail, other tail) pair.
template <typename ScoreFn>
std::vector<std::vector<std::pair<RelationId, double>>> SubrelationScores(
    const KnowledgeGraph& kg, const KnowledgeGraph& other,
    const ScoreRows& rows, ScoreFn&& score, double alpha,
    Execution execution) {
  const auto declared = static_cast<int64_t>(kg.num_relations() / 2);
  std::vector<std::vector<std::pair<RelationId, double>>> out(declared);
  auto one = [&](int64_t k) {
    RelationId r{static_cast<uint32_t>(2 * k)};
    auto facts = kg.Facts(r);
    if (facts.empty()) return;
    std::map<uint32_t, double> sums;
    std::map<uint32_t, double> best;
    for (const auto& [h, t] : facts) {
      best.clear();
      if (Index(h) >= rows.size()) continue;
      for (const auto& [h2, head_score] : rows[Index(h)]) {
        for (const Fact& g : other.IncidentFacts(h2)) {
          double tail_score = score(t, g.head);
          if (tail_score <= 0) continue;
          double v = std::min(head_score, tail_score);
          double& slot = best[Index(Inverse(g.relation))];
          slot = std::max(slot, v);
        }
      }
      for (const auto& [r2, v] : best) sums[r2] += v;
    }
    for (const auto& [r2, sum] : sums) {
      double mean = sum / static_cast<double>(facts.size());
      out[k].emplace_back(RelationId(r2), std::clamp(alpha * mean, 0.0, 1.0));
    }
  };
  if (execution == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int64_t k = 0; k < declared; ++k) one(k);
  } else {
    for (int64_t k = 0; k < declared; ++k) one(k);
  }
  return out;
}

}  // namespace

double Aligner::SubrelationStep(Execution execution) {
  ScoreRows rows(kg1_.num_entities());
  ScoreRows columns(kg2_.num_entities());
  for (uint32_t l = 0; l < store_.num_rows(); ++l) {
    for (const MatchStore::Entry& e : store_.Row(EntityId(l))) {
      if (e.score <= 0) continue;
      rows[l].emplace_back(e.right, e.score);
      columns[Index(e.right)].emplace_back(EntityId(l), e.score);
    }
  }
  auto forward = SubrelationScores(
      kg1_, kg2_, rows,
      [&](EntityId t1, EntityId t2) { return store_.Score(t1, t2); },
      config_.alpha, execution);
  auto backward = SubrelationScores(
      kg2_, kg1_, columns,
      [&](EntityId t2, EntityId t1) { return store_.Score(t1, t2); },
      config_.alpha, execution);

  double delta = 0;
  for (size_t k = 0; k < forward.size(); ++k) {
    RelationId r{static_cast<uint32_t>(2 * k)};
    for (const auto& [r2, v] : forward[k]) {
      delta += store_.RaiseSub12(r, r2, v);
      delta += store_.RaiseSub12(Inverse(r), Inverse(r2), v);
    }
  }
  for (size_t k = 0; k < backward.size(); ++k) {
    RelationId r2{static_cast<uint32_t>(2 * k)};
    for (const auto& [r, v] : backward[k]) {
      delta += store_.RaiseSub21(r2, r, v);
      delta += store_.RaiseSub21(Inverse(r2), Inverse(r), v);
    }
  }
  return delta;
}

size_t Aligner::MaxAssignment() {
  std::vector<double> row_max(store_.num_rows(), 0.0);
  std::vector<double> col_max(kg2_.num_entities(), 0.0);
  for (uint32_t l = 0; l < store_.num_rows(); ++l) {
    for (const MatchStore::Entry& e : store_.Row(EntityId(l))) {
      row_max[l] = std::max(row_max[l], e.score);
      double& c = col_max[Index(e.right)];
      c = std::max(c, e.score);
    }
  }
  return store_.Prune([&](EntityId left, const MatchStore::Entry& e) {
    return e.score >= row_max[Index(left)] && e.score >= col_max[Index(e.right)];
  });
}

AlignmentReport Aligner::Run(Execution execution) {
  Initialize();
  double previous = store_.EntityTotal() + store_.SubTotal();
  for (int it = 1; it <= config_.max_iters; ++it) {
    EntityStep(execution);
    if (config_.prune) MaxAssignment();
    SubrelationStep(execution);
    double total = store_.EntityTotal() + store_.SubTotal();
    double delta = std::fabs(total - previous);
    previous = total;
    deltas_.push_back(delta);
    iterations_ = it;
    if (hook_) hook_(it, *this);
    if (delta < config_.epsilon) {
      converged_ = true;
      break;
    }
  }
  return MakeReport();
}

AlignmentReport Aligner::MakeReport() const {
  AlignmentReport report;
  report.config = config_;
  report.literal_provider = literals_.provider();
  report.literal_pairs = literals_.size();
  report.iterations = iterations_;
  report.converged = converged_;
  report.deltas = deltas_;

  struct Stored {
    EntityId left;
    const MatchStore::Entry* entry;
  };
  std::vector<Stored> stored;
  for (uint32_t l = 0; l < store_.num_rows(); ++l) {
    EntityId left{l};
    if (kg1_.is_literal(left)) continue;
    for (const MatchStore::Entry& e : store_.Row(left)) {
      if (kg2_.is_literal(e.right)) continue;
      stored.push_back({left, &e});
    }
  }
  auto by_score = [&](const Stored& a, const Stored& b) {
    if (a.entry->score != b.entry->score) {
      return a.entry->score > b.entry->score;
    }
    if (int c = kg1_.label(a.left).compare(kg1_.label(b.left)); c != 0) {
      return c < 0;
    }
    return kg2_.label(a.entry->right) < kg2_.label(b.entry->right);
  };
  std::sort(stored.begin(), stored.end(), by_score);

  std::vector<bool> used1(kg1_.num_entities()), used2(kg2_.num_entities());
  for (const Stored& s : stored) {
    const MatchStore::Entry& e = *s.entry;
    bool reported = false;
    if (e.score > config_.theta_e && !used1[Index(s.left)] &&
        !used2[Index(e.right)]) {
      used1[Index(s.left)] = used2[Index(e.right)] = true;
      reported = true;
      report.entities.push_back({kg1_.label(s.left), kg2_.label(e.right),
                                 e.score, e.fixed});
    }
    Explanation explanation =
        e.rule ? MakeExplanation(*e.rule, kg1_, kg2_)
               : MakeSeedExplanation(kg1_.label(s.left), kg2_.label(e.right));
    explanation.strength = e.score;
    explanation.reported = reported;
    report.explanations.Add(std::move(explanation));
  }

  std::map<std::pair<uint32_t, uint32_t>, RelationMatch> relations;
  for (const auto& [key, v] : store_.sub12()) {
    RelationId r1{static_cast<uint32_t>(key >> 32)};
    RelationId r2{static_cast<uint32_t>(key & 0xffffffffu)};
    if (IsInverse(r1)) continue;
    relations[{Index(r1), Index(r2)}].sub12 = v;
  }
  for (const auto& [key, v] : store_.sub21()) {
    RelationId r2{static_cast<uint32_t>(key >> 32)};
    RelationId r1{static_cast<uint32_t>(key & 0xffffffffu)};
    if (IsInverse(r1)) continue;
    relations[{Index(r1), Index(r2)}].sub21 = v;
  }
  const double threshold = config_.rel_report_threshold;
  for (auto& [ids, match] : relations) {
    if (match.sub12 <= 0 && match.sub21 <= 0) continue;
    match.left = kg1_.label(RelationId(ids.first));
    match.right = kg2_.label(RelationId(ids.second));
    bool sub = match.sub12 >= threshold && match.sub12 > 0;
    bool sup = match.sub21 >= threshold && match.sub21 > 0;
    if (sub && sup) {
      match.op = RelationOp::kEqv;
    } else if (sub) {
      match.op = RelationOp::kSub;
    } else if (sup) {
      match.op = RelationOp::kSup;
    }
    report.relations.push_back(std::move(match));
  }
  std::sort(report.relations.begin(), report.relations.end(),
            [](const RelationMatch& a, const RelationMatch& b) {
              return std::tie(a.left, a.right) < std::tie(b.left, b.right);
            });

  std::map<uint64_t, double> ranking(scored_.begin(), scored_.end());
  for (const LabelPair& seed : bundle_.seed_links) {
    auto left = kg1_.FindEntity(seed.left);
    auto right = kg2_.FindEntity(seed.right);
    if (left && right) {
      ranking[MatchStore::Key(Index(*left), Index(*right))] = 1.0;
    }
  }
  for (const auto& [key, score] : ranking) {
    EntityId left{static_cast<uint32_t>(key >> 32)};
    EntityId right{static_cast<uint32_t>(key & 0xffffffffu)};
    report.ranking.push_back({kg1_.label(left), kg2_.label(right), score});
    report.explanations.AddScored(kg1_.label(left), kg2_.label(right), score);
  }
  std::sort(report.ranking.begin(), report.ranking.end(),
            [](const ScoredPair& a, const ScoredPair& b) {
              if (a.left != b.left) return a.left < b.left;
              if (a.score != b.score) return a.score > b.score;
              return a.right < b.right;
            });
  return report;
}

AlignmentReport RunAlignment(const DatasetBundle& bundle, const Config& config,
                             const std::string& similarity_file,
                             Execution execution) {
  config.Validate();
  LiteralSimOptions options;
  options.theta_s = config.theta_s;
  options.top_k = config.top_k;
  options.precomputed_path = similarity_file;
  LiteralSimTable table =
      BuildLiteralTable(bundle.kg1, bundle.kg2, options, execution);
  Aligner aligner(bundle, table, config);
  return aligner.Run(execution);
}

}  // namespace flora
