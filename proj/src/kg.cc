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

#include "flora/kg.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <regex>
#include <stdexcept>

namespace flora {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\n')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

// Removes surrounding quotes and a trailing ^^datatype or @lang tag.
std::string_view StripLiteral(std::string_view raw) {
  raw = Trim(raw);
  if (raw.size() >= 2 && raw.front() == '"') {
    size_t close = raw.rfind('"');
    if (close > 0) {
      std::string_view tail = raw.substr(close + 1);
      if (tail.empty() || tail.starts_with("^^") || tail.starts_with("@")) {
        return raw.substr(1, close - 1);
      }
    }
    return raw;
  }
  if (size_t tag = raw.find("^^"); tag != std::string_view::npos) {
    return Trim(raw.substr(0, tag));
  }
  return raw;
}

bool ParseDate(std::string_view s, Date* date) {
  static const std::regex kDate(
      R"(^(-?\d{4})-(\d{2})-(\d{2})(?:[T ](\d{2}:\d{2}(?::\d{2}(?:\.\d+)?)?)(?:Z|[+-]\d{2}:\d{2})?)?$)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(s.begin(), s.end(), m, kDate)) return false;
  Date d;
  d.year = std::stoi(m[1].str());
  d.month = std::stoi(m[2].str());
  d.day = std::stoi(m[3].str());
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) return false;
  if (m[4].matched) d.time = m[4].str();
  *date = std::move(d);
  return true;
}

bool ParseNumber(std::string_view s, double* value) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return false;
  *value = v;
  return true;
}

}  // namespace

LiteralValue LiteralValue::Parse(std::string_view raw) {
  LiteralValue lit;
  lit.lexical = std::string(StripLiteral(raw));
  if (ParseDate(lit.lexical, &lit.date)) {
    lit.type = LiteralType::kDate;
  } else if (ParseNumber(lit.lexical, &lit.number)) {
    lit.type = LiteralType::kNumber;
  } else {
    lit.type = LiteralType::kString;
  }
  return lit;
}

std::string LiteralValue::Key() const {
  char tag = type == LiteralType::kDate     ? 'd'
             : type == LiteralType::kNumber ? 'n'
                                            : 's';
  std::string key(1, tag);
  key += ':';
  key += lexical;
  return key;
}

EntityId KnowledgeGraph::AddEntity(std::string_view label) {
  std::string key(label);
  if (auto it = entity_by_label_.find(key); it != entity_by_label_.end()) {
    return it->second;
  }
  EntityId id{static_cast<uint32_t>(entities_.size())};
  entities_.push_back({key, EntityKind::kInstance, -1});
  incident_.emplace_back();
  entity_by_label_.emplace(std::move(key), id);
  return id;
}

EntityId KnowledgeGraph::AddLiteral(std::string_view raw) {
  LiteralValue lit = LiteralValue::Parse(raw);
  std::string key = lit.Key();
  if (auto it = literal_by_key_.find(key); it != literal_by_key_.end()) {
    return it->second;
  }
  EntityId id{static_cast<uint32_t>(entities_.size())};
  entities_.push_back({lit.lexical, EntityKind::kLiteral,
                       static_cast<int32_t>(literals_.size())});
  literals_.push_back(std::move(lit));
  incident_.emplace_back();
  literal_by_key_.emplace(std::move(key), id);
  return id;
}

RelationId KnowledgeGraph::AddRelation(std::string_view label) {
  if (label.ends_with(kInverseSuffix) && label.size() > kInverseSuffix.size()) {
    return Inverse(
        AddRelation(label.substr(0, label.size() - kInverseSuffix.size())));
  }
  std::string key(label);
  if (auto it = relation_by_label_.find(key); it != relation_by_label_.end()) {
    return it->second;
  }
  RelationId forward{static_cast<uint32_t>(relations_.size())};
  std::string inverse_label = key + std::string(kInverseSuffix);
  relations_.push_back(key);
  relations_.push_back(inverse_label);
  facts_.resize(relations_.size());
  heads_.resize(relations_.size());
  relation_by_label_.emplace(std::move(key), forward);
  relation_by_label_.emplace(std::move(inverse_label), Inverse(forward));
  return forward;
}

void KnowledgeGraph::CheckEntity(EntityId id) const {
  if (Index(id) >= entities_.size()) {
    throw std::out_of_range("unknown entity id " + std::to_string(Index(id)) +
                            " in " + name_);
  }
}

void KnowledgeGraph::CheckRelation(RelationId id) const {
  if (Index(id) >= relations_.size()) {
    throw std::out_of_range("unknown relation id " +
                            std::to_string(Index(id)) + " in " + name_);
  }
}

void KnowledgeGraph::InsertIncident(EntityId tail, Fact fact) {
  auto& list = incident_[Index(tail)];
  auto less = [this](const Fact& a, const Fact& b) {
    const std::string& ra = relations_[Index(a.relation)];
    const std::string& rb = relations_[Index(b.relation)];
    if (int c = ra.compare(rb); c != 0) return c < 0;
    return entities_[Index(a.head)].label < entities_[Index(b.head)].label;
  };
  list.insert(std::upper_bound(list.begin(), list.end(), fact, less), fact);
}

bool KnowledgeGraph::AddTriple(EntityId head, RelationId relation,
                               EntityId tail) {
  CheckEntity(head);
  CheckEntity(tail);
  CheckRelation(relation);
  if (IsInverse(relation)) return AddTriple(tail, Inverse(relation), head);

  auto& forward = tails_[Key(head, relation)];
  auto pos = std::lower_bound(forward.begin(), forward.end(), tail);
  if (pos != forward.end() && *pos == tail) return false;
  if (forward.empty()) heads_[Index(relation)].push_back(head);
  forward.insert(pos, tail);

  RelationId inverse = Inverse(relation);
  auto& backward = tails_[Key(tail, inverse)];
  if (backward.empty()) heads_[Index(inverse)].push_back(tail);
  backward.insert(std::lower_bound(backward.begin(), backward.end(), head),
                  head);

  facts_[Index(relation)].emplace_back(head, tail);
  facts_[Index(inverse)].emplace_back(tail, head);
  InsertIncident(tail, {relation, head});
  InsertIncident(head, {inverse, tail});
  triples_.push_back({head, relation, tail});
  if (is_literal(tail) || is_literal(head)) ++num_literal_triples_;
  return true;
}

bool KnowledgeGraph::AddTriple(std::string_view head,
                               std::string_view relation,
                               std::string_view tail) {
  EntityId h = AddEntity(head);
  RelationId r = AddRelation(relation);
  EntityId t = AddEntity(tail);
  return AddTriple(h, r, t);
}

bool KnowledgeGraph::AddAttribute(std::string_view head,
                                  std::string_view relation,
                                  std::string_view raw_literal) {
  EntityId h = AddEntity(head);
  RelationId r = AddRelation(relation);
  EntityId t = AddLiteral(raw_literal);
  return AddTriple(h, r, t);
}

void KnowledgeGraph::MarkClass(EntityId id) {
  CheckEntity(id);
  auto& record = entities_[Index(id)];
  if (record.kind == EntityKind::kInstance) record.kind = EntityKind::kClass;
}

const std::string& KnowledgeGraph::label(EntityId id) const {
  CheckEntity(id);
  return entities_[Index(id)].label;
}

const std::string& KnowledgeGraph::label(RelationId id) const {
  CheckRelation(id);
  return relations_[Index(id)];
}

EntityKind KnowledgeGraph::kind(EntityId id) const {
  CheckEntity(id);
  return entities_[Index(id)].kind;
}

const LiteralValue* KnowledgeGraph::literal(EntityId id) const {
  CheckEntity(id);
  int32_t index = entities_[Index(id)].literal_index;
  return index < 0 ? nullptr : &literals_[index];
}

std::optional<EntityId> KnowledgeGraph::FindEntity(
    std::string_view label) const {
  auto it = entity_by_label_.find(std::string(label));
  if (it == entity_by_label_.end()) return std::nullopt;
  return it->second;
}

std::optional<EntityId> KnowledgeGraph::FindLiteral(
    std::string_view raw) const {
  auto it = literal_by_key_.find(LiteralValue::Parse(raw).Key());
  if (it == literal_by_key_.end()) return std::nullopt;
  return it->second;
}

std::optional<RelationId> KnowledgeGraph::FindRelation(
    std::string_view label) const {
  auto it = relation_by_label_.find(std::string(label));
  if (it == relation_by_label_.end()) return std::nullopt;
  return it->second;
}

std::span<const Fact> KnowledgeGraph::IncidentFacts(EntityId tail) const {
  CheckEntity(tail);
  return incident_[Index(tail)];
}

std::span<const EntityId> KnowledgeGraph::Tails(EntityId head,
                                                RelationId relation) const {
  CheckEntity(head);
  CheckRelation(relation);
  auto it = tails_.find(Key(head, relation));
  if (it == tails_.end()) return {};
  return it->second;
}

std::span<const std::pair<EntityId, EntityId>> KnowledgeGraph::Facts(
    RelationId relation) const {
  CheckRelation(relation);
  return facts_[Index(relation)];
}

std::span<const EntityId> KnowledgeGraph::Heads(RelationId relation) const {
  CheckRelation(relation);
  return heads_[Index(relation)];
}

}  // namespace flora
