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

#ifndef FLORA_KG_H_
#define FLORA_KG_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace flora {

enum class EntityId : uint32_t {};
enum class RelationId : uint32_t {};

inline constexpr uint32_t Index(EntityId id) { return static_cast<uint32_t>(id); }
inline constexpr uint32_t Index(RelationId id) { return static_cast<uint32_t>(id); }

// Relations are allocated in pairs: even ids are declared relations, the
// following odd id is the synthesized inverse.
inline constexpr RelationId Inverse(RelationId r) {
  return RelationId(Index(r) ^ 1u);
}
inline constexpr bool IsInverse(RelationId r) { return (Index(r) & 1u) != 0; }

enum class EntityKind : uint8_t { kInstance, kClass, kLiteral };
enum class LiteralType : uint8_t { kString, kDate, kNumber };

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;
  std::string time;  // empty when the literal carries no time of day

  bool operator==(const Date&) const = default;
};

// A typed literal. `lexical` is the form with surrounding quotes and
// datatype/language tags removed.
struct LiteralValue {
  LiteralType type = LiteralType::kString;
  std::string lexical;
  double number = 0.0;
  Date date;

  // Quotes and trailing tags are stripped; ISO-8601 dates become kDate,
  // finite decimals kNumber, everything else kString.
  static LiteralValue Parse(std::string_view raw);

  // Interning key: type tag plus lexical form.
  std::string Key() const;
};

// One incoming fact r(head, tail), as seen from the tail.
struct Fact {
  RelationId relation;
  EntityId head;

  bool operator==(const Fact&) const = default;
};

struct Triple {
  EntityId head;
  RelationId relation;
  EntityId tail;
};

// In-memory triple store. Every declared relation r gets an inverse r^-1
// and each stored triple r(h, t) is visible from both ends:
// IncidentFacts(t) holds (r, h) and IncidentFacts(h) holds (r^-1, t).
//
// Mutation is single-threaded; all const members are safe to call
// concurrently once ingestion is finished.
class KnowledgeGraph {
 public:
  static constexpr std::string_view kInverseSuffix = "^-1";

  KnowledgeGraph() = default;
  explicit KnowledgeGraph(std::string name) : name_(std::move(name)) {}

  // Interns an instance (or class) by label. Returns the existing handle if
  // the label is known.
  EntityId AddEntity(std::string_view label);
  // Interns a literal by (type, lexical form).
  EntityId AddLiteral(std::string_view raw);
  // A label ending in kInverseSuffix resolves to the inverse of the base
  // relation.
  RelationId AddRelation(std::string_view label);

  // Returns false when the triple was already present.
  bool AddTriple(EntityId head, RelationId relation, EntityId tail);
  bool AddTriple(std::string_view head, std::string_view relation,
                 std::string_view tail);
  bool AddAttribute(std::string_view head, std::string_view relation,
                    std::string_view raw_literal);

  void MarkClass(EntityId id);

  const std::string& name() const { return name_; }
  size_t num_entities() const { return entities_.size(); }
  // Counts inverses, so this is always even.
  size_t num_relations() const { return relations_.size(); }
  size_t num_triples() const { return triples_.size(); }
  size_t num_literal_triples() const { return num_literal_triples_; }

  const std::string& label(EntityId id) const;
  const std::string& label(RelationId id) const;
  EntityKind kind(EntityId id) const;
  bool is_literal(EntityId id) const {
    return kind(id) == EntityKind::kLiteral;
  }
  // nullptr for non-literals.
  const LiteralValue* literal(EntityId id) const;

  std::optional<EntityId> FindEntity(std::string_view label) const;
  std::optional<EntityId> FindLiteral(std::string_view raw) const;
  std::optional<RelationId> FindRelation(std::string_view label) const;

  // All facts r(h, tail), sorted by relation label then head label.
  std::span<const Fact> IncidentFacts(EntityId tail) const;
  // {t : r(head, t)}, sorted by id.
  std::span<const EntityId> Tails(EntityId head, RelationId relation) const;
  // (head, tail) pairs of a relation in insertion order.
  std::span<const std::pair<EntityId, EntityId>> Facts(
      RelationId relation) const;
  // Distinct heads of a relation in first-seen order.
  std::span<const EntityId> Heads(RelationId relation) const;

  // Forward triples (declared relations only) in insertion order.
  const std::vector<Triple>& triples() const { return triples_; }

 private:
  struct EntityRecord {
    std::string label;
    EntityKind kind;
    int32_t literal_index;  // -1 unless kind == kLiteral
  };

  void CheckEntity(EntityId id) const;
  void CheckRelation(RelationId id) const;
  void InsertIncident(EntityId tail, Fact fact);
  static uint64_t Key(EntityId head, RelationId relation) {
    return (static_cast<uint64_t>(Index(head)) << 32) | Index(relation);
  }

  std::string name_;
  std::vector<EntityRecord> entities_;
  std::vector<LiteralValue> literals_;
  std::unordered_map<std::string, EntityId> entity_by_label_;
  std::unordered_map<std::string, EntityId> literal_by_key_;

  std::vector<std::string> relations_;
  std::unordered_map<std::string, RelationId> relation_by_label_;

  std::vector<Triple> triples_;
  size_t num_literal_triples_ = 0;
  std::vector<std::vector<Fact>> incident_;
  std::unordered_map<uint64_t, std::vector<EntityId>> tails_;
  std::vector<std::vector<std::pair<EntityId, EntityId>>> facts_;
  std::vector<std::vector<EntityId>> heads_;
};

}  // namespace flora

#endif  // FLORA_KG_H_
