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

#ifndef FLORA_FUNCTIONALITY_H_
#define FLORA_FUNCTIONALITY_H_

#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "flora/kg.h"

namespace flora {

struct FunEstimate {
  enum class Mode : uint8_t { kExact, kSampled };

  double value = 1.0;
  Mode mode = Mode::kExact;
  int sample_count = 0;

  bool operator==(const FunEstimate&) const = default;
};

// Sorts list entries into canonical order (relation label, then head label,
// byte-wise) and collapses duplicate (relation, head) entries.
std::vector<Fact> CanonicalList(const KnowledgeGraph& kg,
                                std::vector<Fact> entries);

// fun(r): distinct heads over distinct (head, tail) pairs. 1 for a relation
// without facts.
FunEstimate GlobalFun(const KnowledgeGraph& kg, RelationId r);

// fun(r, h) = 1 / |{t : r(h, t)}|. Throws std::invalid_argument when h has
// no r-fact.
FunEstimate LocalFun(const KnowledgeGraph& kg, RelationId r, EntityId h);

// fun(R, H) = 1 / |{t : R(H, t)}|. Throws std::invalid_argument when no tail
// satisfies every position.
FunEstimate LocalFunList(const KnowledgeGraph& kg, std::span<const Fact> list);

// Tails t with R(H, t), sorted by id.
std::vector<EntityId> ListTails(const KnowledgeGraph& kg,
                                std::span<const Fact> list);

struct ListFunOptions {
  // Exact enumeration while the number of (H, t) pairs stays at or below
  // this bound.
  double exact_cap = 1000;
  // Sample count in sampled mode.
  int budget = 50;
  uint64_t seed = 0;
};

// fun(R) for a relation multiset. Exact under `exact_cap` pairs, otherwise
// the mean of 1/k(H) over (H, t) pairs drawn uniformly, which is an
// unbiased estimate of |{H}| / |{(H, t)}|.
FunEstimate GlobalFunList(const KnowledgeGraph& kg,
                          std::span<const RelationId> relations,
                          const ListFunOptions& options);

// Number of (H, t) pairs and of distinct H for a relation multiset, by
// full enumeration. Exposed for tests and the exact path.
struct ListSupport {
  double pairs = 0;
  double distinct_heads = 0;
};
ListSupport EnumerateListSupport(const KnowledgeGraph& kg,
                                 std::span<const RelationId> relations);

// Memoizing front end used by the alignment engine. Safe for concurrent
// use; sampled values are seeded per relation multiset, so the cached value
// does not depend on call order.
class FunctionalityCache {
 public:
  FunctionalityCache(const KnowledgeGraph& kg, ListFunOptions options)
      : kg_(kg), options_(options) {}

  FunctionalityCache(const FunctionalityCache&) = delete;
  FunctionalityCache& operator=(const FunctionalityCache&) = delete;

  const KnowledgeGraph& kg() const { return kg_; }

  FunEstimate Global(RelationId r) const;
  FunEstimate GlobalList(std::span<const RelationId> relations) const;
  FunEstimate LocalList(std::span<const Fact> list) const {
    return LocalFunList(kg_, list);
  }

  size_t size() const;

 private:
  struct KeyHash {
    size_t operator()(const std::vector<uint32_t>& key) const;
  };

  const KnowledgeGraph& kg_;
  ListFunOptions options_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::vector<uint32_t>, FunEstimate, KeyHash>
      memo_;
};

}  // namespace flora

#endif  // FLORA_FUNCTIONALITY_H_
