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

#include "flora/functionality.h"

#include <algorithm>
#include <iterator>
#include <random>
#include <set>
#include <stdexcept>

namespace flora {
namespace {

struct Group {
  RelationId relation;
  int multiplicity;
};

std::vector<Group> GroupRelations(const KnowledgeGraph& kg,
                                  std::span<const RelationId> relations) {
  std::vector<RelationId> sorted(relations.begin(), relations.end());
  std::sort(sorted.begin(), sorted.end(), [&](RelationId a, RelationId b) {
    if (int c = kg.label(a).compare(kg.label(b)); c != 0) return c < 0;
    return Index(a) < Index(b);
  });
  std::vector<Group> groups;
  for (RelationId r : sorted) {
    if (!groups.empty() && groups.back().relation == r) {
      ++groups.back().multiplicity;
    } else {
      groups.push_back({r, 1});
    }
  }
  return groups;
}

double Choose(size_t n, int k) {
  if (k < 0 || static_cast<size_t>(k) > n) return 0;
  double result = 1;
  for (int i = 0; i < k; ++i) {
    result = result * static_cast<double>(n - i) / static_cast<double>(i + 1);
  }
  return result;
}

struct WeightedTail {
  EntityId tail;
  double weight;
};

// Tails that can satisfy every group, weighted by their number of head
// lists.
std::vector<WeightedTail> SupportingTails(const KnowledgeGraph& kg,
                                          const std::vector<Group>& groups) {
  const Group* rarest = &groups.front();
  for (const Group& g : groups) {
    if (kg.Facts(g.relation).size() < kg.Facts(rarest->relation).size()) {
      rarest = &g;
    }
  }
  std::vector<WeightedTail> result;
  for (EntityId t : kg.Heads(Inverse(rarest->relation))) {
    double weight = 1;
    for (const Group& g : groups) {
      weight *= Choose(kg.Tails(t, Inverse(g.relation)).size(),
                       g.multiplicity);
      if (weight == 0) break;
    }
    if (weight > 0) result.push_back({t, weight});
  }
  return result;
}

// Calls `visit` with every m-subset of `items` (as a sorted index list).
template <typename Visit>
void ForEachCombination(size_t n, int m, Visit&& visit) {
  std::vector<size_t> idx(m);
  for (int i = 0; i < m; ++i) idx[i] = i;
  if (static_cast<size_t>(m) > n) return;
  while (true) {
    visit(idx);
    int i = m - 1;
    while (i >= 0 && idx[i] == n - m + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void EnumerateHeadLists(const KnowledgeGraph& kg,
                        const std::vector<Group>& groups, EntityId tail,
                        size_t group, std::vector<uint32_t>& prefix,
                        std::set<std::vector<uint32_t>>& seen) {
  if (group == groups.size()) {
    seen.insert(prefix);
    return;
  }
  const Group& g = groups[group];
  auto heads = kg.Tails(tail, Inverse(g.relation));
  ForEachCombination(heads.size(), g.multiplicity,
                     [&](const std::vector<size_t>& idx) {
                       size_t mark = prefix.size();
                       for (size_t i : idx) prefix.push_back(Index(heads[i]));
                       EnumerateHeadLists(kg, groups, tail, group + 1, prefix,
                                          seen);
                       prefix.resize(mark);
                     });
}

ListSupport Enumerate(const KnowledgeGraph& kg,
                      const std::vector<Group>& groups,
                      const std::vector<WeightedTail>& tails) {
  ListSupport support;
  std::set<std::vector<uint32_t>> seen;
  std::vector<uint32_t> prefix;
  for (const WeightedTail& wt : tails) {
    support.pairs += wt.weight;
    EnumerateHeadLists(kg, groups, wt.tail, 0, prefix, seen);
  }
  support.distinct_heads = static_cast<double>(seen.size());
  return support;
}

uint64_t HashRelations(std::span<const Group> groups) {
  uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (const Group& g : groups) {
    h ^= (static_cast<uint64_t>(Index(g.relation)) << 8) ^
         static_cast<uint64_t>(g.multiplicity);
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 31;
  }
  return h;
}

}  // namespace

std::vector<Fact> CanonicalList(const KnowledgeGraph& kg,
                                std::vector<Fact> entries) {
  std::sort(entries.begin(), entries.end(), [&](const Fact& a, const Fact& b) {
    if (int c = kg.label(a.relation).compare(kg.label(b.relation)); c != 0) {
      return c < 0;
    }
    return kg.label(a.head) < kg.label(b.head);
  });
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  return entries;
}

FunEstimate GlobalFun(const KnowledgeGraph& kg, RelationId r) {
  auto facts = kg.Facts(r);
  if (facts.empty()) return {};
  return {static_cast<double>(kg.Heads(r).size()) /
              static_cast<double>(facts.size()),
          FunEstimate::Mode::kExact, 0};
}

FunEstimate LocalFun(const KnowledgeGraph& kg, RelationId r, EntityId h) {
  size_t n = kg.Tails(h, r).size();
  if (n == 0) {
    throw std::invalid_argument("local functionality of " + kg.label(r) +
                                " at " + kg.label(h) + ": no fact");
  }
  return {1.0 / static_cast<double>(n), FunEstimate::Mode::kExact, 0};
}

std::vector<EntityId> ListTails(const KnowledgeGraph& kg,
                                std::span<const Fact> list) {
  if (list.empty()) return {};
  auto first = kg.Tails(list.front().head, list.front().relation);
  std::vector<EntityId> result(first.begin(), first.end());
  std::vector<EntityId> next;
  for (size_t i = 1; i < list.size() && !result.empty(); ++i) {
    auto tails = kg.Tails(list[i].head, list[i].relation);
    next.clear();
    std::set_intersection(result.begin(), result.end(), tails.begin(),
                          tails.end(), std::back_inserter(next));
    result.swap(next);
  }
  return result;
}

FunEstimate LocalFunList(const KnowledgeGraph& kg,
                         std::span<const Fact> list) {
  size_t n = ListTails(kg, list).size();
  if (n == 0) {
    throw std::invalid_argument("local functionality of relation list: "
                                "no tail satisfies every position");
  }
  return {1.0 / static_cast<double>(n), FunEstimate::Mode::kExact, 0};
}

ListSupport EnumerateListSupport(const KnowledgeGraph& kg,
                                 std::span<const RelationId> relations) {
  if (relations.empty()) return {};
  auto groups = GroupRelations(kg, relations);
  return Enumerate(kg, groups, SupportingTails(kg, groups));
}

FunEstimate GlobalFunList(const KnowledgeGraph& kg,
                          std::span<const RelationId> relations,
                          const ListFunOptions& options) {
  if (relations.empty()) {
    throw std::invalid_argument("functionality of an empty relation list");
  }
  if (relations.size() == 1) return GlobalFun(kg, relations.front());

  auto groups = GroupRelations(kg, relations);
  auto tails = SupportingTails(kg, groups);
  if (tails.empty()) return {};

  double total = 0;
  for (const WeightedTail& wt : tails) total += wt.weight;
  if (total <= options.exact_cap) {
    ListSupport support = Enumerate(kg, groups, tails);
    return {support.distinct_heads / support.pairs, FunEstimate::Mode::kExact,
            0};
  }

  std::vector<double> cumulative;
  cumulative.reserve(tails.size());
  double running = 0;
  for (const WeightedTail& wt : tails) {
    running += wt.weight;
    cumulative.push_back(running);
  }

  std::mt19937_64 rng(options.seed ^ HashRelations(groups));
  std::uniform_real_distribution<double> unit(0.0, running);
  std::vector<Fact> list;
  std::vector<EntityId> chosen;
  double sum = 0;
  int budget = std::max(1, options.budget);
  for (int s = 0; s < budget; ++s) {
    size_t pick = std::upper_bound(cumulative.begin(), cumulative.end(),
                                   unit(rng)) -
                  cumulative.begin();
    if (pick >= tails.size()) pick = tails.size() - 1;
    EntityId t = tails[pick].tail;
    list.clear();
    for (const Group& g : groups) {
      auto heads = kg.Tails(t, Inverse(g.relation));
      chosen.clear();
      std::sample(heads.begin(), heads.end(), std::back_inserter(chosen),
                  g.multiplicity, rng);
      for (EntityId h : chosen) list.push_back({g.relation, h});
    }
    sum += 1.0 / static_cast<double>(ListTails(kg, list).size());
  }
  return {sum / budget, FunEstimate::Mode::kSampled, budget};
}

size_t FunctionalityCache::KeyHash::operator()(
    const std::vector<uint32_t>& key) const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (uint32_t v : key) {
    h ^= v;
    h *= 0x100000001b3ULL;
  }
  return static_cast<size_t>(h);
}

FunEstimate FunctionalityCache::Global(RelationId r) const {
  RelationId single[] = {r};
  return GlobalList(single);
}

FunEstimate FunctionalityCache::GlobalList(
    std::span<const RelationId> relations) const {
  std::vector<uint32_t> key;
  key.reserve(relations.size());
  for (RelationId r : relations) key.push_back(Index(r));
  std::sort(key.begin(), key.end());
  {
    std::shared_lock lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  FunEstimate value = GlobalFunList(kg_, relations, options_);
  std::unique_lock lock(mutex_);
  return memo_.try_emplace(std::move(key), value).first->second;
}

size_t FunctionalityCache::size() const {
  std::shared_lock lock(mutex_);
  return memo_.size();
}

}  // namespace flora
