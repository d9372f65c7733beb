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

#include "flora/literal_sim.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <cctype>
#include <map>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace flora {

double MatchDates(const LiteralValue& a, const LiteralValue& b) {
  if (a.type != LiteralType::kDate || b.type != LiteralType::kDate) return 0;
  if (a.date.year != b.date.year || a.date.month != b.date.month ||
      a.date.day != b.date.day) {
    return 0;
  }
  if (!a.date.time.empty() && !b.date.time.empty() &&
      a.date.time != b.date.time) {
    return 0;
  }
  return 1;
}

double MatchNumbers(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) return 0;
  if (a == b) return 1;
  double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= 1e-9 * scale ? 1 : 0;
}

std::string NormalizeString(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (u == ' ' || u == '\t' || u == '\n' || u == '\r' || u == '\f' ||
        u == '\v') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(u < 0x80 ? static_cast<char>(std::tolower(u)) : c);
  }
  return out;
}

namespace {

using Grams = std::map<std::string_view, int>;

Grams Trigrams(std::string_view normalized) {
  Grams grams;
  if (normalized.empty()) return grams;
  if (normalized.size() < 3) {
    grams[normalized] = 1;
    return grams;
  }
  for (size_t i = 0; i + 3 <= normalized.size(); ++i) {
    ++grams[normalized.substr(i, 3)];
  }
  return grams;
}

int GramCount(std::string_view normalized) {
  if (normalized.empty()) return 0;
  return normalized.size() < 3 ? 1 : static_cast<int>(normalized.size()) - 2;
}

}  // namespace

double TrigramSimilarity(std::string_view a, std::string_view b) {
  std::string na = NormalizeString(a);
  std::string nb = NormalizeString(b);
  if (na.empty() && nb.empty()) return 1;
  Grams ga = Trigrams(na);
  Grams gb = Trigrams(nb);
  int shared = 0;
  for (const auto& [gram, count] : ga) {
    if (auto it = gb.find(gram); it != gb.end()) {
      shared += std::min(count, it->second);
    }
  }
  int total = GramCount(na) + GramCount(nb) - shared;
  return total == 0 ? 0 : static_cast<double>(shared) / total;
}

double LiteralSimilarity(const LiteralValue& a, const LiteralValue& b) {
  if (a.type != b.type) return 0;
  switch (a.type) {
    case LiteralType::kDate:
      return MatchDates(a, b);
    case LiteralType::kNumber:
      return MatchNumbers(a.number, b.number);
    case LiteralType::kString:
      return TrigramSimilarity(a.lexical, b.lexical);
  }
  return 0;
}

double LiteralSimTable::Score(EntityId left, EntityId right) const {
  if (Index(left) >= rows_.size()) return 0;
  const auto& row = rows_[Index(left)];
  auto it = std::lower_bound(
      row.begin(), row.end(), right,
      [](const std::pair<EntityId, double>& e, EntityId id) {
        return e.first < id;
      });
  return it != row.end() && it->first == right ? it->second : 0;
}

void LiteralSimTable::Set(EntityId left, EntityId right, double score) {
  if (Index(left) >= rows_.size()) rows_.resize(Index(left) + 1);
  auto& row = rows_[Index(left)];
  auto it = std::lower_bound(
      row.begin(), row.end(), right,
      [](const std::pair<EntityId, double>& e, EntityId id) {
        return e.first < id;
      });
  if (it != row.end() && it->first == right) {
    it->second = std::max(it->second, score);
  } else {
    row.insert(it, {right, score});
    ++size_;
  }
}

std::span<const std::pair<EntityId, double>> LiteralSimTable::Row(
    EntityId left) const {
  if (Index(left) >= rows_.size()) return {};
  return rows_[Index(left)];
}

namespace {

std::vector<EntityId> LiteralsOfType(const KnowledgeGraph& kg,
                                     LiteralType type) {
  std::vector<EntityId> out;
  for (uint32_t i = 0; i < kg.num_entities(); ++i) {
    EntityId id{i};
    const LiteralValue* lit = kg.literal(id);
    if (lit != nullptr && lit->type == type) out.push_back(id);
  }
  return out;
}

struct Scored {
  EntityId right;
  double score;
};

// Keeps the best top_k, ties broken by KG2 label.
void KeepTop(std::vector<Scored>& scored, int top_k, const KnowledgeGraph& kg2) {
  std::sort(scored.begin(), scored.end(), [&](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return kg2.label(a.right) < kg2.label(b.right);
  });
  if (top_k >= 0 && scored.size() > static_cast<size_t>(top_k)) {
    scored.resize(top_k);
  }
}

}  // namespace

void AddTrigramStrings(const KnowledgeGraph& kg1, const KnowledgeGraph& kg2,
                       double theta_s, int top_k, Execution execution,
                       LiteralSimTable& table) {
  std::vector<EntityId> left = LiteralsOfType(kg1, LiteralType::kString);
  std::vector<EntityId> right = LiteralsOfType(kg2, LiteralType::kString);

  std::vector<std::string> right_norm;
  right_norm.reserve(right.size());
  for (EntityId id : right) {
    right_norm.push_back(NormalizeString(kg2.literal(id)->lexical));
  }
  // Inverted index: gram -> (right index, multiplicity).
  std::unordered_map<std::string_view, std::vector<std::pair<uint32_t, int>>>
      index;
  std::vector<int> right_size(right.size());
  for (uint32_t j = 0; j < right.size(); ++j) {
    right_size[j] = GramCount(right_norm[j]);
    for (const auto& [gram, count] : Trigrams(right_norm[j])) {
      index[gram].emplace_back(j, count);
    }
  }

  std::vector<std::vector<Scored>> results(left.size());
  auto match_one = [&](size_t i) {
    std::string norm = NormalizeString(kg1.literal(left[i])->lexical);
    int size = GramCount(norm);
    std::unordered_map<uint32_t, int> shared;
    for (const auto& [gram, count] : Trigrams(norm)) {
      auto it = index.find(gram);
      if (it == index.end()) continue;
      for (const auto& [j, other] : it->second) {
        shared[j] += std::min(count, other);
      }
    }
    std::vector<Scored>& out = results[i];
    for (const auto& [j, common] : shared) {
      double score =
          static_cast<double>(common) / (size + right_size[j] - common);
      if (score >= theta_s) out.push_back({right[j], score});
    }
    if (size == 0) {
      for (uint32_t j = 0; j < right.size(); ++j) {
        if (right_size[j] == 0) out.push_back({right[j], 1.0});
      }
    }
    KeepTop(out, top_k, kg2);
  };

  const auto n = static_cast<int64_t>(left.size());
  if (execution == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (int64_t i = 0; i < n; ++i) match_one(static_cast<size_t>(i));
  } else {
    for (int64_t i = 0; i < n; ++i) match_one(static_cast<size_t>(i));
  }
  for (size_t i = 0; i < left.size(); ++i) {
    for (const Scored& s : results[i]) table.Set(left[i], s.right, s.score);
  }
}

void AddPrecomputedStrings(const std::string& path, const KnowledgeGraph& kg1,
                           const KnowledgeGraph& kg2, double theta_s,
                           int top_k, LiteralSimTable& table) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open similarity file " + path);
  std::map<uint32_t, std::vector<Scored>> rows;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t a = line.find('\t');
    size_t b = a == std::string::npos ? a : line.find('\t', a + 1);
    if (b == std::string::npos) {
      table.AddWarning(path + ":" + std::to_string(number) +
                       ": expected three columns");
      continue;
    }
    std::string_view view(line);
    std::string_view score_text = view.substr(b + 1);
    double score = 0;
    auto [ptr, ec] = std::from_chars(
        score_text.data(), score_text.data() + score_text.size(), score);
    if (ec != std::errc() || ptr != score_text.data() + score_text.size() ||
        !(score >= 0 && score <= 1)) {
      table.AddWarning(path + ":" + std::to_string(number) + ": bad score");
      continue;
    }
    auto left = kg1.FindLiteral(view.substr(0, a));
    auto right = kg2.FindLiteral(view.substr(a + 1, b - a - 1));
    if (!left || !right) {
      table.AddWarning(path + ":" + std::to_string(number) +
                       ": unknown literal");
      continue;
    }
    if (kg1.literal(*left)->type != LiteralType::kString ||
        kg2.literal(*right)->type != LiteralType::kString) {
      table.AddWarning(path + ":" + std::to_string(number) +
                       ": not a string literal");
      continue;
    }
    if (score < theta_s || score == 0) continue;
    rows[Index(*left)].push_back({*right, score});
  }
  for (auto& [left, scored] : rows) {
    KeepTop(scored, top_k, kg2);
    for (const Scored& s : scored) table.Set(EntityId(left), s.right, s.score);
  }
}

void AddDatesAndNumbers(const KnowledgeGraph& kg1, const KnowledgeGraph& kg2,
                        LiteralSimTable& table) {
  std::map<std::tuple<int, int, int>, std::vector<EntityId>> dates;
  for (EntityId id : LiteralsOfType(kg2, LiteralType::kDate)) {
    const Date& d = kg2.literal(id)->date;
    dates[{d.year, d.month, d.day}].push_back(id);
  }
  for (EntityId id : LiteralsOfType(kg1, LiteralType::kDate)) {
    const LiteralValue& lit = *kg1.literal(id);
    auto it = dates.find({lit.date.year, lit.date.month, lit.date.day});
    if (it == dates.end()) continue;
    for (EntityId other : it->second) {
      if (MatchDates(lit, *kg2.literal(other)) == 1) table.Set(id, other, 1);
    }
  }

  std::vector<std::pair<double, EntityId>> numbers;
  for (EntityId id : LiteralsOfType(kg2, LiteralType::kNumber)) {
    numbers.emplace_back(kg2.literal(id)->number, id);
  }
  std::sort(numbers.begin(), numbers.end(),
            [](const auto& a, const auto& b) {
              return a.first < b.first ||
                     (a.first == b.first && Index(a.second) < Index(b.second));
            });
  for (EntityId id : LiteralsOfType(kg1, LiteralType::kNumber)) {
    double x = kg1.literal(id)->number;
    double slack = 2e-9 * std::fabs(x);
    auto lo = std::lower_bound(
        numbers.begin(), numbers.end(), x - slack,
        [](const auto& e, double v) { return e.first < v; });
    for (auto it = lo; it != numbers.end() && it->first <= x + slack; ++it) {
      if (MatchNumbers(x, it->first) == 1) table.Set(id, it->second, 1);
    }
  }
}

LiteralSimTable BuildLiteralTable(const KnowledgeGraph& kg1,
                                  const KnowledgeGraph& kg2,
                                  const LiteralSimOptions& options,
                                  Execution execution) {
  bool precomputed = !options.precomputed_path.empty();
  LiteralSimTable table(precomputed ? "precomputed" : "builtin_trigram",
                        options.theta_s);
  AddDatesAndNumbers(kg1, kg2, table);
  if (precomputed) {
    AddPrecomputedStrings(options.precomputed_path, kg1, kg2, options.theta_s,
                          options.top_k, table);
  } else {
    AddTrigramStrings(kg1, kg2, options.theta_s, options.top_k, execution,
                      table);
  }
  return table;
}

}  // namespace flora
