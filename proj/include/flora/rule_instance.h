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

#ifndef FLORA_RULE_INSTANCE_H_
#define FLORA_RULE_INSTANCE_H_

#include <vector>

#include "flora/functionality.h"
#include "flora/kg.h"

namespace flora {

// One matched position of an entity rule: fact relation(head, t) in KG1
// paired with relation2(head2, t') in KG2.
struct MatchedFact {
  RelationId relation;
  EntityId head;
  RelationId relation2;
  EntityId head2;
  double head_score;  // head == head2
  double rel_score;   // relation ~ relation2
};

// The strongest firing of the entity rule for a pair (t, t'):
//   min(hmean(head scores), hmean(relation scores),
//       fun(R), fun(R, H), fun(R'), fun(R', H')).
struct RuleInstance {
  EntityId left{};
  EntityId right{};
  std::vector<MatchedFact> positions;  // descending evidence order
  FunEstimate fun_list;
  FunEstimate fun_local;
  FunEstimate fun_list2;
  FunEstimate fun_local2;
  double head_mean = 0;
  double rel_mean = 0;
  double strength = 0;
};

// Recomputes the rule strength from the recorded premise values alone.
double RecomputeStrength(const RuleInstance& rule);

}  // namespace flora

#endif  // FLORA_RULE_INSTANCE_H_
