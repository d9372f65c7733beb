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

#ifndef FLORA_TESTS_SUPPORT_SYNTHETIC_H_
#define FLORA_TESTS_SUPPORT_SYNTHETIC_H_

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "flora/ingest.h"

namespace flora::testing {

struct SyntheticOptions {
  uint64_t seed = 7;
  int entities = 200;
  int relational_triples = 1000;
  int attribute_triples = 300;
  // Each triple is dropped from each side independently with this
  // probability.
  double drop = 0;
  // Extra entities per side, as a fraction of `entities`, that exist only
  // in that side.
  double dangling = 0;
};

struct SyntheticDataset {
  DatasetBundle bundle;
  // Shared entities with at least one fact on both sides.
  std::vector<LabelPair> gold;
  std::set<std::string> dangling1;
  std::set<std::string> dangling2;
};

// A random KG with hub-style many-to-one relations, a one-to-one relation,
// many-to-many relations and unique name, date and number attributes; KG2
// is a copy with scrambled entity and relation labels.
SyntheticDataset MakeSynthetic(const SyntheticOptions& options);

}  // namespace flora::testing

#endif  // FLORA_TESTS_SUPPORT_SYNTHETIC_H_
