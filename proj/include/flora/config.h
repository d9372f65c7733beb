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

#ifndef FLORA_CONFIG_H_
#define FLORA_CONFIG_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace flora {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  double theta_r = 0.1;   // bootstrap relation similarity
  double theta_s = 0.7;   // string similarity cut-off
  double theta_e = 0.1;   // reporting threshold for entity matches
  double alpha = 3.0;     // benefit of the doubt in subrelation scores
  double epsilon = 0.01;  // early stop on the total score change
  int max_iters = 10;
  int L_max = 8;  // longest relation list considered per entity pair
  int fun_budget = 50;
  double rel_report_threshold = 0.1;
  uint64_t rng_seed = 0;

  int candidate_cap = 50;
  int top_k = 10;
  double fun_exact_cap = 1000;
  // Mutual-best pruning between iterations. Off gives the plain
  // fixed-point semantics.
  bool prune = true;

  // Throws ConfigError when a threshold leaves [0, 1], alpha < 1, or a
  // count is not positive.
  void Validate() const;
};

// Sets one field by its name. Throws ConfigError for an unknown key or an
// unparsable value.
void SetConfigValue(Config& config, std::string_view key,
                    std::string_view value);

// Flat "key = value" lines; blank lines and '#' comments are ignored.
void ApplyConfigText(Config& config, std::string_view text,
                     const std::string& source = "config");
void ApplyConfigFile(Config& config, const std::string& path);

// Every field as (name, value) in declaration order; values round-trip
// through SetConfigValue exactly.
std::vector<std::pair<std::string, std::string>> ConfigEntries(
    const Config& config);
std::string FormatConfig(const Config& config);

}  // namespace flora

#endif  // FLORA_CONFIG_H_
