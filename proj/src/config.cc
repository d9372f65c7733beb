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

#include "flora/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace flora {
namespace {

template <typename T>
T ParseField(std::string_view key, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("bad value for " + std::string(key) + ": '" +
                      std::string(text) + "'");
  }
  return value;
}

bool ParseBool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("bad value for " + std::string(key) + ": '" +
                    std::string(text) + "'");
}

std::string FormatDouble(double v) {
  // Shortest representation that parses back to the same double.
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, ptr);
}

std::string_view Trim(std::string_view s) {
  size_t first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  size_t last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

void RequireUnit(std::string_view name, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ConfigError(std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

void Config::Validate() const {
  RequireUnit("theta_r", theta_r);
  RequireUnit("theta_s", theta_s);
  RequireUnit("theta_e", theta_e);
  RequireUnit("rel_report_threshold", rel_report_threshold);
  if (!(alpha >= 1.0)) throw ConfigError("alpha must be >= 1");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (L_max < 1) throw ConfigError("L_max must be >= 1");
  if (fun_budget < 1) throw ConfigError("fun_budget must be >= 1");
  if (candidate_cap < 1) throw ConfigError("candidate_cap must be >= 1");
  if (top_k < 1) throw ConfigError("top_k must be >= 1");
  if (!(fun_exact_cap >= 0)) throw ConfigError("fun_exact_cap must be >= 0");
}

void SetConfigValue(Config& c, std::string_view key, std::string_view value) {
  value = Trim(value);
  if (key == "theta_r") {
    c.theta_r = ParseField<double>(key, value);
  } else if (key == "theta_s") {
    c.theta_s = ParseField<double>(key, value);
  } else if (key == "theta_e") {
    c.theta_e = ParseField<double>(key, value);
  } else if (key == "alpha") {
    c.alpha = ParseField<double>(key, value);
  } else if (key == "epsilon") {
    c.epsilon = ParseField<double>(key, value);
  } else if (key == "max_iters") {
    c.max_iters = ParseField<int>(key, value);
  } else if (key == "L_max") {
    c.L_max = ParseField<int>(key, value);
  } else if (key == "fun_budget") {
    c.fun_budget = ParseField<int>(key, value);
  } else if (key == "rel_report_threshold") {
    c.rel_report_threshold = ParseField<double>(key, value);
  } else if (key == "rng_seed") {
    c.rng_seed = ParseField<uint64_t>(key, value);
  } else if (key == "candidate_cap") {
    c.candidate_cap = ParseField<int>(key, value);
  } else if (key == "top_k") {
    c.top_k = ParseField<int>(key, value);
  } else if (key == "fun_exact_cap") {
    c.fun_exact_cap = ParseField<double>(key, value);
  } else if (key == "prune") {
    c.prune = ParseBool(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

void ApplyConfigText(Config& config, std::string_view text,
                     const std::string& source) {
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    std::string_view view = Trim(line);
    if (view.empty()) continue;
    size_t eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(source + ":" + std::to_string(number) +
                        ": expected key = value");
    }
    try {
      SetConfigValue(config, Trim(view.substr(0, eq)), view.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(number) + ": " +
                        e.what());
    }
  }
}

void ApplyConfigFile(Config& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  ApplyConfigText(config, buffer.str(), path);
}

std::vector<std::pair<std::string, std::string>> ConfigEntries(
    const Config& c) {
  return {
      {"theta_r", FormatDouble(c.theta_r)},
      {"theta_s", FormatDouble(c.theta_s)},
      {"theta_e", FormatDouble(c.theta_e)},
      {"alpha", FormatDouble(c.alpha)},
      {"epsilon", FormatDouble(c.epsilon)},
      {"max_iters", std::to_string(c.max_iters)},
      {"L_max", std::to_string(c.L_max)},
      {"fun_budget", std::to_string(c.fun_budget)},
      {"rel_report_threshold", FormatDouble(c.rel_report_threshold)},
      {"rng_seed", std::to_string(c.rng_seed)},
      {"candidate_cap", std::to_string(c.candidate_cap)},
      {"top_k", std::to_string(c.top_k)},
      {"fun_exact_cap", FormatDouble(c.fun_exact_cap)},
      {"prune", c.prune ? "true" : "false"},
  };
}

std::string FormatConfig(const Config& config) {
  std::string out;
  for (const auto& [key, value] : ConfigEntries(config)) {
    out += key + " = " + value + "\n";
  }
  return out;
}

}  // namespace flora
