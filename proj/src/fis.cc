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

#include "flora/fis.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace flora::fis {

Aggregator Aggregator::AlphaMean(double alpha) {
  if (!(alpha >= 1.0)) {
    throw std::invalid_argument("alpha_mean requires alpha >= 1");
  }
  return Aggregator(Kind::kAlphaMean, alpha);
}

std::string Aggregator::Name() const {
  switch (kind_) {
    case Kind::kMin:
      return "min";
    case Kind::kHmean:
      return "hmean";
    case Kind::kIdentity:
      return "id";
    case Kind::kAlphaMean: {
      std::ostringstream out;
      out << "alpha_mean[" << alpha_ << "]";
      return out.str();
    }
  }
  return "?";
}

double MinOf(std::span<const double> values) {
  return *std::min_element(values.begin(), values.end());
}

double HarmonicMean(std::span<const double> values) {
  double inverse_sum = 0;
  for (double v : values) {
    if (v <= 0) return 0;
    inverse_sum += 1.0 / v;
  }
  return static_cast<double>(values.size()) / inverse_sum;
}

double AlphaMean(std::span<const double> values, double alpha) {
  double sum = 0;
  for (double v : values) sum += v;
  double mean = sum / static_cast<double>(values.size());
  return std::clamp(alpha * mean, 0.0, 1.0);
}

double Aggregator::Apply(std::span<const double> values) const {
  if (values.empty()) throw std::invalid_argument("aggregating no values");
  switch (kind_) {
    case Kind::kMin:
      return MinOf(values);
    case Kind::kHmean:
      return HarmonicMean(values);
    case Kind::kAlphaMean:
      return fis::AlphaMean(values, alpha_);
    case Kind::kIdentity:
      if (values.size() != 1) {
        throw std::invalid_argument("identity aggregator takes one value");
      }
      return values.front();
  }
  return 0;
}

VariableId System::AddInput(std::string name, double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument("input " + name + " outside [0, 1]");
  }
  VariableId id{static_cast<uint32_t>(variables_.size())};
  if (!name.empty() && !by_name_.emplace(name, id).second) {
    throw std::invalid_argument("duplicate variable " + name);
  }
  variables_.push_back({std::move(name), true, value});
  return id;
}

VariableId System::AddOutput(std::string name, double initial) {
  if (!(initial >= 0.0 && initial <= 1.0)) {
    throw std::invalid_argument("initial value of " + name +
                                " outside [0, 1]");
  }
  VariableId id{static_cast<uint32_t>(variables_.size())};
  if (!name.empty() && !by_name_.emplace(name, id).second) {
    throw std::invalid_argument("duplicate variable " + name);
  }
  variables_.push_back({std::move(name), false, initial});
  return id;
}

VariableId System::AddConstant(double value) { return AddInput("", value); }

void System::AddRule(Rule rule) {
  if (rule.premises.empty()) {
    throw std::invalid_argument("rule without premises");
  }
  if (rule.aggregator.kind() == Aggregator::Kind::kIdentity &&
      rule.premises.size() != 1) {
    throw std::invalid_argument("identity rule needs exactly one premise");
  }
  for (VariableId p : rule.premises) {
    if (Index(p) >= variables_.size()) {
      throw std::invalid_argument("rule premise out of range");
    }
  }
  if (Index(rule.conclusion) >= variables_.size() ||
      variables_[Index(rule.conclusion)].is_input) {
    throw std::invalid_argument("rule conclusion must be an output variable");
  }
  rules_.push_back(std::move(rule));
}

std::optional<VariableId> System::Find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

System System::WithRuleOrder(std::span<const size_t> order) const {
  System copy = *this;
  copy.rules_.clear();
  for (size_t i : order) copy.rules_.push_back(rules_.at(i));
  return copy;
}

double FiringStrength(const Rule& rule, std::span<const double> values) {
  double buffer[16];
  std::vector<double> heap;
  std::span<double> premises;
  if (rule.premises.size() <= 16) {
    premises = std::span<double>(buffer, rule.premises.size());
  } else {
    heap.resize(rule.premises.size());
    premises = heap;
  }
  for (size_t i = 0; i < rule.premises.size(); ++i) {
    premises[i] = values[Index(rule.premises[i])];
  }
  return rule.aggregator.Apply(premises);
}

Assignment Solve(const System& system, const SolveOptions& options,
                 const std::function<void(std::span<const double>)>& on_sweep) {
  Assignment result;
  for (const Variable& v : system.variables()) result.values.push_back(v.value);
  while (result.sweeps < options.max_sweeps) {
    double max_change = 0;
    for (const Rule& rule : system.rules()) {
      double strength = FiringStrength(rule, result.values);
      double& current = result.values[Index(rule.conclusion)];
      if (strength > current) {
        max_change = std::max(max_change, strength - current);
        current = strength;
      }
    }
    ++result.sweeps;
    if (on_sweep) on_sweep(result.values);
    if (max_change < options.epsilon) {
      result.converged = true;
      break;
    }
  }
  return result;
}

namespace {

// Synchronous iteration from the initial values in which every firing
// strength is snapped to the grid. Terminates because values only grow on
// a finite lattice.
std::vector<double> GridIteration(const System& system, double step,
                                  bool round_up) {
  auto snap = [&](double x) {
    double cells = x / step;
    double snapped = round_up ? std::ceil(cells - 1e-9) : std::floor(cells + 1e-9);
    return std::clamp(snapped * step, 0.0, 1.0);
  };
  std::vector<double> values;
  for (const Variable& v : system.variables()) {
    values.push_back(v.is_input ? v.value : snap(v.value));
  }
  std::vector<double> next = values;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Rule& rule : system.rules()) {
      double s = snap(FiringStrength(rule, values));
      double& slot = next[Index(rule.conclusion)];
      if (s > slot) slot = s;
    }
    for (size_t i = 0; i < values.size(); ++i) {
      if (next[i] > values[i]) {
        values[i] = next[i];
        changed = true;
      }
    }
  }
  return values;
}

}  // namespace

LeastFixedPointCheck VerifyLeastFixedPoint(const System& system,
                                           const Assignment& assignment,
                                           double grid_step) {
  LeastFixedPointCheck check;
  const auto& values = assignment.values;
  if (values.size() != system.variables().size()) {
    check.ok = false;
    check.reason = "assignment size mismatch";
    return check;
  }
  // An inflated variable is named before the rules it breaks downstream.
  std::vector<double> above = GridIteration(system, grid_step, true);
  for (size_t i = 0; i < values.size(); ++i) {
    if (system.variables()[i].is_input) continue;
    if (values[i] > above[i] + grid_step) {
      check.ok = false;
      check.counterexample = VariableId(static_cast<uint32_t>(i));
      check.reason = "above the least fixed point";
      return check;
    }
  }
  for (const Rule& rule : system.rules()) {
    double strength = FiringStrength(rule, values);
    if (values[Index(rule.conclusion)] + grid_step < strength) {
      check.ok = false;
      check.counterexample = rule.conclusion;
      check.reason = "rule unsatisfied";
      return check;
    }
  }
  std::vector<double> below = GridIteration(system, grid_step, false);
  for (size_t i = 0; i < values.size(); ++i) {
    if (system.variables()[i].is_input) continue;
    if (below[i] > values[i] + grid_step) {
      check.ok = false;
      check.counterexample = VariableId(static_cast<uint32_t>(i));
      check.reason = "below the least fixed point";
      return check;
    }
  }
  return check;
}

namespace {

[[noreturn]] void Fail(int line, const std::string& message) {
  throw std::invalid_argument("rule file line " + std::to_string(line) +
                              ": " + message);
}

bool ParseValue(std::string_view s, double* value) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

struct RuleLine {
  int line;
  std::string conclusion;
  Aggregator aggregator;
  std::vector<std::string> premises;
};

}  // namespace

System ParseRules(std::string_view text) {
  static const std::regex kDeclaration(
      R"(^\s*(input|init)\s+([A-Za-z_][\w.']*)\s*=\s*(\S+)\s*$)");
  static const std::regex kRule(
      R"(^\s*([A-Za-z_][\w.']*)\s*<=\s*(min|hmean|id|identity|alpha_mean\[([^\]]+)\])\s*\((.*)\)\s*$)");

  std::vector<std::pair<std::string, double>> inputs;
  std::unordered_map<std::string, double> inits;
  std::vector<RuleLine> rules;

  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::smatch m;
    if (std::regex_match(line, m, kDeclaration)) {
      double value = 0;
      if (!ParseValue(m[3].str(), &value)) Fail(number, "bad value");
      if (m[1] == "input") {
        inputs.emplace_back(m[2].str(), value);
      } else {
        inits[m[2].str()] = value;
      }
      continue;
    }
    if (!std::regex_match(line, m, kRule)) Fail(number, "unrecognized line");
    RuleLine rule{number, m[1].str(), Aggregator::Min(), {}};
    std::string agg = m[2].str();
    if (agg == "hmean") {
      rule.aggregator = Aggregator::Hmean();
    } else if (agg == "id" || agg == "identity") {
      rule.aggregator = Aggregator::Identity();
    } else if (agg.starts_with("alpha_mean")) {
      double alpha = 0;
      if (!ParseValue(m[3].str(), &alpha) || alpha < 1) {
        Fail(number, "alpha must be a number >= 1");
      }
      rule.aggregator = Aggregator::AlphaMean(alpha);
    }
    std::string args = m[4].str();
    std::istringstream items(args);
    std::string item;
    while (std::getline(items, item, ',')) {
      auto first = item.find_first_not_of(" \t");
      auto last = item.find_last_not_of(" \t\r");
      if (first == std::string::npos) Fail(number, "empty premise");
      rule.premises.push_back(item.substr(first, last - first + 1));
    }
    if (rule.premises.empty()) Fail(number, "rule without premises");
    rules.push_back(std::move(rule));
  }

  System system;
  try {
    for (auto& [name, value] : inputs) system.AddInput(name, value);
    for (const RuleLine& r : rules) {
      if (!system.Find(r.conclusion)) {
        auto init = inits.find(r.conclusion);
        system.AddOutput(r.conclusion,
                         init == inits.end() ? 0.0 : init->second);
      }
    }
  } catch (const std::invalid_argument& e) {
    Fail(0, e.what());
  }
  for (const auto& [name, value] : inits) {
    if (!system.Find(name)) {
      throw std::invalid_argument("init for " + name +
                                  ", which is never concluded");
    }
  }

  std::unordered_map<std::string, VariableId> constants;
  for (const RuleLine& r : rules) {
    Rule rule;
    rule.aggregator = r.aggregator;
    rule.conclusion = *system.Find(r.conclusion);
    for (const std::string& p : r.premises) {
      if (auto id = system.Find(p)) {
        rule.premises.push_back(*id);
        continue;
      }
      double value = 0;
      if (!ParseValue(p, &value)) Fail(r.line, "unknown variable " + p);
      if (value < 0 || value > 1) Fail(r.line, "constant outside [0, 1]");
      auto [it, inserted] = constants.try_emplace(p, VariableId{});
      if (inserted) it->second = system.AddConstant(value);
      rule.premises.push_back(it->second);
    }
    try {
      system.AddRule(std::move(rule));
    } catch (const std::invalid_argument& e) {
      Fail(r.line, e.what());
    }
  }
  return system;
}

System LoadRuleFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rule file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseRules(buffer.str());
}

}  // namespace flora::fis
