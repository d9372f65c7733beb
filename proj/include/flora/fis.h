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

#ifndef FLORA_FIS_H_
#define FLORA_FIS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

// Simple positive fuzzy inference systems whose outputs may feed back into
// premises, solved to their least fixed point by max-merge sweeps.
namespace flora::fis {

// Continuous, non-decreasing aggregation of premise values in [0, 1].
class Aggregator {
 public:
  enum class Kind : uint8_t { kMin, kHmean, kAlphaMean, kIdentity };

  static Aggregator Min() { return Aggregator(Kind::kMin, 1.0); }
  static Aggregator Hmean() { return Aggregator(Kind::kHmean, 1.0); }
  // Arithmetic mean scaled by alpha and clamped to [0, 1]. alpha >= 1.
  static Aggregator AlphaMean(double alpha);
  static Aggregator Identity() { return Aggregator(Kind::kIdentity, 1.0); }

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  std::string Name() const;

  // Identity demands exactly one value; every other kind at least one.
  double Apply(std::span<const double> values) const;

  bool operator==(const Aggregator&) const = default;

 private:
  Aggregator(Kind kind, double alpha) : kind_(kind), alpha_(alpha) {}

  Kind kind_;
  double alpha_;
};

double MinOf(std::span<const double> values);
// n / sum(1/x); 0 as soon as one argument is 0.
double HarmonicMean(std::span<const double> values);
double AlphaMean(std::span<const double> values, double alpha);

enum class VariableId : uint32_t {};
inline constexpr uint32_t Index(VariableId v) {
  return static_cast<uint32_t>(v);
}

struct Variable {
  std::string name;
  bool is_input = false;
  // Given value for inputs; floor that may not be undercut for outputs.
  double value = 0.0;
};

struct Rule {
  std::vector<VariableId> premises;
  Aggregator aggregator = Aggregator::Min();
  VariableId conclusion{};
};

class System {
 public:
  VariableId AddInput(std::string name, double value);
  VariableId AddOutput(std::string name, double initial = 0.0);
  // An anonymous input holding `value`.
  VariableId AddConstant(double value);
  // Throws std::invalid_argument on an empty premise list, an identity rule
  // with more than one premise, or an input conclusion.
  void AddRule(Rule rule);

  std::span<const Variable> variables() const { return variables_; }
  std::span<const Rule> rules() const { return rules_; }
  const Variable& variable(VariableId id) const {
    return variables_.at(Index(id));
  }
  std::optional<VariableId> Find(std::string_view name) const;

  // Same system with the rules in `order` (a permutation of rule indices).
  System WithRuleOrder(std::span<const size_t> order) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Rule> rules_;
  std::unordered_map<std::string, VariableId> by_name_;
};

struct Assignment {
  std::vector<double> values;  // indexed by VariableId
  int sweeps = 0;
  bool converged = false;

  double operator[](VariableId id) const { return values.at(Index(id)); }
};

struct SolveOptions {
  double epsilon = 1e-9;
  int max_sweeps = 10000;
};

double FiringStrength(const Rule& rule, std::span<const double> values);

// Runs in-place max-merge sweeps over the rules in order until a full sweep
// changes no variable by `epsilon` or more. `on_sweep`, when set, receives
// the value vector after every sweep.
Assignment Solve(
    const System& system, const SolveOptions& options = {},
    const std::function<void(std::span<const double>)>& on_sweep = {});

struct LeastFixedPointCheck {
  bool ok = true;
  std::optional<VariableId> counterexample;
  std::string reason;
};

// Checks that `assignment` satisfies every rule and is not above the least
// fixed point. Two grid iterations from the initial values bracket that
// point: one rounding down (stays below it) and one rounding up (a
// satisfying vector above it). The assignment must lie between the two,
// within `grid_step`.
LeastFixedPointCheck VerifyLeastFixedPoint(const System& system,
                                           const Assignment& assignment,
                                           double grid_step);

// Text rule format, one statement per line, '#' starts a comment:
//   input <name> = <value>
//   init <name> = <value>
//   <conclusion> <= <agg>(<premise or constant>, ...)
// where <agg> is min, hmean, id, or alpha_mean[<alpha>]. Names that
// appear as a conclusion are outputs. Throws std::invalid_argument with the
// line number on malformed input.
System ParseRules(std::string_view text);
System LoadRuleFile(const std::string& path);

}  // namespace flora::fis

#endif  // FLORA_FIS_H_
