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

// Command-line entry points: align, eval, explain.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flora/config.h"
#include "flora/engine.h"
#include "flora/eval.h"
#include "flora/explain.h"
#include "flora/ingest.h"
#include "flora/literal_sim.h"
#include "flora/parallel.h"
#include "flora/report_io.h"

namespace {

namespace fs = std::filesystem;
using flora::ConfigError;
using flora::DataError;

constexpr int kConfigExit = 1;
constexpr int kDataExit = 2;
constexpr int kNotFoundExit = 3;

void Log(const std::string& message) {
  std::cerr << "flora: " << message << '\n';
}

class Timer {
 public:
  double Lap() {
    auto now = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ =
      std::chrono::steady_clock::now();
};

struct AlignArgs {
  std::string kg1, attr1, kg2, attr2, openea, seeds, sim_file, config_file;
  std::string out_dir = "flora_out";
  std::optional<uint64_t> seed;
  int threads = 0;
  std::map<std::string, std::string> overrides;
  bool serial = false;
};

int ResolveThreads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("FLORA_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("FLORA_THREADS must be a positive integer, got ") + env);
  }
  return 0;
}

int RunAlign(const AlignArgs& args) {
  bool pair_given = !args.kg1.empty() || !args.kg2.empty();
  if (args.openea.empty() && (args.kg1.empty() || args.kg2.empty())) {
    throw ConfigError(pair_given
                          ? std::string("--kg1 and --kg2 are both required")
                          : std::string("give --kg1 and --kg2, or --openea"));
  }
  if (!args.openea.empty() && pair_given) {
    throw ConfigError("--openea cannot be combined with --kg1/--kg2");
  }

  flora::Config config;
  if (!args.config_file.empty()) flora::ApplyConfigFile(config, args.config_file);
  for (const auto& [key, value] : args.overrides) {
    flora::SetConfigValue(config, key, value);
  }
  if (args.seed) config.rng_seed = *args.seed;
  config.Validate();

  int threads = ResolveThreads(args.threads);
  flora::SetThreadCount(threads);
  auto execution =
      args.serial ? flora::Execution::kSerial : flora::Execution::kParallel;

  Timer timer;
  flora::RunManifest manifest;
  flora::DatasetBundle bundle;
  auto digest = [&](const std::string& role, const std::string& path) {
    if (!path.empty()) {
      manifest.inputs.push_back({role, path, flora::Sha256File(path)});
    }
  };
  if (!args.openea.empty()) {
    Log("loading " + args.openea);
    bundle = flora::LoadOpenEaDir(args.openea);
    for (const char* name : {"rel_triples_1", "attr_triples_1", "rel_triples_2",
                             "attr_triples_2", "ent_links"}) {
      digest(name, (fs::path(args.openea) / name).string());
    }
  } else {
    Log("loading " + args.kg1 + " and " + args.kg2);
    bundle = flora::LoadTriplePair(args.kg1, args.attr1, args.kg2, args.attr2);
    digest("kg1", args.kg1);
    digest("attr1", args.attr1);
    digest("kg2", args.kg2);
    digest("attr2", args.attr2);
  }
  if (!args.seeds.empty()) {
    flora::LoadSeedLinks(args.seeds, bundle);
    digest("seeds", args.seeds);
  }
  digest("sim_file", args.sim_file);
  for (const std::string& w : bundle.warnings) Log("warning: " + w);
  manifest.timings.emplace_back("ingest", timer.Lap());

  flora::LiteralSimOptions literal_options;
  literal_options.theta_s = config.theta_s;
  literal_options.top_k = config.top_k;
  literal_options.precomputed_path = args.sim_file;
  flora::LiteralSimTable literals = flora::BuildLiteralTable(
      bundle.kg1, bundle.kg2, literal_options, execution);
  for (const std::string& w : literals.warnings()) Log("warning: " + w);
  Log(literals.provider() + " literal similarity: " +
      std::to_string(literals.size()) + " pairs");
  manifest.timings.emplace_back("literal_similarity", timer.Lap());

  flora::Aligner aligner(bundle, literals, config);
  aligner.set_iteration_hook([](int it, const flora::Aligner& a) {
    Log("iteration " + std::to_string(it) + ": " +
        std::to_string(a.store().size()) + " stored pairs");
  });
  flora::AlignmentReport report = aligner.Run(execution);
  manifest.timings.emplace_back("align", timer.Lap());

  flora::WriteRunDirectory(args.out_dir, report);
  manifest.timings.emplace_back("write", timer.Lap());

  manifest.config = config;
  manifest.literal_provider = report.literal_provider;
  manifest.literal_pairs = report.literal_pairs;
  manifest.threads = flora::ThreadCount();
  manifest.iterations = report.iterations;
  manifest.converged = report.converged;
  manifest.deltas = report.deltas;
  manifest.entity_matches = report.entities.size();
  for (const auto& r : report.relations) manifest.relation_matches += r.op.has_value();
  manifest.warnings = bundle.warnings;
  for (const std::string& w : literals.warnings()) manifest.warnings.push_back(w);
  flora::WriteManifest((fs::path(args.out_dir) / flora::kManifestFile).string(),
                       manifest);
  Log("wrote " + std::to_string(report.entities.size()) + " entity and " +
      std::to_string(manifest.relation_matches) + " relation matches to " +
      args.out_dir + " after " + std::to_string(report.iterations) +
      " iterations");
  return 0;
}

struct EvalArgs {
  std::string pred, gold, ranking, kg1, relations, gold_relations, out;
  std::vector<int> ks = {1, 10};
};

std::vector<flora::LabelPair> ToLabelPairs(
    const std::vector<flora::ScoredPair>& scored) {
  std::vector<flora::LabelPair> pairs;
  for (const auto& p : scored) pairs.push_back({p.left, p.right});
  return pairs;
}

int RunEval(const EvalArgs& args) {
  for (int k : args.ks) {
    if (k <= 0) throw ConfigError("--ks values must be positive");
  }
  flora::EvalReport report;
  auto predicted = flora::ReadLinks(args.pred);
  auto gold = flora::ReadLinks(args.gold);
  if (gold.empty()) throw DataError(args.gold + ": no gold links");
  report.overall = flora::ClassificationMetrics(predicted, gold);

  if (!args.ranking.empty()) {
    std::string path = args.ranking;
    if (fs::is_directory(path)) path = (fs::path(path) / flora::kRankingFile).string();
    auto scored = flora::ReadScoredPairs(path);
    report.ranking = flora::RankingMetrics(scored, gold, args.ks);
  }
  if (!args.kg1.empty()) {
    flora::KnowledgeGraph kg("kg1");
    flora::ParseTripleFile(args.kg1, flora::LiteralMode::kRelational, kg);
    report.per_category = flora::CategoryBreakdown(predicted, gold, kg);
  }
  if (!args.gold_relations.empty()) {
    std::vector<flora::LabelPair> pred_rel, gold_rel;
    if (!args.relations.empty()) {
      for (const auto& l : flora::ReadRelationLinks(args.relations)) {
        pred_rel.push_back({l.left, l.right});
      }
    }
    for (const auto& l : flora::ReadRelationLinks(args.gold_relations)) {
      gold_rel.push_back({l.left, l.right});
    }
    if (!gold_rel.empty()) {
      report.per_category[flora::Category::kRelation] =
          flora::ClassificationMetrics(pred_rel, gold_rel);
    }
  }
  std::string text = flora::FormatEvalReport(report);
  std::cout << text;
  if (!args.out.empty()) {
    std::ofstream out(args.out);
    if (!out) throw DataError("cannot write " + args.out);
    out << text;
  }
  return 0;
}

struct ExplainArgs {
  std::string run_dir;
  std::vector<std::string> pair;
  bool all = false;
  bool json = false;
};

int RunExplain(const ExplainArgs& args) {
  if (args.pair.empty() == !args.all) {
    throw ConfigError("give exactly one of --pair or --all");
  }
  flora::ExplanationStore store = flora::LoadExplanationStore(args.run_dir);
  auto emit = [&](const flora::Explanation& e) {
    std::cout << (args.json ? flora::ToJsonLine(e) + "\n"
                            : flora::RenderText(e));
  };
  if (args.all) {
    for (const flora::Explanation* e : store.Reported()) emit(*e);
    return 0;
  }
  flora::ExplainResult result = store.Lookup(args.pair[0], args.pair[1]);
  switch (result.status) {
    case flora::ExplainStatus::kFound:
      emit(*result.explanation);
      return 0;
    case flora::ExplainStatus::kNotReported:
      std::cerr << "not reported: " << args.pair[0] << " / " << args.pair[1]
                << " was scored (best " << flora::FormatScore(*result.best_score)
                << ") but is below theta_e or lost the one-to-one selection\n";
      return kNotFoundExit;
    case flora::ExplainStatus::kNeverScored:
      std::cerr << "never scored: " << args.pair[0] << " / " << args.pair[1]
                << " was never a candidate pair\n";
      return kNotFoundExit;
  }
  return kNotFoundExit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised knowledge graph alignment"};
  app.require_subcommand(1);

  AlignArgs align;
  CLI::App* align_cmd = app.add_subcommand("align", "align two knowledge graphs");
  align_cmd->add_option("--kg1", align.kg1, "relational triples of KG1");
  align_cmd->add_option("--attr1", align.attr1, "attribute triples of KG1");
  align_cmd->add_option("--kg2", align.kg2, "relational triples of KG2");
  align_cmd->add_option("--attr2", align.attr2, "attribute triples of KG2");
  align_cmd->add_option("--openea", align.openea, "OpenEA-style dataset directory");
  align_cmd->add_option("--seeds", align.seeds, "seed entity links");
  align_cmd->add_option("--sim-file", align.sim_file,
                        "precomputed literal similarities (TSV)");
  align_cmd->add_option("--config", align.config_file, "key = value config file");
  align_cmd->add_option("--out-dir", align.out_dir, "output directory")
      ->capture_default_str();
  align_cmd->add_option("--seed", align.seed, "random seed (sets rng_seed)");
  align_cmd->add_option("--threads", align.threads,
                        "worker threads (default FLORA_THREADS or all cores)");
  align_cmd->add_flag("--serial", align.serial, "use the serial kernels");
  std::vector<std::pair<std::string, std::string>> defaults =
      flora::ConfigEntries(flora::Config{});
  std::map<std::string, std::string> override_values;
  for (const auto& [key, value] : defaults) {
    align_cmd->add_option("--" + key, override_values[key],
                          "config override (default " + value + ")");
  }

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "score an alignment");
  eval_cmd->add_option("--pred", eval.pred, "predicted entity pairs")->required();
  eval_cmd->add_option("--gold", eval.gold, "gold entity links")->required();
  eval_cmd->add_option("--ranking", eval.ranking, "run directory or ranking TSV");
  eval_cmd->add_option("--ks", eval.ks, "Hit@K cut-offs")->delimiter(',');
  eval_cmd->add_option("--kg1", eval.kg1,
                       "KG1 relational triples for the category breakdown");
  eval_cmd->add_option("--relations", eval.relations, "predicted relation TSV");
  eval_cmd->add_option("--gold-relations", eval.gold_relations,
                       "gold relation links");
  eval_cmd->add_option("--out", eval.out, "also write the report here");

  ExplainArgs explain;
  CLI::App* explain_cmd = app.add_subcommand("explain", "justify matches");
  explain_cmd->add_option("--run-dir", explain.run_dir, "align output directory")
      ->required();
  explain_cmd->add_option("--pair", explain.pair, "KG1 label and KG2 label")
      ->expected(2);
  explain_cmd->add_flag("--all", explain.all, "every reported match");
  explain_cmd->add_flag("--json", explain.json, "JSON lines instead of text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*align_cmd) {
      for (const auto& [key, value] : override_values) {
        if (align_cmd->count("--" + key) > 0) align.overrides[key] = value;
      }
      return RunAlign(align);
    }
    if (*eval_cmd) return RunEval(eval);
    return RunExplain(explain);
  } catch (const ConfigError& e) {
    std::cerr << "flora: config error: " << e.what() << '\n';
    if (*align_cmd) std::cerr << align_cmd->help();
    return kConfigExit;
  } catch (const DataError& e) {
    std::cerr << "flora: data error: " << e.what() << '\n';
    return kDataExit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "flora: data error: " << e.what() << '\n';
    return kDataExit;
  }
}
