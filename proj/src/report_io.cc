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

#include "flora/report_io.h"

#include <openssl/evp.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "flora/ingest.h"
#include "json.hpp"

namespace flora {
namespace {

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

std::ifstream OpenIn(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  return in;
}

std::vector<std::string_view> Split(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

}  // namespace

std::string FormatScore(double score) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", score);
  return buf;
}

void WriteEntities(const std::string& path,
                   const std::vector<EntityMatch>& entities) {
  std::ofstream out = OpenOut(path);
  for (const EntityMatch& m : entities) {
    out << m.left << '\t' << m.right << '\t' << FormatScore(m.score) << '\n';
  }
}

void WriteRelations(const std::string& path,
                    const std::vector<RelationMatch>& relations) {
  std::ofstream out = OpenOut(path);
  for (const RelationMatch& m : relations) {
    if (!m.op) continue;
    out << m.left << '\t' << ToString(*m.op) << '\t' << m.right << '\t'
        << FormatScore(m.sub12) << '\t' << FormatScore(m.sub21) << '\n';
  }
}

void WriteRanking(const std::string& path,
                  const std::vector<ScoredPair>& ranking) {
  std::ofstream out = OpenOut(path);
  for (const ScoredPair& p : ranking) {
    out << p.left << '\t' << p.right << '\t' << FormatScore(p.score) << '\n';
  }
}

void WriteExplanations(const std::string& path,
                       const ExplanationStore& explanations) {
  std::ofstream out = OpenOut(path);
  for (const Explanation& e : explanations.all()) {
    out << ToJsonLine(e) << '\n';
  }
}

std::vector<ScoredPair> ReadScoredPairs(const std::string& path) {
  std::ifstream in = OpenIn(path);
  std::vector<ScoredPair> pairs;
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = Split(line);
    double score = 0;
    bool ok = fields.size() >= 3 && !fields[0].empty() && !fields[1].empty();
    if (ok) {
      auto f = fields[2];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), score);
      ok = ec == std::errc() && ptr == f.data() + f.size();
    }
    if (!ok) {
      throw DataError(path + ":" + std::to_string(number) +
                      ": expected label1<TAB>label2<TAB>score");
    }
    pairs.push_back({std::string(fields[0]), std::string(fields[1]), score});
  }
  return pairs;
}

std::vector<Explanation> ReadExplanations(const std::string& path) {
  std::ifstream in = OpenIn(path);
  std::vector<Explanation> records;
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      records.push_back(FromJsonLine(line));
    } catch (const std::runtime_error& e) {
      throw DataError(path + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return records;
}

ExplanationStore LoadExplanationStore(const std::string& run_dir) {
  namespace fs = std::filesystem;
  ExplanationStore store;
  for (Explanation& e :
       ReadExplanations((fs::path(run_dir) / kExplanationsFile).string())) {
    store.Add(std::move(e));
  }
  fs::path ranking = fs::path(run_dir) / kRankingFile;
  if (fs::exists(ranking)) {
    for (const ScoredPair& p : ReadScoredPairs(ranking.string())) {
      store.AddScored(p.left, p.right, p.score);
    }
  }
  return store;
}

std::string Sha256File(const std::string& path) {
  std::ifstream in = OpenIn(path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) {
      EVP_DigestUpdate(ctx, buf.data(), static_cast<size_t>(in.gcount()));
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx, digest, &length);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return hex.str();
}

void WriteManifest(const std::string& path, const RunManifest& m) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : ConfigEntries(m.config)) config[key] = value;
  j["config"] = config;
  j["seed"] = m.config.rng_seed;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
  for (const InputDigest& d : m.inputs) {
    inputs.push_back({{"role", d.role}, {"path", d.path}, {"sha256", d.sha256}});
  }
  j["inputs"] = inputs;
  j["literal_provider"] = m.literal_provider;
  j["literal_pairs"] = m.literal_pairs;
  j["threads"] = m.threads;
  j["iterations"] = m.iterations;
  j["converged"] = m.converged;
  j["deltas"] = m.deltas;
  nlohmann::ordered_json timings = nlohmann::ordered_json::object();
  for (const auto& [phase, seconds] : m.timings) timings[phase] = seconds;
  j["timings"] = timings;
  j["entity_matches"] = m.entity_matches;
  j["relation_matches"] = m.relation_matches;
  j["warnings"] = m.warnings;
  std::ofstream out = OpenOut(path);
  out << j.dump(2) << '\n';
}

RunManifest ReadManifest(const std::string& path) {
  std::ifstream in = OpenIn(path);
  RunManifest m;
  try {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(in);
    for (const auto& [key, value] : j.at("config").items()) {
      SetConfigValue(m.config, key, value.get<std::string>());
    }
    for (const auto& d : j.at("inputs")) {
      m.inputs.push_back({d.at("role").get<std::string>(),
                          d.at("path").get<std::string>(),
                          d.at("sha256").get<std::string>()});
    }
    m.literal_provider = j.value("literal_provider", "");
    m.literal_pairs = j.value("literal_pairs", size_t{0});
    m.threads = j.value("threads", 0);
    m.iterations = j.value("iterations", 0);
    m.converged = j.value("converged", false);
    m.deltas = j.value("deltas", std::vector<double>{});
    for (const auto& [phase, seconds] : j.at("timings").items()) {
      m.timings.emplace_back(phase, seconds.get<double>());
    }
    m.entity_matches = j.value("entity_matches", size_t{0});
    m.relation_matches = j.value("relation_matches", size_t{0});
    m.warnings = j.value("warnings", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return m;
}

void WriteRunDirectory(const std::string& dir, const AlignmentReport& report) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir + ": " + ec.message());
  fs::path base(dir);
  WriteEntities((base / kEntitiesFile).string(), report.entities);
  WriteRelations((base / kRelationsFile).string(), report.relations);
  WriteRanking((base / kRankingFile).string(), report.ranking);
  WriteExplanations((base / kExplanationsFile).string(), report.explanations);
}

}  // namespace flora
