// core/src/dataset.cc

// Copyright 2026  KWS Toolkit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "kws/dataset.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "kws/rng.h"

namespace kws {

namespace {

// Two-row Levenshtein DP over characters; rows hold hypothesis.size() + 1
// entries each.
int edit_distance(const std::string& reference, const std::string& hypothesis,
                  int* prev, int* curr) {
  const std::size_t n = hypothesis.size();
  std::iota(prev, prev + n + 1, 0);
  for (std::size_t i = 1; i <= reference.size(); ++i) {
    curr[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= n; ++j) {
      const int sub = prev[j - 1] + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, sub});
    }
    std::swap(prev, curr);
  }
  return prev[n];
}

}  // namespace

double compute_cer(const std::string& reference, const std::string& hypothesis) {
  if (reference.empty()) {
    throw std::invalid_argument("compute_cer: empty reference");
  }
  constexpr std::size_t kStackRow = 64;
  int distance;
  if (hypothesis.size() < kStackRow) {
    int prev[kStackRow], curr[kStackRow];
    distance = edit_distance(reference, hypothesis, prev, curr);
  } else {
    std::vector<int> prev(hypothesis.size() + 1), curr(hypothesis.size() + 1);
    distance = edit_distance(reference, hypothesis, prev.data(), curr.data());
  }
  return static_cast<double>(distance) / static_cast<double>(reference.size());
}

FilterConfig::FilterConfig() {
  const auto spec = SplitSpec::gsc_default();
  excluded_keywords.insert(spec.user_defined.begin(), spec.user_defined.end());
}

namespace {

// Keywords ranked by descending frequency, lexicographic tie-break.
std::vector<std::string> rank_keywords(const std::vector<ManifestEntry>& entries) {
  std::map<std::string, std::size_t> counts;
  for (const auto& e : entries) ++counts[e.keyword];
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> keywords;
  keywords.reserve(ranked.size());
  for (const auto& [kw, _] : ranked) keywords.push_back(kw);
  return keywords;
}

}  // namespace

std::vector<ManifestEntry> filter_manifest(const std::vector<ManifestEntry>& entries,
                                           const FilterConfig& cfg,
                                           FilterStats* stats) {
  FilterStats local;
  std::vector<ManifestEntry> cer_retained;
  cer_retained.reserve(entries.size());
  for (const auto& e : entries) {
    if (compute_cer(e.keyword, e.hypothesis) <= cfg.cer_threshold) {
      cer_retained.push_back(e);
    } else {
      ++local.dropped_cer;
    }
  }

  std::set<std::string> top_frequent;
  if (cfg.drop_top_frequent > 0) {
    const auto ranked = rank_keywords(cer_retained);
    const std::size_t take =
        std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(cfg.drop_top_frequent));
    top_frequent.insert(ranked.begin(), ranked.begin() + take);
  }

  std::vector<ManifestEntry> out;
  out.reserve(cer_retained.size());
  for (auto& e : cer_retained) {
    if (top_frequent.count(e.keyword)) {
      ++local.dropped_top_frequent;
    } else if (cfg.drop_single_letter && e.keyword.size() == 1) {
      ++local.dropped_single_letter;
    } else if (cfg.excluded_keywords.count(e.keyword)) {
      ++local.dropped_excluded;
    } else {
      out.push_back(std::move(e));
    }
  }
  local.retained = out.size();
  if (stats) *stats = local;
  return out;
}

InventoryResult build_inventory(const std::vector<ManifestEntry>& entries,
                                const FilterConfig& cfg) {
  if (cfg.inventory_size <= 0) {
    throw std::invalid_argument("build_inventory: inventory_size must be > 0");
  }
  if (cfg.samples_per_keyword <= 0) {
    throw std::invalid_argument("build_inventory: samples_per_keyword must be > 0");
  }
  const auto ranked = rank_keywords(entries);
  if (ranked.size() < static_cast<std::size_t>(cfg.inventory_size)) {
    throw std::runtime_error(
        "build_inventory: requested " + std::to_string(cfg.inventory_size) +
        " keywords but only " + std::to_string(ranked.size()) +
        " distinct keywords are available (short by " +
        std::to_string(cfg.inventory_size - static_cast<int>(ranked.size())) + ")");
  }

  InventoryResult result;
  std::map<std::string, std::vector<ManifestEntry>> by_keyword;
  for (const auto& e : entries) by_keyword[e.keyword].push_back(e);

  for (int r = 0; r < cfg.inventory_size; ++r) {
    const std::string& kw = ranked[static_cast<std::size_t>(r)];
    auto& pool = by_keyword[kw];
    // Seeded shuffle then prefix-take; the stream is derived per keyword so
    // the selection for one keyword does not depend on the others.
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(Rng::mix(cfg.seed, kw));
    rng.shuffle(&order);
    const std::size_t take =
        std::min<std::size_t>(pool.size(), static_cast<std::size_t>(cfg.samples_per_keyword));
    std::vector<ManifestEntry> sampled;
    sampled.reserve(take);
    for (std::size_t i = 0; i < take; ++i) sampled.push_back(pool[order[i]]);
    result.items[kw] = std::move(sampled);
    result.keyword_rank[kw] = r + 1;
  }
  return result;
}

void write_inventory(const std::string& path, const InventoryResult& inventory) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot create inventory file: " + path);
  for (const auto& [kw, entries] : inventory.items) {
    for (const auto& entry : entries) {
      nlohmann::ordered_json obj;
      obj["audio_path"] = entry.audio_path;
      obj["keyword"] = entry.keyword;
      obj["hypothesis"] = entry.hypothesis;
      obj["duration_s"] = entry.duration_s;
      obj["source"] = entry.source;
      obj["cer"] = compute_cer(entry.keyword, entry.hypothesis);
      obj["inventory_keyword_rank"] = inventory.keyword_rank.at(kw);
      out << obj.dump() << '\n';
    }
  }
  if (!out) throw std::runtime_error("failed writing inventory file: " + path);
}

SplitSpec SplitSpec::gsc_default() {
  SplitSpec spec;
  spec.pre_defined = {"yes", "no", "up", "down", "left",
                      "right", "on", "off", "stop", "go"};
  spec.unknown = {"bed",   "bird",   "cat",      "dog",    "wow",
                  "house", "learn",  "sheila",   "tree",   "happy",
                  "marvin", "backward", "follow", "forward", "visual"};
  spec.user_defined = {"zero", "one", "two",   "three", "four",
                       "five", "six", "seven", "eight", "nine"};
  return spec;
}

SplitResult split_commands(const std::vector<ManifestEntry>& entries,
                           const SplitSpec& spec) {
  const std::set<std::string> pre(spec.pre_defined.begin(), spec.pre_defined.end());
  const std::set<std::string> unk(spec.unknown.begin(), spec.unknown.end());
  const std::set<std::string> user(spec.user_defined.begin(), spec.user_defined.end());

  for (const auto& kw : pre) {
    if (unk.count(kw) || user.count(kw)) {
      throw std::invalid_argument("split_commands: keyword '" + kw +
                                  "' appears in more than one split set");
    }
  }
  for (const auto& kw : unk) {
    if (user.count(kw)) {
      throw std::invalid_argument("split_commands: keyword '" + kw +
                                  "' appears in more than one split set");
    }
  }

  SplitResult result;
  for (const auto& e : entries) {
    if (pre.count(e.keyword)) {
      result.pre_defined.push_back(e);
    } else if (unk.count(e.keyword)) {
      result.unknown.push_back(e);
    } else if (user.count(e.keyword)) {
      result.user_defined.push_back(e);
    } else {
      throw std::runtime_error("split_commands: keyword '" + e.keyword +
                               "' belongs to no split set");
    }
  }
  return result;
}

}  // namespace kws
