// core/include/kws/dataset.h

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

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "kws/manifest.h"

namespace kws {

/// Character error rate: Levenshtein edit distance (unit insert/delete/
/// substitute costs) divided by the reference length. Reference must be
/// non-empty.
double compute_cer(const std::string& reference, const std::string& hypothesis);

/// Keyword-inventory filtering rules. Defaults follow the strictest
/// interpretation: exact hypothesis match required (threshold 0), the 13
/// most frequent keywords and one-letter keywords dropped, and the ten
/// user-defined evaluation keywords excluded from any training inventory.
struct FilterConfig {
  double cer_threshold = 0.0;  // in [0, 1]
  int drop_top_frequent = 13;
  bool drop_single_letter = true;
  std::set<std::string> excluded_keywords;  // defaults to user-defined split
  int inventory_size = 1000;
  int samples_per_keyword = 1000;
  std::uint64_t seed = 1;

  FilterConfig();
};

struct FilterStats {
  std::size_t retained = 0;
  std::size_t dropped_cer = 0;
  std::size_t dropped_top_frequent = 0;
  std::size_t dropped_single_letter = 0;
  std::size_t dropped_excluded = 0;
};

/// Applies, in order: CER threshold, then the drop-top-frequent /
/// single-letter / excluded-keyword rules (frequency counted over the
/// CER-retained entries, ties broken lexicographically).
std::vector<ManifestEntry> filter_manifest(const std::vector<ManifestEntry>& entries,
                                           const FilterConfig& cfg,
                                           FilterStats* stats = nullptr);

struct InventoryResult {
  // keyword -> sampled entries, and the keyword's 1-based frequency rank.
  std::map<std::string, std::vector<ManifestEntry>> items;
  std::map<std::string, int> keyword_rank;
};

/// Selects the inventory_size most frequent keywords from already-filtered
/// entries (lexicographic tie-break) and samples up to samples_per_keyword
/// instances per keyword without replacement, deterministically from the
/// seed. Throws if fewer distinct keywords are available than requested,
/// naming the shortfall.
InventoryResult build_inventory(const std::vector<ManifestEntry>& entries,
                                const FilterConfig& cfg);

/// Writes an inventory as JSON Lines: manifest fields plus `cer` and
/// `inventory_keyword_rank`.
void write_inventory(const std::string& path, const InventoryResult& inventory);

/// The three-way keyword split. Defaults are the standard speech-commands
/// assignment: 10 pre-defined, 15 unknown, 10 user-defined.
struct SplitSpec {
  std::vector<std::string> pre_defined;
  std::vector<std::string> unknown;
  std::vector<std::string> user_defined;

  static SplitSpec gsc_default();
};

struct SplitResult {
  std::vector<ManifestEntry> pre_defined;
  std::vector<ManifestEntry> unknown;  // trained as one merged class
  std::vector<ManifestEntry> user_defined;
  std::string unknown_class_label = "unknown";
};

/// Partitions entries by keyword. Throws if an entry's keyword belongs to
/// no split set or the sets overlap.
SplitResult split_commands(const std::vector<ManifestEntry>& entries,
                           const SplitSpec& spec);

}  // namespace kws
