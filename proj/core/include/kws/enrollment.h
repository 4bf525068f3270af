// core/include/kws/enrollment.h

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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kws/numeric.h"

namespace kws {

/// A keyword registered from k enrollment samples: the arithmetic mean of
/// their embeddings. Enrollment never touches model parameters.
struct Prototype {
  std::string keyword;
  Vector vector;
  int shots = 0;
};

struct EnrollOptions {
  // Unit-normalize each embedding before averaging (ablation; the default
  // averages raw embeddings).
  bool normalize_before_average = false;
};

/// Builds one prototype per keyword from its enrollment embeddings.
/// Prototypes come back sorted by keyword. Throws on an empty sample set or
/// mismatched dimensions.
std::vector<Prototype> enroll(const std::map<std::string, std::vector<Vector>>& samples,
                              const EnrollOptions& options = {});

struct ScoreReport {
  std::vector<std::pair<std::string, double>> scores;  // keyword -> cosine
  std::string best_keyword;  // argmax, lexicographic tie-break
  double best_score = -1.0;
};

/// Cosine of the query against every prototype.
ScoreReport score(const Vector& query, const std::vector<Prototype>& prototypes);

/// The argmax keyword when the best score reaches the threshold, otherwise
/// rejection (nullopt).
std::optional<std::string> detect(const ScoreReport& report, double threshold);

/// Versioned binary prototype store: keyword table plus little-endian
/// 32-bit float vectors.
void save_prototypes(const std::string& path, const std::vector<Prototype>& prototypes);
std::vector<Prototype> load_prototypes(const std::string& path);

/// Human-inspectable JSON rendering of a prototype store.
void export_prototypes_json(const std::string& path,
                            const std::vector<Prototype>& prototypes);

}  // namespace kws
