// core/include/kws/evaluation.h

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
#include <string>
#include <vector>

#include "kws/enrollment.h"
#include "kws/numeric.h"

namespace kws {

/// One detection trial: a query scored against one prototype. is_target
/// holds exactly when the two keywords match.
struct Trial {
  double score = 0.0;
  bool is_target = false;
  std::string query_keyword;
  std::string prototype_keyword;
};

/// A labeled query embedding.
struct LabeledEmbedding {
  std::string keyword;
  Vector embedding;
};

/// Scores every query against every prototype. With K keywords and Q
/// queries per keyword this yields K*Q target and K*Q*(K-1) non-target
/// trials. A query whose keyword has no prototype is an error unless
/// allow_impostors is set, in which case it contributes only non-target
/// trials.
std::vector<Trial> make_trials(const std::vector<LabeledEmbedding>& queries,
                               const std::vector<Prototype>& prototypes,
                               bool allow_impostors = false);

struct DetPoint {
  double threshold = 0.0;
  double far = 0.0;  // fraction of non-target trials with score >= threshold
  double frr = 0.0;  // fraction of target trials with score < threshold
};

/// Operating points swept over every distinct score plus a sentinel above
/// the maximum, ordered by ascending threshold: FAR walks 1 -> 0, FRR 0 -> 1.
struct DetCurve {
  std::vector<DetPoint> points;
};

DetCurve det_curve(const std::vector<Trial>& trials);

/// Equal error rate: linear interpolation between the adjacent operating
/// points straddling FAR = FRR.
double eer(const DetCurve& curve);

/// The threshold at the FAR = FRR crossing (interpolated like eer()).
double eer_threshold(const DetCurve& curve);

struct FrrAtFar {
  double frr = 0.0;
  // Set when the curve never reaches the requested FAR, in which case frr
  // is taken at the smallest achievable FAR.
  bool extrapolated = false;
};

/// FRR linearly interpolated at FAR = far_level, far_level in (0, 1).
FrrAtFar frr_at_far(const DetCurve& curve, double far_level);

/// Fraction of queries whose argmax prototype keyword equals the truth.
double classify_accuracy(const std::vector<LabeledEmbedding>& queries,
                         const std::vector<Prototype>& prototypes);

/// Macro-averaged F1 over the closed-set argmax confusion matrix; empty
/// denominators contribute 0.
double macro_f1(const std::vector<LabeledEmbedding>& queries,
                const std::vector<Prototype>& prototypes);

/// Binary F1 over all trials thresholded at the EER operating point
/// (targets >= threshold are true positives).
double binary_f1_at_threshold(const std::vector<Trial>& trials, double threshold);

struct EvalReport {
  double eer = 0.0;
  std::map<double, FrrAtFar> frr_at_far;  // keyed by FAR level, e.g. 0.025
  double f1 = 0.0;
  std::string f1_mode = "macro";  // or "binary_at_eer"
  double accuracy = 0.0;
  std::size_t n_target_trials = 0;
  std::size_t n_nontarget_trials = 0;
  std::size_t n_queries = 0;
  std::size_t n_prototypes = 0;
};

/// Runs the full protocol at the standard operating points
/// (FAR = 2.5% and 10%).
EvalReport evaluate(const std::vector<LabeledEmbedding>& queries,
                    const std::vector<Prototype>& prototypes,
                    bool allow_impostors = false,
                    const std::string& f1_mode = "macro");

/// CSV with header threshold,far,frr; one row per operating point.
void write_det_csv(const std::string& path, const DetCurve& curve);

/// Trial dump as JSON Lines (score, is_target, query/prototype keywords).
void write_trials_jsonl(const std::string& path, const std::vector<Trial>& trials);
std::vector<Trial> read_trials_jsonl(const std::string& path);

}  // namespace kws
