// core/src/evaluation.cc

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

#include "kws/evaluation.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace kws {

namespace {

// Shortest round-trip decimal rendering, for stable CSV output.
std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::vector<Trial> make_trials(const std::vector<LabeledEmbedding>& queries,
                               const std::vector<Prototype>& prototypes,
                               bool allow_impostors) {
  if (queries.empty()) throw std::invalid_argument("make_trials: no queries");
  if (prototypes.empty()) throw std::invalid_argument("make_trials: no prototypes");

  std::set<std::string> enrolled;
  for (const auto& p : prototypes) enrolled.insert(p.keyword);

  std::vector<Trial> trials;
  trials.reserve(queries.size() * prototypes.size());
  for (const auto& query : queries) {
    if (!enrolled.count(query.keyword) && !allow_impostors) {
      throw std::runtime_error("make_trials: query keyword '" + query.keyword +
                               "' has no prototype");
    }
    for (const auto& proto : prototypes) {
      Trial t;
      t.score = cosine(query.embedding, proto.vector);
      t.is_target = (query.keyword == proto.keyword);
      t.query_keyword = query.keyword;
      t.prototype_keyword = proto.keyword;
      trials.push_back(std::move(t));
    }
  }
  return trials;
}

DetCurve det_curve(const std::vector<Trial>& trials) {
  std::vector<double> target_scores, nontarget_scores;
  for (const auto& t : trials) {
    (t.is_target ? target_scores : nontarget_scores).push_back(t.score);
  }
  if (target_scores.empty() || nontarget_scores.empty()) {
    throw std::invalid_argument("det_curve: need at least one target and one non-target trial");
  }
  std::sort(target_scores.begin(), target_scores.end());
  std::sort(nontarget_scores.begin(), nontarget_scores.end());

  std::vector<double> thresholds;
  for (const auto& t : trials) thresholds.push_back(t.score);
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  // A sentinel above the maximum reaches the (FAR 0, FRR 1) endpoint; the
  // minimum score itself gives (FAR 1, FRR 0).
  thresholds.push_back(thresholds.back() + 1.0);

  DetCurve curve;
  curve.points.reserve(thresholds.size());
  for (const double t : thresholds) {
    // FRR: targets strictly below t. FAR: non-targets at or above t.
    const auto below = static_cast<std::size_t>(
        std::lower_bound(target_scores.begin(), target_scores.end(), t) -
        target_scores.begin());
    const auto at_or_above = nontarget_scores.size() -
        static_cast<std::size_t>(
            std::lower_bound(nontarget_scores.begin(), nontarget_scores.end(), t) -
            nontarget_scores.begin());
    curve.points.push_back(
        {t, static_cast<double>(at_or_above) / static_cast<double>(nontarget_scores.size()),
         static_cast<double>(below) / static_cast<double>(target_scores.size())});
  }
  return curve;
}

namespace {

// Index of the first point where FAR - FRR becomes <= 0, along with the
// interpolation parameter within the preceding segment.
struct Crossing {
  std::size_t index = 0;
  double t = 0.0;   // 0 at points[index-1], 1 at points[index]
  bool exact = false;
};

Crossing find_crossing(const DetCurve& curve) {
  if (curve.points.empty()) throw std::invalid_argument("eer: empty curve");
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const double diff = curve.points[i].far - curve.points[i].frr;
    if (diff == 0.0) return {i, 0.0, true};
    if (diff < 0.0) {
      if (i == 0) return {0, 0.0, true};  // already past the crossing
      const double prev = curve.points[i - 1].far - curve.points[i - 1].frr;
      return {i, prev / (prev - diff), false};
    }
  }
  // FAR stayed above FRR everywhere; the last point is the closest approach.
  return {curve.points.size() - 1, 0.0, true};
}

}  // namespace

double eer(const DetCurve& curve) {
  const Crossing c = find_crossing(curve);
  if (c.exact) {
    // At an exact crossing FAR == FRR; on a degenerate curve report the mean.
    return 0.5 * (curve.points[c.index].far + curve.points[c.index].frr);
  }
  const DetPoint& a = curve.points[c.index - 1];
  const DetPoint& b = curve.points[c.index];
  return a.far + c.t * (b.far - a.far);
}

double eer_threshold(const DetCurve& curve) {
  const Crossing c = find_crossing(curve);
  if (c.exact) return curve.points[c.index].threshold;
  const DetPoint& a = curve.points[c.index - 1];
  const DetPoint& b = curve.points[c.index];
  return a.threshold + c.t * (b.threshold - a.threshold);
}

FrrAtFar frr_at_far(const DetCurve& curve, double far_level) {
  if (!(far_level > 0.0 && far_level < 1.0)) {
    throw std::invalid_argument("frr_at_far: level must lie in (0, 1)");
  }
  if (curve.points.empty()) throw std::invalid_argument("frr_at_far: empty curve");

  // Points are ordered by ascending threshold, so FAR is non-increasing.
  double min_far = curve.points.front().far;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    min_far = std::min(min_far, curve.points[i].far);
    if (curve.points[i].far == far_level) return {curve.points[i].frr, false};
    if (curve.points[i].far < far_level) {
      if (i == 0) return {curve.points[0].frr, false};
      const DetPoint& a = curve.points[i - 1];
      const DetPoint& b = curve.points[i];
      const double t = (a.far - far_level) / (a.far - b.far);
      return {a.frr + t * (b.frr - a.frr), false};
    }
  }
  // The curve never reached far_level; report the point with the smallest FAR.
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    if (curve.points[i].far < curve.points[best].far ||
        (curve.points[i].far == curve.points[best].far &&
         curve.points[i].frr < curve.points[best].frr)) {
      best = i;
    }
  }
  return {curve.points[best].frr, true};
}

double classify_accuracy(const std::vector<LabeledEmbedding>& queries,
                         const std::vector<Prototype>& prototypes) {
  if (queries.empty()) throw std::invalid_argument("classify_accuracy: no queries");
  std::size_t correct = 0;
  for (const auto& q : queries) {
    if (score(q.embedding, prototypes).best_keyword == q.keyword) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(queries.size());
}

double macro_f1(const std::vector<LabeledEmbedding>& queries,
                const std::vector<Prototype>& prototypes) {
  if (queries.empty()) throw std::invalid_argument("macro_f1: no queries");
  std::map<std::string, std::size_t> true_positive, predicted, actual;
  for (const auto& p : prototypes) {
    true_positive[p.keyword] = 0;
    predicted[p.keyword] = 0;
    actual[p.keyword] = 0;
  }
  for (const auto& q : queries) {
    const std::string pred = score(q.embedding, prototypes).best_keyword;
    ++predicted[pred];
    ++actual[q.keyword];
    if (pred == q.keyword) ++true_positive[pred];
  }
  double f1_sum = 0.0;
  for (const auto& [keyword, tp] : true_positive) {
    const double precision =
        predicted[keyword] > 0 ? static_cast<double>(tp) / predicted[keyword] : 0.0;
    const double recall =
        actual[keyword] > 0 ? static_cast<double>(tp) / actual[keyword] : 0.0;
    const double f1 =
        (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    f1_sum += f1;
  }
  return f1_sum / static_cast<double>(true_positive.size());
}

double binary_f1_at_threshold(const std::vector<Trial>& trials, double threshold) {
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& t : trials) {
    const bool accepted = t.score >= threshold;
    if (t.is_target && accepted) ++tp;
    if (!t.is_target && accepted) ++fp;
    if (t.is_target && !accepted) ++fn;
  }
  const double denom = 2.0 * tp + fp + fn;
  return denom > 0.0 ? 2.0 * tp / denom : 0.0;
}

EvalReport evaluate(const std::vector<LabeledEmbedding>& queries,
                    const std::vector<Prototype>& prototypes,
                    bool allow_impostors, const std::string& f1_mode) {
  if (f1_mode != "macro" && f1_mode != "binary_at_eer") {
    throw std::invalid_argument("evaluate: unknown f1 mode '" + f1_mode + "'");
  }
  const std::vector<Trial> trials = make_trials(queries, prototypes, allow_impostors);
  const DetCurve curve = det_curve(trials);

  EvalReport report;
  report.eer = eer(curve);
  report.frr_at_far[0.025] = frr_at_far(curve, 0.025);
  report.frr_at_far[0.10] = frr_at_far(curve, 0.10);
  report.f1_mode = f1_mode;

  // Closed-set metrics run over the queries whose keyword is enrolled;
  // impostor queries only contribute detection trials.
  std::set<std::string> enrolled;
  for (const auto& p : prototypes) enrolled.insert(p.keyword);
  std::vector<LabeledEmbedding> closed_set;
  for (const auto& q : queries) {
    if (enrolled.count(q.keyword)) closed_set.push_back(q);
  }
  if (!closed_set.empty()) {
    report.accuracy = classify_accuracy(closed_set, prototypes);
    report.f1 = f1_mode == "macro" ? macro_f1(closed_set, prototypes)
                                   : binary_f1_at_threshold(trials, eer_threshold(curve));
  }

  for (const auto& t : trials) {
    if (t.is_target) ++report.n_target_trials; else ++report.n_nontarget_trials;
  }
  report.n_queries = queries.size();
  report.n_prototypes = prototypes.size();
  return report;
}

void write_det_csv(const std::string& path, const DetCurve& curve) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot create DET file: " + path);
  out << "threshold,far,frr\n";
  for (const auto& p : curve.points) {
    out << format_double(p.threshold) << ',' << format_double(p.far) << ','
        << format_double(p.frr) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing DET file: " + path);
}

void write_trials_jsonl(const std::string& path, const std::vector<Trial>& trials) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot create trials file: " + path);
  for (const auto& t : trials) {
    nlohmann::ordered_json obj;
    obj["score"] = t.score;
    obj["is_target"] = t.is_target;
    obj["query_keyword"] = t.query_keyword;
    obj["prototype_keyword"] = t.prototype_keyword;
    out << obj.dump() << '\n';
  }
  if (!out) throw std::runtime_error("failed writing trials file: " + path);
}

std::vector<Trial> read_trials_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trials file: " + path);
  std::vector<Trial> trials;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      Trial t;
      t.score = obj.at("score").get<double>();
      t.is_target = obj.at("is_target").get<bool>();
      t.query_keyword = obj.value("query_keyword", "");
      t.prototype_keyword = obj.value("prototype_keyword", "");
      trials.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": malformed trial line: " + e.what());
    }
  }
  return trials;
}

}  // namespace kws
