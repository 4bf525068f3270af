// tools/kws_main.cc

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

// kws: build keyword inventories, train the embedder, enroll user-defined
// keywords and evaluate open-set detection.
//
// Subcommands: build-dataset, train, enroll, evaluate, det.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kws/audio.h"
#include "kws/dataset.h"
#include "kws/embedder.h"
#include "kws/enrollment.h"
#include "kws/evaluation.h"
#include "kws/manifest.h"
#include "kws/mfcc.h"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("KWS_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 1;
}

kws::FeatureMatrix features_for_entry(const kws::ManifestEntry& entry,
                                      const kws::MfccConfig& mfcc_cfg) {
  kws::AudioClip clip = kws::read_wav(entry.audio_path);
  if (clip.sample_rate != 16000) {
    throw std::runtime_error(entry.audio_path + ": expected 16 kHz audio, got " +
                             std::to_string(clip.sample_rate) + " Hz");
  }
  return kws::mfcc(kws::fix_length(clip, 1.0), mfcc_cfg);
}

// Embeds every entry; parallel over entries when threads > 1. Each slot is
// written by exactly one worker, so the result does not depend on
// scheduling.
std::vector<kws::Embedding> embed_entries(const std::vector<kws::ManifestEntry>& entries,
                                          const kws::EmbedderConfig& cfg,
                                          const kws::EmbedderParams& params,
                                          const kws::MfccConfig& mfcc_cfg, int threads) {
  std::vector<kws::Embedding> out(entries.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      out[i] = kws::embed(cfg, params, features_for_entry(entries[i], mfcc_cfg));
    }
    return out;
  }
  std::vector<std::thread> workers;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::size_t i = static_cast<std::size_t>(w); i < entries.size();
             i += static_cast<std::size_t>(threads)) {
          out[i] = kws::embed(cfg, params, features_for_entry(entries[i], mfcc_cfg));
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

// ---------------------------------------------------------------------------

int cmd_build_dataset(const std::string& manifest_in, const std::string& manifest_out,
                      const std::string& inventory_out, kws::FilterConfig cfg) {
  const auto entries = kws::read_manifest(manifest_in);
  kws::FilterStats stats;
  const auto filtered = kws::filter_manifest(entries, cfg, &stats);
  kws::write_manifest(manifest_out, filtered);

  std::cout << "retained: " << stats.retained << "\n"
            << "dropped_cer: " << stats.dropped_cer << "\n"
            << "dropped_top_frequent: " << stats.dropped_top_frequent << "\n"
            << "dropped_single_letter: " << stats.dropped_single_letter << "\n"
            << "dropped_excluded: " << stats.dropped_excluded << "\n";

  if (!inventory_out.empty()) {
    const auto inventory = kws::build_inventory(filtered, cfg);
    kws::write_inventory(inventory_out, inventory);
    std::size_t sampled = 0;
    for (const auto& [kw, items] : inventory.items) sampled += items.size();
    std::cout << "inventory_keywords: " << inventory.items.size() << "\n"
              << "inventory_samples: " << sampled << "\n";
  }
  return 0;
}

int cmd_train(const std::string& stage_name, const std::string& loss_name,
              const std::string& inventory_path, const std::string& init_path,
              const std::string& checkpoint_out, const std::string& metrics_out,
              kws::TrainSchedule schedule, kws::TrainOptions options) {
  if (stage_name == "finetune" && init_path.empty()) {
    throw UsageError("--stage finetune requires --init <checkpoint>");
  }
  schedule.stage = stage_name == "finetune" ? kws::Stage::kFinetune : kws::Stage::kPretrain;
  options.loss = kws::parse_loss_kind(loss_name);
  options.schedule = schedule;

  const auto entries = kws::read_manifest(inventory_path);
  const kws::MfccConfig mfcc_cfg;

  kws::FeatureInventory inventory;
  for (const auto& entry : entries) {
    inventory[entry.keyword].push_back(features_for_entry(entry, mfcc_cfg));
  }
  if (!inventory.empty()) {
    const auto& first = inventory.begin()->second.front();
    options.embedder.input_frames = first.rows;
    options.embedder.input_coeffs = first.cols;
  }

  kws::EmbedderParams init_params;
  const kws::EmbedderParams* init = nullptr;
  if (!init_path.empty()) {
    auto ckpt = kws::load_checkpoint(init_path);
    // The checkpoint's architecture wins; CLI flags only shape fresh models.
    options.embedder = ckpt.config;
    init_params = std::move(ckpt.params);
    init = &init_params;
  }

  const kws::TrainResult result = kws::train_stage(inventory, options, init);
  kws::save_checkpoint(checkpoint_out, options.embedder, result.params);

  if (!metrics_out.empty()) {
    std::ofstream out(metrics_out);
    if (!out) throw std::runtime_error("cannot create metrics log: " + metrics_out);
    for (const auto& m : result.history) {
      nlohmann::ordered_json obj;
      obj["epoch"] = m.epoch;
      obj["lr"] = m.learning_rate;
      obj["loss"] = m.mean_loss;
      obj["steps"] = m.steps;
      out << obj.dump() << '\n';
    }
  }
  for (const auto& m : result.history) {
    std::cout << "epoch " << m.epoch << " lr " << m.learning_rate << " loss "
              << m.mean_loss << "\n";
  }
  return 0;
}

int cmd_enroll(const std::string& checkpoint_path, const std::string& manifest_path,
               int shots, const std::string& store_out, const std::string& json_out,
               bool normalize, int threads) {
  if (shots < 1) throw UsageError("--shots must be >= 1");
  const auto ckpt = kws::load_checkpoint(checkpoint_path);
  const auto entries = kws::read_manifest(manifest_path);
  const kws::MfccConfig mfcc_cfg;

  // First `shots` entries per keyword, in manifest order.
  std::map<std::string, std::vector<kws::ManifestEntry>> by_keyword;
  for (const auto& e : entries) {
    auto& pool = by_keyword[e.keyword];
    if (pool.size() < static_cast<std::size_t>(shots)) pool.push_back(e);
  }
  std::vector<kws::ManifestEntry> selected;
  for (const auto& [kw, pool] : by_keyword) {
    if (pool.size() < static_cast<std::size_t>(shots)) {
      throw std::runtime_error("enroll: keyword '" + kw + "' has only " +
                               std::to_string(pool.size()) + " samples, need " +
                               std::to_string(shots));
    }
    selected.insert(selected.end(), pool.begin(), pool.end());
  }

  const auto embeddings =
      embed_entries(selected, ckpt.config, ckpt.params, mfcc_cfg, threads);
  std::map<std::string, std::vector<kws::Vector>> samples;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    samples[selected[i].keyword].push_back(embeddings[i]);
  }

  kws::EnrollOptions opts;
  opts.normalize_before_average = normalize;
  const auto prototypes = kws::enroll(samples, opts);
  kws::save_prototypes(store_out, prototypes);
  if (!json_out.empty()) kws::export_prototypes_json(json_out, prototypes);

  std::cout << "enrolled_keywords: " << prototypes.size() << "\n"
            << "shots: " << shots << "\n";
  return 0;
}

int cmd_evaluate(const std::string& checkpoint_path, const std::string& store_path,
                 const std::string& queries_path, const std::string& report_out,
                 const std::string& det_out, const std::string& trials_out,
                 bool include_impostors, const std::string& f1_mode, int threads,
                 std::uint64_t seed) {
  const auto ckpt = kws::load_checkpoint(checkpoint_path);
  const auto prototypes = kws::load_prototypes(store_path);
  if (!prototypes.empty() &&
      prototypes.front().vector.size() != ckpt.config.embedding_dim) {
    throw std::runtime_error("evaluate: prototype store dimension " +
                             std::to_string(prototypes.front().vector.size()) +
                             " does not match checkpoint embedding_dim " +
                             std::to_string(ckpt.config.embedding_dim));
  }

  const auto entries = kws::read_manifest(queries_path);
  const kws::MfccConfig mfcc_cfg;
  const auto embeddings =
      embed_entries(entries, ckpt.config, ckpt.params, mfcc_cfg, threads);
  std::vector<kws::LabeledEmbedding> queries;
  queries.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    queries.push_back({entries[i].keyword, embeddings[i]});
  }

  const auto trials = kws::make_trials(queries, prototypes, include_impostors);
  const auto curve = kws::det_curve(trials);
  const auto report = kws::evaluate(queries, prototypes, include_impostors, f1_mode);

  if (!det_out.empty()) kws::write_det_csv(det_out, curve);
  if (!trials_out.empty()) kws::write_trials_jsonl(trials_out, trials);

  nlohmann::ordered_json j;
  j["eer"] = report.eer;
  nlohmann::ordered_json frr;
  frr["2.5"] = report.frr_at_far.at(0.025).frr;
  frr["10.0"] = report.frr_at_far.at(0.10).frr;
  j["frr_at_far"] = frr;
  nlohmann::ordered_json extrapolated;
  extrapolated["2.5"] = report.frr_at_far.at(0.025).extrapolated;
  extrapolated["10.0"] = report.frr_at_far.at(0.10).extrapolated;
  j["frr_at_far_extrapolated"] = extrapolated;
  j["f1"] = report.f1;
  j["f1_mode"] = report.f1_mode;
  j["accuracy"] = report.accuracy;
  j["n_target_trials"] = report.n_target_trials;
  j["n_nontarget_trials"] = report.n_nontarget_trials;
  j["n_queries"] = report.n_queries;
  j["n_prototypes"] = report.n_prototypes;
  j["embedding_dim"] = ckpt.config.embedding_dim;
  j["include_impostors"] = include_impostors;
  j["threads"] = threads;
  j["seed"] = seed;

  std::ofstream out(report_out);
  if (!out) throw std::runtime_error("cannot create report: " + report_out);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing report: " + report_out);

  std::cout << "eer: " << report.eer << "\n"
            << "frr@far=2.5%: " << report.frr_at_far.at(0.025).frr << "\n"
            << "frr@far=10%: " << report.frr_at_far.at(0.10).frr << "\n"
            << "f1: " << report.f1 << "\n"
            << "accuracy: " << report.accuracy << "\n";
  return 0;
}

int cmd_det(const std::string& trials_path, const std::string& det_out) {
  const auto trials = kws::read_trials_jsonl(trials_path);
  const auto curve = kws::det_curve(trials);
  kws::write_det_csv(det_out, curve);
  std::cout << "operating_points: " << curve.points.size() << "\n"
            << "eer: " << kws::eer(curve) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metric-learning keyword spotting: dataset filtering, two-stage "
               "training, k-shot enrollment and open-set detection metrics"};
  app.require_subcommand(1);
  const std::uint64_t seed_default = default_seed();

  // build-dataset ------------------------------------------------------------
  auto* build = app.add_subcommand("build-dataset",
                                   "Filter a keyword manifest and sample an inventory");
  std::string bd_manifest, bd_out, bd_inventory_out;
  kws::FilterConfig filter_cfg;
  filter_cfg.seed = seed_default;
  std::vector<std::string> bd_exclude;
  bool bd_keep_single_letter = false;
  bool bd_no_default_exclusions = false;
  build->add_option("--manifest", bd_manifest, "Input manifest (JSONL)")->required();
  build->add_option("--out", bd_out, "Filtered manifest output (JSONL)")->required();
  build->add_option("--inventory-out", bd_inventory_out,
                    "Sampled inventory output (JSONL with cer and rank fields)");
  build->add_option("--cer-threshold", filter_cfg.cer_threshold,
                    "Maximum keyword/hypothesis CER retained (default 0)");
  build->add_option("--drop-top-frequent", filter_cfg.drop_top_frequent,
                    "Drop this many most-frequent keywords (default 13)");
  build->add_flag("--keep-single-letter", bd_keep_single_letter,
                  "Keep one-letter keywords");
  build->add_option("--exclude", bd_exclude, "Additional keywords to exclude");
  build->add_flag("--no-default-exclusions", bd_no_default_exclusions,
                  "Do not exclude the ten user-defined evaluation keywords");
  build->add_option("--inventory-size", filter_cfg.inventory_size,
                    "Number of keywords in the inventory (default 1000)");
  build->add_option("--samples-per-keyword", filter_cfg.samples_per_keyword,
                    "Instances sampled per keyword (default 1000)");
  build->add_option("--seed", filter_cfg.seed, "Sampling seed");

  // train ---------------------------------------------------------------------
  auto* train = app.add_subcommand("train", "Train the embedder (pretrain or finetune)");
  std::string tr_stage = "pretrain", tr_loss = "ap";
  std::string tr_inventory, tr_init, tr_out, tr_metrics;
  kws::TrainOptions train_options;
  train_options.seed = seed_default;
  kws::TrainSchedule tr_schedule;
  int tr_batch = 0;
  double tr_lr = 0.0;
  std::vector<std::size_t> tr_hidden;
  train->add_option("--stage", tr_stage, "pretrain | finetune")
      ->check(CLI::IsMember({"pretrain", "finetune"}));
  train->add_option("--loss", tr_loss, "softmax | nsoftmax | amsoftmax | ap");
  train->add_option("--inventory", tr_inventory, "Training inventory manifest (JSONL)")
      ->required();
  train->add_option("--init", tr_init, "Input checkpoint (required for finetune)");
  train->add_option("--out", tr_out, "Output checkpoint")->required();
  train->add_option("--metrics", tr_metrics, "Per-epoch metrics log (JSONL)");
  train->add_option("--epochs", tr_schedule.epochs, "Epoch count (default 10)");
  train->add_option("--batch-size", tr_batch,
                    "Batch size (defaults: 256 pretrain, 16 finetune)");
  train->add_option("--lr", tr_lr, "Initial learning rate (defaults: 1e-3, 1e-5)");
  train->add_option("--decay", tr_schedule.decay, "Per-epoch learning-rate decay (0.95)");
  train->add_option("--episode-classes", tr_schedule.episode_classes,
                    "Classes per episode (ap loss; default batch-size/episode-samples)");
  train->add_option("--episode-samples", tr_schedule.episode_samples,
                    "Utterances per class per episode (default 2)");
  train->add_option("--embedding-dim", train_options.embedder.embedding_dim,
                    "Embedding dimension (default 64)");
  train->add_option("--hidden", tr_hidden, "Hidden layer sizes (default 256 128)");
  train->add_option("--margin", train_options.am.margin, "AM-Softmax margin (default 0.2)");
  train->add_option("--scale", train_options.am.scale, "AM-Softmax scale (default 30)");
  train->add_option("--seed", train_options.seed, "Training seed");

  // enroll ---------------------------------------------------------------------
  auto* enroll_cmd = app.add_subcommand("enroll",
                                        "Build k-shot prototypes for user-defined keywords");
  std::string en_checkpoint, en_manifest, en_out, en_json;
  int en_shots = 5, en_threads = 1;
  bool en_normalize = false;
  enroll_cmd->add_option("--checkpoint", en_checkpoint, "Embedder checkpoint")->required();
  enroll_cmd->add_option("--manifest", en_manifest, "Enrollment manifest (JSONL)")->required();
  enroll_cmd->add_option("--shots", en_shots, "Samples per keyword (default 5)");
  enroll_cmd->add_option("--out", en_out, "Prototype store output")->required();
  enroll_cmd->add_option("--export-json", en_json, "Optional JSON dump of the store");
  enroll_cmd->add_flag("--normalize", en_normalize,
                       "Unit-normalize embeddings before averaging");
  enroll_cmd->add_option("--threads", en_threads, "Worker threads (default 1)");

  // evaluate ---------------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("evaluate",
                                      "Score queries against a prototype store");
  std::string ev_checkpoint, ev_store, ev_queries, ev_report, ev_det, ev_trials;
  std::string ev_f1_mode = "macro";
  bool ev_impostors = false;
  int ev_threads = 1;
  std::uint64_t ev_seed = seed_default;
  eval_cmd->add_option("--checkpoint", ev_checkpoint, "Embedder checkpoint")->required();
  eval_cmd->add_option("--store", ev_store, "Prototype store")->required();
  eval_cmd->add_option("--queries", ev_queries, "Query manifest (JSONL)")->required();
  eval_cmd->add_option("--report", ev_report, "Report output (JSON)")->required();
  eval_cmd->add_option("--det", ev_det, "DET curve output (CSV)");
  eval_cmd->add_option("--trials-out", ev_trials, "Raw trials output (JSONL)");
  eval_cmd->add_flag("--include-impostors", ev_impostors,
                     "Allow queries without a prototype as impostor trials");
  eval_cmd->add_option("--f1-mode", ev_f1_mode, "macro | binary_at_eer")
      ->check(CLI::IsMember({"macro", "binary_at_eer"}));
  eval_cmd->add_option("--threads", ev_threads, "Worker threads (default 1)");
  eval_cmd->add_option("--seed", ev_seed, "Seed echoed into the report");

  // det ---------------------------------------------------------------------
  auto* det_cmd = app.add_subcommand("det", "Export a DET curve from saved trials");
  std::string det_trials, det_out;
  det_cmd->add_option("--trials", det_trials, "Trials file (JSONL)")->required();
  det_cmd->add_option("--out", det_out, "DET curve output (CSV)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "kws: error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (build->parsed()) {
      if (bd_keep_single_letter) filter_cfg.drop_single_letter = false;
      if (bd_no_default_exclusions) filter_cfg.excluded_keywords.clear();
      filter_cfg.excluded_keywords.insert(bd_exclude.begin(), bd_exclude.end());
      return cmd_build_dataset(bd_manifest, bd_out, bd_inventory_out, filter_cfg);
    }
    if (train->parsed()) {
      kws::TrainSchedule defaults = tr_stage == "finetune"
                                        ? kws::TrainSchedule::finetune_defaults()
                                        : kws::TrainSchedule::pretrain_defaults();
      tr_schedule.batch_size =
          train->count("--batch-size") > 0 ? tr_batch : defaults.batch_size;
      tr_schedule.initial_lr = train->count("--lr") > 0 ? tr_lr : defaults.initial_lr;
      if (!tr_hidden.empty()) train_options.embedder.hidden_sizes = tr_hidden;
      return cmd_train(tr_stage, tr_loss, tr_inventory, tr_init, tr_out, tr_metrics,
                       tr_schedule, train_options);
    }
    if (enroll_cmd->parsed()) {
      return cmd_enroll(en_checkpoint, en_manifest, en_shots, en_out, en_json,
                        en_normalize, en_threads);
    }
    if (eval_cmd->parsed()) {
      return cmd_evaluate(ev_checkpoint, ev_store, ev_queries, ev_report, ev_det,
                          ev_trials, ev_impostors, ev_f1_mode, ev_threads, ev_seed);
    }
    if (det_cmd->parsed()) {
      return cmd_det(det_trials, det_out);
    }
  } catch (const UsageError& e) {
    std::cerr << "kws: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "kws: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
