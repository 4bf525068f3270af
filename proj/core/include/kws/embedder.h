// core/include/kws/embedder.h

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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kws/losses.h"
#include "kws/mfcc.h"
#include "kws/numeric.h"

namespace kws {

/// A small feed-forward embedding network: mean-pool (or flatten) the
/// feature matrix, pass it through ReLU hidden layers, project linearly to
/// the embedding dimension.
struct EmbedderConfig {
  std::size_t input_frames = 98;
  std::size_t input_coeffs = 40;
  bool mean_pool = true;                       // false: flatten frames x coeffs
  std::vector<std::size_t> hidden_sizes = {256, 128};
  std::size_t embedding_dim = 64;              // >= 2
  std::string activation = "relu";
  std::uint64_t seed = 1;

  std::size_t input_dim() const {
    return mean_pool ? input_coeffs : input_frames * input_coeffs;
  }
  /// Layer widths from input to embedding, e.g. {40, 256, 128, 64}.
  std::vector<std::size_t> layer_dims() const;
};

using Embedding = Vector;

/// Weights and biases in declaration order: weight[0], bias[0], weight[1], ...
struct EmbedderParams {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;

  std::size_t parameter_count() const;
};

/// Uniform fan-in initialization (weights in +-1/sqrt(fan_in), zero biases),
/// drawn deterministically from cfg.seed.
EmbedderParams init_embedder(const EmbedderConfig& cfg);

std::vector<double> flatten_params(const EmbedderParams& params);
void unflatten_params(std::span<const double> flat, EmbedderParams* params);

/// Activations captured by forward() for the matching backward() call.
struct ForwardCache {
  Vector input;                  // pooled / flattened features
  std::vector<Vector> preacts;   // one per layer
  std::vector<Vector> outputs;   // post-activation, one per layer
};

/// Deterministic embedding of one feature matrix. Throws on a shape
/// mismatch with the config.
Embedding embed(const EmbedderConfig& cfg, const EmbedderParams& params,
                const FeatureMatrix& features, ForwardCache* cache = nullptr);

/// Reverse-mode gradients of <grad_embedding, embed(...)> with respect to
/// every parameter. The cache must come from a forward pass with the same
/// config and params.
EmbedderParams embed_backward(const EmbedderConfig& cfg, const EmbedderParams& params,
                              const ForwardCache& cache, const Vector& grad_embedding);

/// Bias-corrected Adam over a flat parameter vector (beta1 0.9, beta2 0.999,
/// eps 1e-8).
class AdamOptimizer {
 public:
  AdamOptimizer(std::size_t size, double learning_rate);

  void set_learning_rate(double lr) { learning_rate_ = lr; }
  double learning_rate() const { return learning_rate_; }
  std::uint64_t steps() const { return step_; }

  void step(std::span<double> params, std::span<const double> grads);

 private:
  std::vector<double> first_moment_;
  std::vector<double> second_moment_;
  std::uint64_t step_ = 0;
  double learning_rate_;
};

// ---------------------------------------------------------------------------
// Two-stage training.

enum class Stage { kPretrain, kFinetune };
enum class LossKind { kSoftmax, kNormalizedSoftmax, kAmSoftmax, kAngularPrototypical };

LossKind parse_loss_kind(const std::string& name);
std::string loss_kind_name(LossKind kind);

struct TrainSchedule {
  Stage stage = Stage::kPretrain;
  int epochs = 10;
  int batch_size = 256;      // flat-loss batches; for episodes B*M if B unset
  int episode_classes = 0;   // B; 0 derives from batch_size / episode_samples
  int episode_samples = 2;   // M
  double initial_lr = 1e-3;
  double decay = 0.95;       // multiplicative, applied at each epoch boundary

  static TrainSchedule pretrain_defaults();  // batch 256, lr 1e-3
  static TrainSchedule finetune_defaults();  // batch 16, lr 1e-5
};

struct TrainOptions {
  EmbedderConfig embedder;
  LossKind loss = LossKind::kAngularPrototypical;
  TrainSchedule schedule;
  AmSoftmaxConfig am;
  ApParams ap_init;
  std::uint64_t seed = 1;
};

struct EpochMetrics {
  int epoch = 0;  // 1-based
  double learning_rate = 0.0;
  double mean_loss = 0.0;
  int steps = 0;
};

struct TrainResult {
  EmbedderParams params;
  std::vector<EpochMetrics> history;
};

using FeatureInventory = std::map<std::string, std::vector<FeatureMatrix>>;

/// Runs one training stage over the inventory. Flat losses draw shuffled
/// label-balanced-by-construction batches; the prototypical loss draws
/// episodes. The learning rate is initial_lr * decay^(epoch-1). When `init`
/// is given (fine-tuning) the embedder starts from it; loss-head parameters
/// are always stage-local.
TrainResult train_stage(const FeatureInventory& inventory, const TrainOptions& options,
                        const EmbedderParams* init = nullptr);

// ---------------------------------------------------------------------------
// Checkpoints: magic string, length-prefixed UTF-8 JSON config, then the
// parameter tensors as little-endian 64-bit floats in declaration order.

void save_checkpoint(const std::string& path, const EmbedderConfig& cfg,
                     const EmbedderParams& params);

struct Checkpoint {
  EmbedderConfig config;
  EmbedderParams params;
};

Checkpoint load_checkpoint(const std::string& path);

}  // namespace kws
