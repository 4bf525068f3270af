// core/src/embedder.cc

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

#include "kws/embedder.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "kws/rng.h"

namespace kws {

std::vector<std::size_t> EmbedderConfig::layer_dims() const {
  std::vector<std::size_t> dims;
  dims.push_back(input_dim());
  dims.insert(dims.end(), hidden_sizes.begin(), hidden_sizes.end());
  dims.push_back(embedding_dim);
  return dims;
}

std::size_t EmbedderParams::parameter_count() const {
  std::size_t count = 0;
  for (const auto& w : weights) count += w.data.size();
  for (const auto& b : biases) count += b.size();
  return count;
}

namespace {

void validate_config(const EmbedderConfig& cfg) {
  if (cfg.embedding_dim < 2) {
    throw std::invalid_argument("embedder: embedding_dim must be >= 2");
  }
  if (cfg.input_coeffs == 0 || cfg.input_frames == 0) {
    throw std::invalid_argument("embedder: input shape must be positive");
  }
  if (cfg.activation != "relu") {
    throw std::invalid_argument("embedder: unsupported activation '" + cfg.activation + "'");
  }
  for (const std::size_t h : cfg.hidden_sizes) {
    if (h == 0) throw std::invalid_argument("embedder: hidden size must be positive");
  }
}

void check_params_shape(const EmbedderConfig& cfg, const EmbedderParams& params) {
  const auto dims = cfg.layer_dims();
  if (params.weights.size() != dims.size() - 1 || params.biases.size() != dims.size() - 1) {
    throw std::invalid_argument("embedder: parameter layer count mismatch");
  }
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    if (params.weights[l].rows != dims[l + 1] || params.weights[l].cols != dims[l] ||
        params.biases[l].size() != dims[l + 1]) {
      throw std::invalid_argument("embedder: parameter shape mismatch at layer " +
                                  std::to_string(l));
    }
  }
}

Vector pool_features(const EmbedderConfig& cfg, const FeatureMatrix& features) {
  if (features.cols != cfg.input_coeffs) {
    throw std::invalid_argument("embedder: feature matrix has " +
                                std::to_string(features.cols) + " coefficients, config wants " +
                                std::to_string(cfg.input_coeffs));
  }
  if (cfg.mean_pool) {
    if (features.rows == 0) throw std::invalid_argument("embedder: empty feature matrix");
    Vector pooled(features.cols, 0.0);
    for (std::size_t r = 0; r < features.rows; ++r) {
      for (std::size_t c = 0; c < features.cols; ++c) pooled[c] += features.at(r, c);
    }
    for (double& v : pooled) v /= static_cast<double>(features.rows);
    return pooled;
  }
  if (features.rows != cfg.input_frames) {
    throw std::invalid_argument("embedder: feature matrix has " +
                                std::to_string(features.rows) + " frames, config wants " +
                                std::to_string(cfg.input_frames));
  }
  return features.data;
}

}  // namespace

EmbedderParams init_embedder(const EmbedderConfig& cfg) {
  validate_config(cfg);
  Rng rng(cfg.seed);
  const auto dims = cfg.layer_dims();
  EmbedderParams params;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Matrix w(dims[l + 1], dims[l]);
    const double bound = 1.0 / std::sqrt(static_cast<double>(dims[l]));
    for (double& v : w.data) v = rng.uniform(-bound, bound);
    params.weights.push_back(std::move(w));
    params.biases.emplace_back(dims[l + 1], 0.0);
  }
  return params;
}

std::vector<double> flatten_params(const EmbedderParams& params) {
  std::vector<double> flat;
  flat.reserve(params.parameter_count());
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    flat.insert(flat.end(), params.weights[l].data.begin(), params.weights[l].data.end());
    flat.insert(flat.end(), params.biases[l].begin(), params.biases[l].end());
  }
  return flat;
}

void unflatten_params(std::span<const double> flat, EmbedderParams* params) {
  if (flat.size() != params->parameter_count()) {
    throw std::invalid_argument("unflatten_params: size mismatch");
  }
  std::size_t offset = 0;
  for (std::size_t l = 0; l < params->weights.size(); ++l) {
    auto& w = params->weights[l].data;
    std::copy_n(flat.begin() + offset, w.size(), w.begin());
    offset += w.size();
    auto& b = params->biases[l];
    std::copy_n(flat.begin() + offset, b.size(), b.begin());
    offset += b.size();
  }
}

Embedding embed(const EmbedderConfig& cfg, const EmbedderParams& params,
                const FeatureMatrix& features, ForwardCache* cache) {
  validate_config(cfg);
  check_params_shape(cfg, params);

  Vector x = pool_features(cfg, features);
  if (cache) {
    cache->input = x;
    cache->preacts.clear();
    cache->outputs.clear();
  }

  const std::size_t num_layers = params.weights.size();
  for (std::size_t l = 0; l < num_layers; ++l) {
    const Matrix& w = params.weights[l];
    Vector z(w.rows);
    for (std::size_t r = 0; r < w.rows; ++r) {
      z[r] = dot(w.row(r), x) + params.biases[l][r];
    }
    if (cache) cache->preacts.push_back(z);
    if (l + 1 < num_layers) {
      for (double& v : z) v = std::max(v, 0.0);  // ReLU on hidden layers
    }
    if (cache) cache->outputs.push_back(z);
    x = std::move(z);
  }
  check_finite(x, "embedding");
  return x;
}

EmbedderParams embed_backward(const EmbedderConfig& cfg, const EmbedderParams& params,
                              const ForwardCache& cache, const Vector& grad_embedding) {
  check_params_shape(cfg, params);
  const std::size_t num_layers = params.weights.size();
  if (cache.preacts.size() != num_layers || cache.outputs.size() != num_layers ||
      cache.input.size() != params.weights.front().cols) {
    throw std::invalid_argument("embed_backward: stale or mismatched forward cache");
  }
  if (grad_embedding.size() != cfg.embedding_dim) {
    throw std::invalid_argument("embed_backward: upstream gradient dimension mismatch");
  }

  EmbedderParams grads;
  grads.weights.reserve(num_layers);
  grads.biases.reserve(num_layers);
  for (std::size_t l = 0; l < num_layers; ++l) {
    grads.weights.emplace_back(params.weights[l].rows, params.weights[l].cols, 0.0);
    grads.biases.emplace_back(params.biases[l].size(), 0.0);
  }

  Vector delta = grad_embedding;  // gradient at the current layer's output
  for (std::size_t l = num_layers; l-- > 0;) {
    if (l + 1 < num_layers) {
      // Through the ReLU: zero where the pre-activation was non-positive.
      for (std::size_t r = 0; r < delta.size(); ++r) {
        if (cache.preacts[l][r] <= 0.0) delta[r] = 0.0;
      }
    }
    const Vector& layer_input = (l == 0) ? cache.input : cache.outputs[l - 1];
    for (std::size_t r = 0; r < params.weights[l].rows; ++r) {
      grads.biases[l][r] += delta[r];
      for (std::size_t c = 0; c < params.weights[l].cols; ++c) {
        grads.weights[l].at(r, c) += delta[r] * layer_input[c];
      }
    }
    if (l > 0) {
      Vector next(params.weights[l].cols, 0.0);
      for (std::size_t r = 0; r < params.weights[l].rows; ++r) {
        for (std::size_t c = 0; c < params.weights[l].cols; ++c) {
          next[c] += delta[r] * params.weights[l].at(r, c);
        }
      }
      delta = std::move(next);
    }
  }
  return grads;
}

AdamOptimizer::AdamOptimizer(std::size_t size, double learning_rate)
    : first_moment_(size, 0.0), second_moment_(size, 0.0), learning_rate_(learning_rate) {}

void AdamOptimizer::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != first_moment_.size() || grads.size() != first_moment_.size()) {
    throw std::invalid_argument("adam: parameter/gradient size mismatch");
  }
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  ++step_;
  const double bias1 = 1.0 - std::pow(kBeta1, static_cast<double>(step_));
  const double bias2 = 1.0 - std::pow(kBeta2, static_cast<double>(step_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    first_moment_[i] = kBeta1 * first_moment_[i] + (1.0 - kBeta1) * grads[i];
    second_moment_[i] = kBeta2 * second_moment_[i] + (1.0 - kBeta2) * grads[i] * grads[i];
    const double m_hat = first_moment_[i] / bias1;
    const double v_hat = second_moment_[i] / bias2;
    params[i] -= learning_rate_ * m_hat / (std::sqrt(v_hat) + kEps);
  }
}

// ---------------------------------------------------------------------------

LossKind parse_loss_kind(const std::string& name) {
  if (name == "softmax") return LossKind::kSoftmax;
  if (name == "nsoftmax") return LossKind::kNormalizedSoftmax;
  if (name == "amsoftmax") return LossKind::kAmSoftmax;
  if (name == "ap") return LossKind::kAngularPrototypical;
  throw std::invalid_argument("unknown loss '" + name +
                              "' (expected softmax|nsoftmax|amsoftmax|ap)");
}

std::string loss_kind_name(LossKind kind) {
  switch (kind) {
    case LossKind::kSoftmax: return "softmax";
    case LossKind::kNormalizedSoftmax: return "nsoftmax";
    case LossKind::kAmSoftmax: return "amsoftmax";
    case LossKind::kAngularPrototypical: return "ap";
  }
  return "unknown";
}

TrainSchedule TrainSchedule::pretrain_defaults() {
  TrainSchedule s;
  s.stage = Stage::kPretrain;
  s.batch_size = 256;
  s.initial_lr = 1e-3;
  return s;
}

TrainSchedule TrainSchedule::finetune_defaults() {
  TrainSchedule s;
  s.stage = Stage::kFinetune;
  s.batch_size = 16;
  s.initial_lr = 1e-5;
  return s;
}

namespace {

struct TrainerState {
  EmbedderParams embedder;
  ClassifierParams classifier;  // softmax-family heads
  ApParams ap;

  std::vector<double> flatten(LossKind loss) const {
    std::vector<double> flat = flatten_params(embedder);
    if (loss == LossKind::kAngularPrototypical) {
      flat.push_back(ap.scale);
      flat.push_back(ap.bias);
    } else {
      flat.insert(flat.end(), classifier.weight.data.begin(), classifier.weight.data.end());
      flat.insert(flat.end(), classifier.bias.begin(), classifier.bias.end());
    }
    return flat;
  }

  void unflatten(LossKind loss, std::span<const double> flat) {
    const std::size_t n_emb = embedder.parameter_count();
    unflatten_params(flat.subspan(0, n_emb), &embedder);
    if (loss == LossKind::kAngularPrototypical) {
      ap.scale = std::max(flat[n_emb], 1e-6);  // keep the similarity scale positive
      ap.bias = flat[n_emb + 1];
    } else {
      auto rest = flat.subspan(n_emb);
      std::copy_n(rest.begin(), classifier.weight.data.size(), classifier.weight.data.begin());
      std::copy_n(rest.begin() + classifier.weight.data.size(), classifier.bias.size(),
                  classifier.bias.begin());
    }
  }
};

}  // namespace

TrainResult train_stage(const FeatureInventory& inventory, const TrainOptions& options,
                        const EmbedderParams* init) {
  validate_config(options.embedder);
  if (inventory.size() < 2) {
    throw std::invalid_argument("train_stage: need at least 2 classes");
  }
  const TrainSchedule& sched = options.schedule;
  if (sched.epochs < 0) throw std::invalid_argument("train_stage: negative epoch count");
  if (sched.decay <= 0.0 || sched.decay > 1.0) {
    throw std::invalid_argument("train_stage: decay must be in (0, 1]");
  }
  if (sched.stage == Stage::kFinetune && init == nullptr) {
    throw std::invalid_argument("train_stage: fine-tuning requires pretrained parameters");
  }

  const bool episodic = options.loss == LossKind::kAngularPrototypical;
  const std::size_t items_per_class = static_cast<std::size_t>(sched.episode_samples);
  std::size_t total_items = 0;
  std::size_t eligible_classes = 0;
  for (const auto& [kw, feats] : inventory) {
    total_items += feats.size();
    if (!episodic || feats.size() >= items_per_class) ++eligible_classes;
  }

  std::size_t episode_classes = 0;
  if (episodic) {
    if (items_per_class < 2) {
      throw std::invalid_argument("train_stage: episode_samples must be >= 2 for the ap loss");
    }
    episode_classes = sched.episode_classes > 0
                          ? static_cast<std::size_t>(sched.episode_classes)
                          : std::max<std::size_t>(
                                2, static_cast<std::size_t>(sched.batch_size) / items_per_class);
    episode_classes = std::min(episode_classes, eligible_classes);
    if (episode_classes < 2) {
      throw std::invalid_argument(
          "train_stage: fewer than 2 classes have enough items for an episode");
    }
  }

  // Class index assignment for the flat losses: sorted keyword order.
  std::vector<std::string> keywords;
  for (const auto& [kw, _] : inventory) keywords.push_back(kw);
  const std::size_t num_classes = keywords.size();

  TrainerState state;
  state.embedder = init ? *init : init_embedder(options.embedder);
  if (init) check_params_shape(options.embedder, *init);
  state.ap = options.ap_init;

  Rng rng(options.seed);
  if (!episodic) {
    state.classifier.weight = Matrix(num_classes, options.embedder.embedding_dim);
    const double bound = 1.0 / std::sqrt(static_cast<double>(options.embedder.embedding_dim));
    for (double& v : state.classifier.weight.data) v = rng.uniform(-bound, bound);
    state.classifier.bias = Vector(num_classes, 0.0);
  }

  std::vector<double> flat = state.flatten(options.loss);
  AdamOptimizer optimizer(flat.size(), sched.initial_lr);

  TrainResult result;
  for (int epoch = 1; epoch <= sched.epochs; ++epoch) {
    const double lr = sched.initial_lr * std::pow(sched.decay, epoch - 1);
    optimizer.set_learning_rate(lr);

    double loss_sum = 0.0;
    int steps = 0;

    if (episodic) {
      const std::size_t per_step = episode_classes * items_per_class;
      const int num_steps = std::max<int>(1, static_cast<int>(total_items / per_step));
      for (int s = 0; s < num_steps; ++s) {
        const Episode episode =
            sample_episode(inventory, episode_classes, items_per_class, &rng);

        EmbeddingEpisode emb;
        emb.num_classes = episode_classes;
        emb.items_per_class = items_per_class;
        std::vector<ForwardCache> caches(per_step);
        for (std::size_t k = 0; k < episode_classes; ++k) {
          const auto& pool = inventory.at(episode.class_ids[k]);
          for (std::size_t i = 0; i < items_per_class; ++i) {
            emb.embeddings.push_back(embed(options.embedder, state.embedder,
                                           pool[episode.item_ids[k][i]],
                                           &caches[k * items_per_class + i]));
          }
        }

        const ApLossResult loss = angular_prototypical_loss(emb, state.ap);
        loss_sum += loss.value;
        ++steps;

        std::vector<double> grad_flat(flat.size(), 0.0);
        EmbedderParams grad_accum;  // lazily initialised from the first item
        for (std::size_t i = 0; i < per_step; ++i) {
          EmbedderParams g = embed_backward(options.embedder, state.embedder, caches[i],
                                            loss.grad_embeddings[i]);
          if (grad_accum.weights.empty()) {
            grad_accum = std::move(g);
          } else {
            for (std::size_t l = 0; l < g.weights.size(); ++l) {
              for (std::size_t j = 0; j < g.weights[l].data.size(); ++j) {
                grad_accum.weights[l].data[j] += g.weights[l].data[j];
              }
              for (std::size_t j = 0; j < g.biases[l].size(); ++j) {
                grad_accum.biases[l][j] += g.biases[l][j];
              }
            }
          }
        }
        const std::vector<double> emb_grad = flatten_params(grad_accum);
        std::copy(emb_grad.begin(), emb_grad.end(), grad_flat.begin());
        grad_flat[emb_grad.size()] = loss.grad_scale;
        grad_flat[emb_grad.size() + 1] = loss.grad_bias;

        optimizer.step(flat, grad_flat);
        state.unflatten(options.loss, flat);
        // Re-sync the clamped scale into the optimizer's view.
        flat = state.flatten(options.loss);

        emb.embeddings.clear();
      }
    } else {
      // Flat batches: epoch-shuffled (class, item) pairs in fixed chunks.
      std::vector<std::pair<int, std::size_t>> order;
      order.reserve(total_items);
      for (std::size_t c = 0; c < keywords.size(); ++c) {
        const auto& pool = inventory.at(keywords[c]);
        for (std::size_t i = 0; i < pool.size(); ++i) {
          order.emplace_back(static_cast<int>(c), i);
        }
      }
      rng.shuffle(&order);
      const std::size_t batch = std::min<std::size_t>(
          static_cast<std::size_t>(sched.batch_size), order.size());
      const std::size_t num_steps = std::max<std::size_t>(1, order.size() / batch);

      for (std::size_t s = 0; s < num_steps; ++s) {
        FlatBatch fb;
        std::vector<ForwardCache> caches(batch);
        for (std::size_t i = 0; i < batch; ++i) {
          const auto& [cls, item] = order[s * batch + i];
          fb.labels.push_back(cls);
          fb.items.push_back(embed(options.embedder, state.embedder,
                                   inventory.at(keywords[cls])[item], &caches[i]));
        }

        SoftmaxLossResult loss;
        switch (options.loss) {
          case LossKind::kSoftmax:
            loss = softmax_loss(fb, state.classifier);
            break;
          case LossKind::kNormalizedSoftmax:
            loss = normalized_softmax_loss(fb, state.classifier);
            break;
          case LossKind::kAmSoftmax:
            loss = am_softmax_loss(fb, state.classifier, options.am);
            break;
          default:
            throw std::logic_error("train_stage: unexpected loss kind");
        }
        loss_sum += loss.value;
        ++steps;

        EmbedderParams grad_accum;
        for (std::size_t i = 0; i < batch; ++i) {
          EmbedderParams g = embed_backward(options.embedder, state.embedder, caches[i],
                                            loss.grad_embeddings[i]);
          if (grad_accum.weights.empty()) {
            grad_accum = std::move(g);
          } else {
            for (std::size_t l = 0; l < g.weights.size(); ++l) {
              for (std::size_t j = 0; j < g.weights[l].data.size(); ++j) {
                grad_accum.weights[l].data[j] += g.weights[l].data[j];
              }
              for (std::size_t j = 0; j < g.biases[l].size(); ++j) {
                grad_accum.biases[l][j] += g.biases[l][j];
              }
            }
          }
        }
        std::vector<double> grad_flat = flatten_params(grad_accum);
        grad_flat.insert(grad_flat.end(), loss.grad_weight.data.begin(),
                         loss.grad_weight.data.end());
        grad_flat.insert(grad_flat.end(), loss.grad_bias.begin(), loss.grad_bias.end());

        optimizer.step(flat, grad_flat);
        state.unflatten(options.loss, flat);
      }
    }

    result.history.push_back(
        {epoch, lr, steps > 0 ? loss_sum / steps : 0.0, steps});
  }

  result.params = std::move(state.embedder);
  return result;
}

// ---------------------------------------------------------------------------

namespace {

constexpr char kCheckpointMagic[8] = {'K', 'W', 'S', 'E', 'M', 'B', '0', '1'};

void write_u64le(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

std::uint64_t read_u64le(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void write_doubles_le(std::ostream& out, std::span<const double> values) {
  for (const double d : values) write_u64le(out, std::bit_cast<std::uint64_t>(d));
}

void read_doubles_le(std::istream& in, std::span<double> values) {
  for (double& d : values) d = std::bit_cast<double>(read_u64le(in));
}

nlohmann::ordered_json config_to_json(const EmbedderConfig& cfg) {
  nlohmann::ordered_json j;
  j["input_frames"] = cfg.input_frames;
  j["input_coeffs"] = cfg.input_coeffs;
  j["mean_pool"] = cfg.mean_pool;
  j["hidden_sizes"] = cfg.hidden_sizes;
  j["embedding_dim"] = cfg.embedding_dim;
  j["activation"] = cfg.activation;
  j["seed"] = cfg.seed;
  return j;
}

EmbedderConfig config_from_json(const nlohmann::json& j) {
  EmbedderConfig cfg;
  cfg.input_frames = j.at("input_frames").get<std::size_t>();
  cfg.input_coeffs = j.at("input_coeffs").get<std::size_t>();
  cfg.mean_pool = j.at("mean_pool").get<bool>();
  cfg.hidden_sizes = j.at("hidden_sizes").get<std::vector<std::size_t>>();
  cfg.embedding_dim = j.at("embedding_dim").get<std::size_t>();
  cfg.activation = j.at("activation").get<std::string>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

}  // namespace

void save_checkpoint(const std::string& path, const EmbedderConfig& cfg,
                     const EmbedderParams& params) {
  check_params_shape(cfg, params);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot create checkpoint: " + path);
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  const std::string json = config_to_json(cfg).dump();
  write_u64le(out, json.size());
  out.write(json.data(), static_cast<std::streamsize>(json.size()));
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    write_doubles_le(out, params.weights[l].data);
    write_doubles_le(out, params.biases[l]);
  }
  if (!out) throw std::runtime_error("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[sizeof(kCheckpointMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0) {
    throw std::runtime_error(path + ": not a kws embedder checkpoint");
  }
  const std::uint64_t json_len = read_u64le(in);
  std::string json(json_len, '\0');
  in.read(json.data(), static_cast<std::streamsize>(json_len));
  if (!in) throw std::runtime_error(path + ": truncated checkpoint config");

  Checkpoint ckpt;
  try {
    ckpt.config = config_from_json(nlohmann::json::parse(json));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": invalid checkpoint config: " + e.what());
  }
  validate_config(ckpt.config);

  const auto dims = ckpt.config.layer_dims();
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Matrix w(dims[l + 1], dims[l]);
    read_doubles_le(in, w.data);
    Vector b(dims[l + 1]);
    read_doubles_le(in, b);
    if (!in) throw std::runtime_error(path + ": truncated checkpoint parameters");
    ckpt.params.weights.push_back(std::move(w));
    ckpt.params.biases.push_back(std::move(b));
    check_finite(ckpt.params.weights.back().data, "checkpoint weights");
    check_finite(ckpt.params.biases.back(), "checkpoint biases");
  }
  in.peek();
  if (!in.eof()) throw std::runtime_error(path + ": trailing bytes after parameters");
  return ckpt;
}

}  // namespace kws
