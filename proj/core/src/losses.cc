// core/src/losses.cc

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

#include "kws/losses.h"

#include <cmath>
#include <stdexcept>

namespace kws {

namespace {

void check_batch(const FlatBatch& batch, const ClassifierParams& params) {
  if (batch.items.empty()) throw std::invalid_argument("loss: empty batch");
  if (batch.items.size() != batch.labels.size()) {
    throw std::invalid_argument("loss: item/label count mismatch");
  }
  const std::size_t num_classes = params.weight.rows;
  for (const int label : batch.labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= num_classes) {
      throw std::invalid_argument("loss: label out of range");
    }
  }
  for (const auto& x : batch.items) {
    if (x.size() != params.weight.cols) {
      throw std::invalid_argument("loss: embedding dimension mismatch");
    }
  }
}

// Shared core of the cosine-logit losses. With margin 0 and scale 1 this is
// exactly the normalized softmax; normalized_softmax_loss nevertheless keeps
// its own direct implementation so the reduction identity stays a real check
// between two code paths.
SoftmaxLossResult cosine_margin_loss(const FlatBatch& batch, const ClassifierParams& params,
                                     double margin, double scale) {
  check_batch(batch, params);
  const std::size_t num_classes = params.weight.rows;
  const std::size_t dim = params.weight.cols;
  const std::size_t n = batch.items.size();

  std::vector<double> weight_norms(num_classes);
  for (std::size_t j = 0; j < num_classes; ++j) {
    weight_norms[j] = norm(params.weight.row(j));
    if (weight_norms[j] == 0.0) {
      throw std::invalid_argument("loss: zero-norm classifier weight row");
    }
  }

  SoftmaxLossResult result;
  result.grad_embeddings.assign(n, Vector(dim, 0.0));
  result.grad_weight = Matrix(num_classes, dim, 0.0);
  result.grad_bias = Vector(num_classes, 0.0);

  Vector cosines(num_classes), logits(num_classes);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = batch.items[i];
    const double x_norm = norm(x);
    if (x_norm == 0.0) throw std::invalid_argument("loss: zero-norm embedding");
    const auto target = static_cast<std::size_t>(batch.labels[i]);

    for (std::size_t j = 0; j < num_classes; ++j) {
      cosines[j] = dot(params.weight.row(j), x) / (weight_norms[j] * x_norm);
      logits[j] = scale * (cosines[j] - (j == target ? margin : 0.0));
    }
    const Vector log_probs = log_softmax(logits);
    result.value -= log_probs[target];

    // d(loss_i)/d(logit_j) = (softmax_j - 1{j=target}) / N, and
    // d(cos)/dx = (w_hat - cos * x_hat) / |x|,
    // d(cos)/dw = (x_hat - cos * w_hat) / |w|.
    for (std::size_t j = 0; j < num_classes; ++j) {
      const double g_logit =
          (std::exp(log_probs[j]) - (j == target ? 1.0 : 0.0)) / static_cast<double>(n);
      const double g_cos = scale * g_logit;
      for (std::size_t d = 0; d < dim; ++d) {
        const double w_hat = params.weight.at(j, d) / weight_norms[j];
        const double x_hat = x[d] / x_norm;
        result.grad_embeddings[i][d] += g_cos * (w_hat - cosines[j] * x_hat) / x_norm;
        result.grad_weight.at(j, d) +=
            g_cos * (x_hat - cosines[j] * w_hat) / weight_norms[j];
      }
    }
  }
  result.value /= static_cast<double>(n);
  return result;
}

}  // namespace

SoftmaxLossResult softmax_loss(const FlatBatch& batch, const ClassifierParams& params) {
  check_batch(batch, params);
  if (params.bias.size() != params.weight.rows) {
    throw std::invalid_argument("softmax_loss: bias size mismatch");
  }
  const std::size_t num_classes = params.weight.rows;
  const std::size_t dim = params.weight.cols;
  const std::size_t n = batch.items.size();

  SoftmaxLossResult result;
  result.grad_embeddings.assign(n, Vector(dim, 0.0));
  result.grad_weight = Matrix(num_classes, dim, 0.0);
  result.grad_bias = Vector(num_classes, 0.0);

  Vector logits(num_classes);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = batch.items[i];
    const auto target = static_cast<std::size_t>(batch.labels[i]);
    for (std::size_t j = 0; j < num_classes; ++j) {
      logits[j] = dot(params.weight.row(j), x) + params.bias[j];
    }
    const Vector log_probs = log_softmax(logits);
    result.value -= log_probs[target];

    for (std::size_t j = 0; j < num_classes; ++j) {
      const double g =
          (std::exp(log_probs[j]) - (j == target ? 1.0 : 0.0)) / static_cast<double>(n);
      result.grad_bias[j] += g;
      for (std::size_t d = 0; d < dim; ++d) {
        result.grad_weight.at(j, d) += g * x[d];
        result.grad_embeddings[i][d] += g * params.weight.at(j, d);
      }
    }
  }
  result.value /= static_cast<double>(n);
  return result;
}

SoftmaxLossResult normalized_softmax_loss(const FlatBatch& batch,
                                          const ClassifierParams& params) {
  return cosine_margin_loss(batch, params, /*margin=*/0.0, /*scale=*/1.0);
}

SoftmaxLossResult am_softmax_loss(const FlatBatch& batch, const ClassifierParams& params,
                                  const AmSoftmaxConfig& cfg) {
  if (cfg.margin < 0.0) throw std::invalid_argument("am_softmax_loss: margin must be >= 0");
  if (cfg.scale <= 0.0) throw std::invalid_argument("am_softmax_loss: scale must be > 0");
  return cosine_margin_loss(batch, params, cfg.margin, cfg.scale);
}

ApLossResult angular_prototypical_loss(const EmbeddingEpisode& episode,
                                       const ApParams& params) {
  const std::size_t num_classes = episode.num_classes;
  const std::size_t per_class = episode.items_per_class;
  if (num_classes < 2 || per_class < 2) {
    throw std::invalid_argument("angular_prototypical_loss: need B >= 2 and M >= 2");
  }
  if (episode.embeddings.size() != num_classes * per_class) {
    throw std::invalid_argument("angular_prototypical_loss: episode size mismatch");
  }
  if (params.scale <= 0.0) {
    throw std::invalid_argument("angular_prototypical_loss: scale must be > 0");
  }
  const std::size_t dim = episode.embeddings.front().size();
  for (const auto& e : episode.embeddings) {
    if (e.size() != dim) {
      throw std::invalid_argument("angular_prototypical_loss: embedding dimension mismatch");
    }
  }

  // Centroids over the M-1 support items of each class.
  std::vector<Vector> centroids(num_classes);
  for (std::size_t k = 0; k < num_classes; ++k) {
    centroids[k] =
        centroid(std::span<const Vector>(&episode.embeddings[k * per_class], per_class - 1));
  }

  std::vector<double> query_norms(num_classes), centroid_norms(num_classes);
  for (std::size_t k = 0; k < num_classes; ++k) {
    query_norms[k] = norm(episode.query(k));
    centroid_norms[k] = norm(centroids[k]);
    if (query_norms[k] == 0.0) {
      throw std::invalid_argument("angular_prototypical_loss: zero-norm query");
    }
    if (centroid_norms[k] == 0.0) {
      throw std::invalid_argument("angular_prototypical_loss: zero-norm centroid");
    }
  }

  Matrix cosines(num_classes, num_classes);
  for (std::size_t j = 0; j < num_classes; ++j) {
    for (std::size_t k = 0; k < num_classes; ++k) {
      cosines.at(j, k) =
          dot(episode.query(j), centroids[k]) / (query_norms[j] * centroid_norms[k]);
    }
  }

  ApLossResult result;
  result.grad_embeddings.assign(num_classes * per_class, Vector(dim, 0.0));
  std::vector<Vector> grad_centroids(num_classes, Vector(dim, 0.0));

  Vector row(num_classes);
  for (std::size_t j = 0; j < num_classes; ++j) {
    for (std::size_t k = 0; k < num_classes; ++k) {
      row[k] = params.scale * cosines.at(j, k) + params.bias;
    }
    const Vector log_probs = log_softmax(row);
    result.value -= log_probs[j];

    const auto& q = episode.query(j);
    Vector& grad_q = result.grad_embeddings[j * per_class + per_class - 1];
    for (std::size_t k = 0; k < num_classes; ++k) {
      const double g_sim = (std::exp(log_probs[k]) - (k == j ? 1.0 : 0.0)) /
                           static_cast<double>(num_classes);
      result.grad_scale += g_sim * cosines.at(j, k);
      result.grad_bias += g_sim;
      const double g_cos = params.scale * g_sim;
      for (std::size_t d = 0; d < dim; ++d) {
        const double q_hat = q[d] / query_norms[j];
        const double c_hat = centroids[k][d] / centroid_norms[k];
        grad_q[d] += g_cos * (c_hat - cosines.at(j, k) * q_hat) / query_norms[j];
        grad_centroids[k][d] += g_cos * (q_hat - cosines.at(j, k) * c_hat) / centroid_norms[k];
      }
    }
  }
  result.value /= static_cast<double>(num_classes);

  // Each support embedding contributes 1/(M-1) of its centroid.
  for (std::size_t k = 0; k < num_classes; ++k) {
    for (std::size_t i = 0; i + 1 < per_class; ++i) {
      Vector& grad_support = result.grad_embeddings[k * per_class + i];
      for (std::size_t d = 0; d < dim; ++d) {
        grad_support[d] += grad_centroids[k][d] / static_cast<double>(per_class - 1);
      }
    }
  }
  return result;
}

Vector centroid(std::span<const Vector> support) {
  if (support.empty()) throw std::invalid_argument("centroid: empty support set");
  const std::size_t dim = support.front().size();
  Vector mean(dim, 0.0);
  for (const auto& e : support) {
    if (e.size() != dim) throw std::invalid_argument("centroid: dimension mismatch");
    for (std::size_t d = 0; d < dim; ++d) mean[d] += e[d];
  }
  for (double& v : mean) v /= static_cast<double>(support.size());
  return mean;
}

}  // namespace kws
