// core/include/kws/losses.h

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

#include <span>
#include <vector>

#include "kws/batching.h"
#include "kws/numeric.h"

namespace kws {

/// Linear classifier head for the softmax-family losses.
struct ClassifierParams {
  Matrix weight;  // C x D
  Vector bias;    // C
};

struct AmSoftmaxConfig {
  double margin = 0.2;  // m >= 0, subtracted from the target-class cosine
  double scale = 30.0;  // s > 0, fixed logit scale
};

/// Learnable affine transform of cosine similarity for the angular
/// prototypical loss: S = scale * cos + bias, scale kept strictly positive.
struct ApParams {
  double scale = 10.0;
  double bias = -5.0;
};

/// Mean cross-entropy value plus analytic gradients for a classifier-head
/// loss. grad_embeddings[i] matches batch item i; grad_weight/grad_bias
/// match ClassifierParams.
struct SoftmaxLossResult {
  double value = 0.0;
  std::vector<Vector> grad_embeddings;
  Matrix grad_weight;
  Vector grad_bias;
};

/// Value plus analytic gradients for the angular prototypical loss.
/// grad_embeddings is class-major like EmbeddingEpisode::embeddings.
struct ApLossResult {
  double value = 0.0;
  std::vector<Vector> grad_embeddings;
  double grad_scale = 0.0;
  double grad_bias = 0.0;
};

/// Plain softmax cross-entropy on logits W x + b.
SoftmaxLossResult softmax_loss(const FlatBatch& batch, const ClassifierParams& params);

/// Softmax cross-entropy on cosine logits: both the weight rows and the
/// embeddings are unit-normalized, no bias, no scale. Equal to
/// am_softmax_loss with margin 0 and scale 1 (computed independently here).
SoftmaxLossResult normalized_softmax_loss(const FlatBatch& batch,
                                          const ClassifierParams& params);

/// Additive-margin softmax: logits s*(cos - m) for the target class and
/// s*cos elsewhere.
SoftmaxLossResult am_softmax_loss(const FlatBatch& batch, const ClassifierParams& params,
                                  const AmSoftmaxConfig& cfg);

/// Angular prototypical loss: per class, the query (the M-th item) is
/// classified against the B support centroids through the scaled-cosine
/// similarity matrix.
ApLossResult angular_prototypical_loss(const EmbeddingEpisode& episode,
                                       const ApParams& params);

/// Component-wise arithmetic mean of a non-empty set of embeddings.
Vector centroid(std::span<const Vector> support);

}  // namespace kws
