// core/include/kws/batching.h

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

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "kws/numeric.h"
#include "kws/rng.h"

namespace kws {

/// Indices for one episodic mini-batch: B classes with M items each. The
/// M-th item of every class is its query; the first M-1 items form the
/// support set. No item is reused within an episode.
struct Episode {
  std::vector<std::string> class_ids;               // B
  std::vector<std::vector<std::size_t>> item_ids;   // B x M, into each class's pool

  std::size_t num_classes() const { return class_ids.size(); }
  std::size_t items_per_class() const {
    return item_ids.empty() ? 0 : item_ids.front().size();
  }
};

/// A flat labeled batch for the softmax-family losses.
struct FlatBatch {
  std::vector<Vector> items;  // N embeddings
  std::vector<int> labels;    // N labels in [0, C)
};

/// Materialized episode of embeddings, class-major: entry (k, i) lives at
/// k * items_per_class + i and the query of class k is i = items_per_class-1.
struct EmbeddingEpisode {
  std::size_t num_classes = 0;     // B >= 2
  std::size_t items_per_class = 0; // M >= 2
  std::vector<Vector> embeddings;  // B * M

  const Vector& at(std::size_t k, std::size_t i) const {
    return embeddings[k * items_per_class + i];
  }
  Vector& at(std::size_t k, std::size_t i) {
    return embeddings[k * items_per_class + i];
  }
  const Vector& query(std::size_t k) const { return at(k, items_per_class - 1); }
};

/// Draws B distinct classes (from those holding at least M items) and M
/// distinct items per class, uniformly without replacement. Deterministic
/// given the sampler state.
Episode sample_episode(const std::map<std::string, std::size_t>& class_sizes,
                       std::size_t num_classes, std::size_t items_per_class,
                       Rng* rng);

template <typename T>
Episode sample_episode(const std::map<std::string, std::vector<T>>& inventory,
                       std::size_t num_classes, std::size_t items_per_class,
                       Rng* rng) {
  std::map<std::string, std::size_t> sizes;
  for (const auto& [kw, items] : inventory) sizes[kw] = items.size();
  return sample_episode(sizes, num_classes, items_per_class, rng);
}

struct PositivePair {
  Vector query;
  Vector support_centroid;
};

/// One (query, support-centroid) pair per class; every other
/// (query j, centroid k != j) combination is implicitly negative,
/// B*(B-1) of them.
std::vector<PositivePair> positive_pairs(const EmbeddingEpisode& episode);

}  // namespace kws
