// core/src/batching.cc

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

#include "kws/batching.h"

#include <numeric>
#include <stdexcept>

#include "kws/losses.h"

namespace kws {

Episode sample_episode(const std::map<std::string, std::size_t>& class_sizes,
                       std::size_t num_classes, std::size_t items_per_class,
                       Rng* rng) {
  if (num_classes < 2) {
    throw std::invalid_argument("sample_episode: need at least 2 classes per episode");
  }
  if (items_per_class < 2) {
    throw std::invalid_argument("sample_episode: need at least 2 items per class");
  }

  std::vector<std::string> eligible;  // map iteration keeps this sorted
  for (const auto& [kw, count] : class_sizes) {
    if (count >= items_per_class) eligible.push_back(kw);
  }
  if (eligible.size() < num_classes) {
    throw std::invalid_argument(
        "sample_episode: only " + std::to_string(eligible.size()) +
        " classes have >= " + std::to_string(items_per_class) +
        " items, need " + std::to_string(num_classes));
  }

  // Partial Fisher-Yates: the first B slots become the drawn classes.
  for (std::size_t i = 0; i < num_classes; ++i) {
    const std::size_t j = i + rng->uniform_index(eligible.size() - i);
    std::swap(eligible[i], eligible[j]);
  }

  Episode episode;
  episode.class_ids.assign(eligible.begin(), eligible.begin() + num_classes);
  episode.item_ids.resize(num_classes);
  for (std::size_t k = 0; k < num_classes; ++k) {
    const std::size_t pool = class_sizes.at(episode.class_ids[k]);
    std::vector<std::size_t> ids(pool);
    std::iota(ids.begin(), ids.end(), 0);
    for (std::size_t i = 0; i < items_per_class; ++i) {
      const std::size_t j = i + rng->uniform_index(ids.size() - i);
      std::swap(ids[i], ids[j]);
    }
    episode.item_ids[k].assign(ids.begin(), ids.begin() + items_per_class);
  }
  return episode;
}

std::vector<PositivePair> positive_pairs(const EmbeddingEpisode& episode) {
  if (episode.num_classes < 2 || episode.items_per_class < 2) {
    throw std::invalid_argument("positive_pairs: invalid episode shape");
  }
  std::vector<PositivePair> pairs;
  pairs.reserve(episode.num_classes);
  for (std::size_t k = 0; k < episode.num_classes; ++k) {
    std::vector<Vector> support(episode.embeddings.begin() + k * episode.items_per_class,
                                episode.embeddings.begin() + k * episode.items_per_class +
                                    episode.items_per_class - 1);
    pairs.push_back({episode.query(k), centroid(support)});
  }
  return pairs;
}

}  // namespace kws
