// benchmarks/bench_main.cc

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

#include <benchmark/benchmark.h>

#include <cmath>

#include "kws/batching.h"
#include "kws/dataset.h"
#include "kws/embedder.h"
#include "kws/evaluation.h"
#include "kws/losses.h"
#include "kws/mfcc.h"
#include "kws/rng.h"

namespace {

kws::AudioClip one_second_noise() {
  kws::AudioClip clip;
  clip.samples.resize(16000);
  kws::Rng rng(1);
  for (auto& s : clip.samples) s = 0.4 * (2.0 * rng.uniform() - 1.0);
  return clip;
}

void BM_Mfcc(benchmark::State& state) {
  const auto clip = one_second_noise();
  const kws::MfccConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kws::mfcc(clip, cfg));
  }
}
BENCHMARK(BM_Mfcc);

void BM_ComputeCer(benchmark::State& state) {
  const std::string reference = "notwithstanding";
  const std::string hypothesis = "nothwisdtanding";
  for (auto _ : state) {
    benchmark::DoNotOptimize(kws::compute_cer(reference, hypothesis));
  }
}
BENCHMARK(BM_ComputeCer);

void BM_AngularPrototypicalLoss(benchmark::State& state) {
  const auto classes = static_cast<std::size_t>(state.range(0));
  kws::Rng rng(2);
  kws::EmbeddingEpisode ep;
  ep.num_classes = classes;
  ep.items_per_class = 2;
  for (std::size_t i = 0; i < classes * 2; ++i) {
    kws::Vector v(64);
    for (auto& x : v) x = rng.normal();
    ep.embeddings.push_back(std::move(v));
  }
  const kws::ApParams params{10.0, -5.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(kws::angular_prototypical_loss(ep, params));
  }
}
BENCHMARK(BM_AngularPrototypicalLoss)->Arg(8)->Arg(64)->Arg(128);

void BM_AmSoftmaxLoss(benchmark::State& state) {
  const auto classes = static_cast<std::size_t>(state.range(0));
  kws::Rng rng(3);
  kws::FlatBatch batch;
  for (int i = 0; i < 64; ++i) {
    kws::Vector v(64);
    for (auto& x : v) x = rng.normal();
    batch.items.push_back(std::move(v));
    batch.labels.push_back(static_cast<int>(rng.uniform_index(classes)));
  }
  kws::ClassifierParams params;
  params.weight = kws::Matrix(classes, 64);
  for (auto& v : params.weight.data) v = rng.normal();
  params.bias = kws::Vector(classes, 0.0);
  const kws::AmSoftmaxConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kws::am_softmax_loss(batch, params, cfg));
  }
}
BENCHMARK(BM_AmSoftmaxLoss)->Arg(16)->Arg(256);

void BM_EmbedderForwardBackward(benchmark::State& state) {
  kws::EmbedderConfig cfg;
  cfg.input_frames = 98;
  cfg.input_coeffs = 40;
  const auto params = kws::init_embedder(cfg);
  kws::FeatureMatrix features(98, 40);
  kws::Rng rng(4);
  for (auto& v : features.data) v = rng.normal();
  kws::Vector upstream(cfg.embedding_dim);
  for (auto& v : upstream) v = rng.normal();

  for (auto _ : state) {
    kws::ForwardCache cache;
    benchmark::DoNotOptimize(kws::embed(cfg, params, features, &cache));
    benchmark::DoNotOptimize(kws::embed_backward(cfg, params, cache, upstream));
  }
}
BENCHMARK(BM_EmbedderForwardBackward);

void BM_DetCurveAndEer(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  kws::Rng rng(5);
  std::vector<kws::Trial> trials;
  for (std::size_t i = 0; i < n; ++i) {
    const bool target = rng.uniform() < 0.3;
    trials.push_back({target ? rng.uniform(-0.2, 1.0) : rng.uniform(-1.0, 0.6), target,
                      target ? "kw" : "other", "kw"});
  }
  for (auto _ : state) {
    const auto curve = kws::det_curve(trials);
    benchmark::DoNotOptimize(kws::eer(curve));
  }
}
BENCHMARK(BM_DetCurveAndEer)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
