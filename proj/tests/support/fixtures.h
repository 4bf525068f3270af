// tests/support/fixtures.h

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

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "kws/audio.h"
#include "kws/manifest.h"
#include "kws/rng.h"

namespace kws::test {

/// Synthetic spoken-keyword stand-ins: each keyword is a fixed two-tone
/// chord, each instance gets a small detune and additive noise. Clips are
/// 1 s, 16 kHz, easily separable by an MFCC front-end.
struct ToneCorpus {
  std::vector<ManifestEntry> entries;
};

inline AudioClip tone_instance(std::size_t keyword_index, std::uint64_t seed) {
  Rng rng(seed);
  AudioClip clip;
  clip.sample_rate = 16000;
  clip.samples.resize(16000);
  const double f1 = 350.0 + 230.0 * static_cast<double>(keyword_index);
  const double f2 = 1.9 * f1;
  const double detune = 1.0 + 0.01 * (rng.uniform() - 0.5);
  constexpr double kTau = 2.0 * 3.14159265358979323846;
  for (std::size_t i = 0; i < clip.samples.size(); ++i) {
    const double t = static_cast<double>(i) / 16000.0;
    clip.samples[i] = 0.30 * std::sin(kTau * f1 * detune * t) +
                      0.18 * std::sin(kTau * f2 * detune * t) +
                      0.02 * rng.normal();
  }
  return clip;
}

/// Writes per-keyword WAVs under dir/audio and returns manifest entries with
/// matching hypotheses (CER 0). Paths are relative to `dir`.
inline ToneCorpus make_tone_corpus(const std::filesystem::path& dir,
                                   const std::vector<std::string>& keywords,
                                   int per_keyword, std::uint64_t seed) {
  std::filesystem::create_directories(dir / "audio");
  ToneCorpus corpus;
  for (std::size_t k = 0; k < keywords.size(); ++k) {
    for (int i = 0; i < per_keyword; ++i) {
      const std::string name =
          keywords[k] + "_" + std::to_string(i) + ".wav";
      const auto clip = tone_instance(k, Rng::mix(seed, name));
      write_wav((dir / "audio" / name).string(), clip);
      ManifestEntry entry;
      entry.audio_path = "audio/" + name;
      entry.keyword = keywords[k];
      entry.hypothesis = keywords[k];
      entry.duration_s = 1.0;
      entry.source = "synthetic";
      corpus.entries.push_back(std::move(entry));
    }
  }
  return corpus;
}

}  // namespace kws::test
