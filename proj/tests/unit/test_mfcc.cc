// tests/unit/test_mfcc.cc

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

#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "kws/mfcc.h"
#include "kws/rng.h"

using kws::AudioClip;
using kws::MfccConfig;

namespace {

AudioClip noise_clip(std::size_t n, std::uint64_t seed, double amp = 0.4) {
  AudioClip clip;
  clip.samples.resize(n);
  kws::Rng rng(seed);
  for (auto& s : clip.samples) s = amp * (2.0 * rng.uniform() - 1.0);
  return clip;
}

}  // namespace

TEST_CASE("one second at 16 kHz gives 98 x 40 features") {
  const auto features = kws::mfcc(noise_clip(16000, 1), MfccConfig{});
  CHECK(features.rows == 98);  // 1 + (16000 - 480) / 160
  CHECK(features.cols == 40);
}

TEST_CASE("frame count is a pure function of length, window, shift") {
  kws::Rng rng(2);
  const MfccConfig cfg;
  for (int it = 0; it < 30; ++it) {
    const std::size_t n = 480 + rng.uniform_index(32000 - 480 + 1);
    const auto features = kws::mfcc(noise_clip(n, 100 + it), cfg);
    CHECK(features.rows == 1 + (n - 480) / 160);
  }
  // Boundary: exactly one window.
  CHECK(kws::mfcc(noise_clip(480, 3), cfg).rows == 1);
}

TEST_CASE("clip shorter than one window is rejected") {
  CHECK_THROWS_AS(kws::mfcc(noise_clip(479, 4), MfccConfig{}), std::invalid_argument);
}

TEST_CASE("constant zero signal gives identical frames") {
  AudioClip silent;
  silent.samples.assign(16000, 0.0);
  const auto features = kws::mfcc(silent, MfccConfig{});
  for (std::size_t r = 1; r < features.rows; ++r) {
    for (std::size_t c = 0; c < features.cols; ++c) {
      CHECK(features.at(r, c) == features.at(0, c));
    }
  }
}

TEST_CASE("mfcc is deterministic") {
  const AudioClip clip = noise_clip(16000, 5);
  const auto a = kws::mfcc(clip, MfccConfig{});
  const auto b = kws::mfcc(clip, MfccConfig{});
  CHECK(a.data == b.data);  // bit-identical
}

TEST_CASE("input scaling shifts only coefficient zero") {
  const AudioClip clip = noise_clip(16000, 6);
  AudioClip scaled = clip;
  const double s = 4.0;
  for (auto& v : scaled.samples) v *= s;

  const MfccConfig cfg;
  const auto base = kws::mfcc(clip, cfg);
  const auto boosted = kws::mfcc(scaled, cfg);

  // log-mel gains ln(s) per bin; the orthonormal DCT maps a constant offset
  // to coefficient 0 only, with magnitude sqrt(n_mels) * ln(s).
  const double expected_shift = std::sqrt(static_cast<double>(cfg.n_mels)) * std::log(s);
  for (std::size_t r = 0; r < base.rows; ++r) {
    CHECK(boosted.at(r, 0) - base.at(r, 0) == doctest::Approx(expected_shift).epsilon(1e-9));
    for (std::size_t c = 1; c < base.cols; ++c) {
      CHECK(std::fabs(boosted.at(r, c) - base.at(r, c)) < 1e-6);
    }
  }
}

TEST_CASE("pre-emphasis defaults off and changes features when enabled") {
  const AudioClip clip = noise_clip(16000, 8);
  MfccConfig off;
  MfccConfig explicit_zero;
  explicit_zero.pre_emphasis = 0.0;
  CHECK(kws::mfcc(clip, off).data == kws::mfcc(clip, explicit_zero).data);

  MfccConfig emphasized;
  emphasized.pre_emphasis = 0.97;
  CHECK(kws::mfcc(clip, emphasized).data != kws::mfcc(clip, off).data);

  MfccConfig invalid;
  invalid.pre_emphasis = 1.0;
  CHECK_THROWS_AS(kws::mfcc(clip, invalid), std::invalid_argument);
}

TEST_CASE("config validation") {
  const AudioClip clip = noise_clip(16000, 7);

  MfccConfig too_few_mels;
  too_few_mels.n_mels = 20;  // < n_coeffs
  CHECK_THROWS_AS(kws::mfcc(clip, too_few_mels), std::invalid_argument);

  MfccConfig small_fft;
  small_fft.fft_size = 256;  // < 480-sample window
  CHECK_THROWS_AS(kws::mfcc(clip, small_fft), std::invalid_argument);

  MfccConfig not_pow2;
  not_pow2.fft_size = 500;
  CHECK_THROWS_AS(kws::mfcc(clip, not_pow2), std::invalid_argument);
}

TEST_CASE("a pure tone concentrates energy in the right mel region") {
  // 1 kHz tone: the strongest mel channel should sit well below the one for
  // a 6 kHz tone. This is a sanity check that the filterbank ordering is
  // frequency-increasing.
  auto strongest_mel = [](double freq) {
    AudioClip clip;
    clip.samples.resize(16000);
    for (std::size_t i = 0; i < clip.samples.size(); ++i) {
      clip.samples[i] = 0.5 * std::sin(2.0 * 3.14159265358979323846 * freq * i / 16000.0);
    }
    MfccConfig cfg;
    const auto features = kws::mfcc(clip, cfg);
    // Invert the DCT of the first frame to recover log-mel energies
    // (orthonormal DCT with n_coeffs == n_mels is invertible).
    std::size_t best = 0;
    double best_val = -1e300;
    for (std::size_t m = 0; m < cfg.n_mels; ++m) {
      double e = 0.0;
      for (std::size_t k = 0; k < cfg.n_coeffs; ++k) {
        const double scale =
            std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(cfg.n_mels));
        e += scale * features.at(0, k) *
             std::cos(3.14159265358979323846 * (2.0 * m + 1.0) * k /
                      (2.0 * static_cast<double>(cfg.n_mels)));
      }
      if (e > best_val) {
        best_val = e;
        best = m;
      }
    }
    return best;
  };
  CHECK(strongest_mel(1000.0) < strongest_mel(6000.0));
}
