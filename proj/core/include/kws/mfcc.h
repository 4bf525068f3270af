// core/include/kws/mfcc.h

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

#include "kws/audio.h"
#include "kws/numeric.h"

namespace kws {

/// One row per frame, n_coeffs columns.
using FeatureMatrix = Matrix;

struct MfccConfig {
  double window_ms = 30.0;
  double shift_ms = 10.0;
  std::size_t n_mels = 40;
  std::size_t n_coeffs = 40;
  std::size_t fft_size = 512;   // power of two, >= window samples
  double log_floor = 1e-10;     // guards log of silent (zero-padded) frames
  double pre_emphasis = 0.0;    // y[n] = x[n] - k*x[n-1]; 0 disables

  std::size_t window_samples(int sample_rate) const;
  std::size_t shift_samples(int sample_rate) const;
};

/// Number of analysis frames for a clip of `num_samples`:
/// 1 + floor((num_samples - window) / shift). Requires at least one window.
std::size_t mfcc_frame_count(std::size_t num_samples, std::size_t window,
                             std::size_t shift);

/// Framing -> Hann window -> magnitude spectrum -> mel filterbank ->
/// log(max(energy, log_floor)) -> orthonormal DCT-II -> first n_coeffs
/// coefficients. Deterministic for identical inputs.
FeatureMatrix mfcc(const AudioClip& clip, const MfccConfig& cfg);

}  // namespace kws
