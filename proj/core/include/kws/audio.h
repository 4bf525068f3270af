// core/include/kws/audio.h

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
#include <string>
#include <vector>

namespace kws {

struct AudioClip {
  std::vector<double> samples;  // in [-1, 1]
  int sample_rate = 16000;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// Reads a single-channel 16-bit PCM RIFF WAV file (format tag 1). Any other
/// encoding is rejected with a descriptive error.
AudioClip read_wav(const std::string& path);

/// Writes a single-channel 16-bit PCM WAV file. Samples are clamped to
/// [-1, 1] before quantisation.
void write_wav(const std::string& path, const AudioClip& clip);

/// Truncates from the end or zero-pads at the end so the clip has exactly
/// round(seconds * sample_rate) samples.
AudioClip fix_length(const AudioClip& clip, double seconds);

/// Adds a gain-scaled segment of `noise` to `clip` so that the resulting
/// signal-to-noise power ratio equals snr_db. The segment offset is drawn
/// from `seed`; the noise is tiled (modular indexing) when shorter than the
/// clip. Passing snr_db = +infinity returns the clip unchanged.
AudioClip add_noise(const AudioClip& clip, const AudioClip& noise,
                    double snr_db, std::uint64_t seed);

}  // namespace kws
