// core/src/mfcc.cc

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

#include "kws/mfcc.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace kws {

namespace {

constexpr double kPi = 3.14159265358979323846;

// In-place iterative radix-2 FFT.
void fft(std::vector<std::complex<double>>* buf) {
  const std::size_t n = buf->size();
  auto& a = *buf;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j |= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * kPi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// Triangular filters on the HTK mel scale, spanning 0 Hz to Nyquist.
// weights[m][k] applies to spectrum bin k (0 .. fft_size/2).
std::vector<std::vector<double>> mel_filterbank(std::size_t n_mels,
                                                std::size_t fft_size,
                                                int sample_rate) {
  const std::size_t n_bins = fft_size / 2 + 1;
  const double mel_hi = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges_hz(n_mels + 2);
  for (std::size_t m = 0; m < n_mels + 2; ++m) {
    edges_hz[m] = mel_to_hz(mel_hi * static_cast<double>(m) / (n_mels + 1));
  }
  std::vector<std::vector<double>> weights(n_mels, std::vector<double>(n_bins, 0.0));
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double lo = edges_hz[m], center = edges_hz[m + 1], hi = edges_hz[m + 2];
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / static_cast<double>(fft_size);
      double w = 0.0;
      if (f > lo && f < hi) {
        w = (f <= center) ? (f - lo) / (center - lo) : (hi - f) / (hi - center);
      }
      weights[m][k] = w;
    }
  }
  return weights;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

std::size_t MfccConfig::window_samples(int sample_rate) const {
  return static_cast<std::size_t>(std::llround(window_ms / 1000.0 * sample_rate));
}

std::size_t MfccConfig::shift_samples(int sample_rate) const {
  return static_cast<std::size_t>(std::llround(shift_ms / 1000.0 * sample_rate));
}

std::size_t mfcc_frame_count(std::size_t num_samples, std::size_t window,
                             std::size_t shift) {
  if (num_samples < window) {
    throw std::invalid_argument("mfcc: clip shorter than one analysis window (" +
                                std::to_string(num_samples) + " < " +
                                std::to_string(window) + " samples)");
  }
  return 1 + (num_samples - window) / shift;
}

FeatureMatrix mfcc(const AudioClip& clip, const MfccConfig& cfg) {
  const std::size_t window = cfg.window_samples(clip.sample_rate);
  const std::size_t shift = cfg.shift_samples(clip.sample_rate);
  if (cfg.n_coeffs > cfg.n_mels) {
    throw std::invalid_argument("mfcc: n_coeffs must not exceed n_mels");
  }
  if (cfg.fft_size < window) {
    throw std::invalid_argument("mfcc: fft_size smaller than the analysis window");
  }
  if (!is_power_of_two(cfg.fft_size)) {
    throw std::invalid_argument("mfcc: fft_size must be a power of two");
  }
  if (cfg.pre_emphasis < 0.0 || cfg.pre_emphasis >= 1.0) {
    throw std::invalid_argument("mfcc: pre_emphasis must lie in [0, 1)");
  }
  const std::size_t frames = mfcc_frame_count(clip.samples.size(), window, shift);
  const std::size_t n_bins = cfg.fft_size / 2 + 1;

  std::vector<double> samples = clip.samples;
  if (cfg.pre_emphasis > 0.0) {
    for (std::size_t i = samples.size(); i-- > 1;) {
      samples[i] -= cfg.pre_emphasis * samples[i - 1];
    }
  }

  // Symmetric Hann window.
  std::vector<double> hann(window);
  for (std::size_t i = 0; i < window; ++i) {
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) /
                                   static_cast<double>(window - 1));
  }

  const auto filters = mel_filterbank(cfg.n_mels, cfg.fft_size, clip.sample_rate);

  // Orthonormal DCT-II basis, n_coeffs x n_mels.
  Matrix dct(cfg.n_coeffs, cfg.n_mels);
  for (std::size_t k = 0; k < cfg.n_coeffs; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(cfg.n_mels));
    for (std::size_t m = 0; m < cfg.n_mels; ++m) {
      dct.at(k, m) = scale * std::cos(kPi * (2.0 * m + 1.0) * k /
                                      (2.0 * static_cast<double>(cfg.n_mels)));
    }
  }

  FeatureMatrix features(frames, cfg.n_coeffs);
  std::vector<std::complex<double>> buf(cfg.fft_size);
  std::vector<double> magnitude(n_bins);
  std::vector<double> log_mel(cfg.n_mels);

  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * shift;
    for (std::size_t i = 0; i < cfg.fft_size; ++i) {
      buf[i] = (i < window) ? samples[start + i] * hann[i] : 0.0;
    }
    fft(&buf);
    for (std::size_t k = 0; k < n_bins; ++k) magnitude[k] = std::abs(buf[k]);
    for (std::size_t m = 0; m < cfg.n_mels; ++m) {
      double e = 0.0;
      for (std::size_t k = 0; k < n_bins; ++k) e += filters[m][k] * magnitude[k];
      log_mel[m] = std::log(std::max(e, cfg.log_floor));
    }
    for (std::size_t k = 0; k < cfg.n_coeffs; ++k) {
      features.at(f, k) = dot(dct.row(k), log_mel);
    }
  }
  return features;
}

}  // namespace kws
