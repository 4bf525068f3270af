// core/src/audio.cc

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

#include "kws/audio.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "kws/rng.h"

namespace kws {

namespace {

std::uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint16_t read_u16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

void write_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

void write_u16(std::ostream& out, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  out.write(b, 2);
}

double mean_power(const std::vector<double>& samples) {
  double p = 0.0;
  for (const double s : samples) p += s * s;
  return samples.empty() ? 0.0 : p / static_cast<double>(samples.size());
}

}  // namespace

AudioClip read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open WAV file: " + path);

  char tag[4];
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "RIFF", 4) != 0) {
    throw std::runtime_error(path + ": not a RIFF file");
  }
  read_u32(in);  // overall size, unused
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "WAVE", 4) != 0) {
    throw std::runtime_error(path + ": not a WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::vector<char> data;

  while (in.read(tag, 4)) {
    const std::uint32_t chunk_size = read_u32(in);
    if (!in) break;
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      format = read_u16(in);
      channels = read_u16(in);
      rate = read_u32(in);
      read_u32(in);  // byte rate
      read_u16(in);  // block align
      bits = read_u16(in);
      if (chunk_size > 16) in.seekg(chunk_size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data.resize(chunk_size);
      in.read(data.data(), chunk_size);
      if (!in) throw std::runtime_error(path + ": truncated data chunk");
    } else {
      in.seekg(chunk_size, std::ios::cur);
    }
    if (chunk_size % 2 == 1) in.seekg(1, std::ios::cur);  // chunk padding
  }

  if (!have_fmt) throw std::runtime_error(path + ": missing fmt chunk");
  if (format != 1) {
    throw std::runtime_error(path + ": unsupported WAV encoding (format tag " +
                             std::to_string(format) + ", expected PCM)");
  }
  if (channels != 1) {
    throw std::runtime_error(path + ": expected mono audio, got " +
                             std::to_string(channels) + " channels");
  }
  if (bits != 16) {
    throw std::runtime_error(path + ": expected 16-bit samples, got " +
                             std::to_string(bits) + "-bit");
  }

  AudioClip clip;
  clip.sample_rate = static_cast<int>(rate);
  clip.samples.resize(data.size() / 2);
  for (std::size_t i = 0; i < clip.samples.size(); ++i) {
    const std::int16_t s = static_cast<std::int16_t>(
        static_cast<unsigned char>(data[2 * i]) |
        (static_cast<unsigned char>(data[2 * i + 1]) << 8));
    clip.samples[i] = static_cast<double>(s) / 32768.0;
  }
  return clip;
}

void write_wav(const std::string& path, const AudioClip& clip) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot create WAV file: " + path);

  const std::uint32_t data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
  out.write("RIFF", 4);
  write_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, 1);  // PCM
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
  write_u32(out, static_cast<std::uint32_t>(clip.sample_rate * 2));
  write_u16(out, 2);
  write_u16(out, 16);
  out.write("data", 4);
  write_u32(out, data_bytes);
  for (const double s : clip.samples) {
    const double clamped = std::clamp(s, -1.0, 1.0);
    const auto q = static_cast<std::int16_t>(std::lrint(clamped * 32767.0));
    write_u16(out, static_cast<std::uint16_t>(q));
  }
  if (!out) throw std::runtime_error("failed writing WAV file: " + path);
}

AudioClip fix_length(const AudioClip& clip, double seconds) {
  if (seconds <= 0.0) throw std::invalid_argument("fix_length: seconds must be > 0");
  const auto target = static_cast<std::size_t>(std::llround(seconds * clip.sample_rate));
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples = clip.samples;
  out.samples.resize(target, 0.0);  // truncates or zero-pads at the end
  return out;
}

AudioClip add_noise(const AudioClip& clip, const AudioClip& noise,
                    double snr_db, std::uint64_t seed) {
  if (std::isinf(snr_db) && snr_db > 0) return clip;
  if (clip.sample_rate != noise.sample_rate) {
    throw std::invalid_argument("add_noise: sample-rate mismatch (" +
                                std::to_string(clip.sample_rate) + " vs " +
                                std::to_string(noise.sample_rate) + ")");
  }
  if (noise.samples.empty()) throw std::invalid_argument("add_noise: empty noise");

  Rng rng(seed);
  const std::size_t offset = rng.uniform_index(noise.samples.size());

  std::vector<double> segment(clip.samples.size());
  for (std::size_t i = 0; i < segment.size(); ++i) {
    segment[i] = noise.samples[(offset + i) % noise.samples.size()];
  }

  const double noise_power = mean_power(segment);
  if (noise_power == 0.0) {
    throw std::invalid_argument("add_noise: silent noise segment with finite SNR requested");
  }
  const double signal_power = mean_power(clip.samples);
  const double gain = std::sqrt(signal_power / (noise_power * std::pow(10.0, snr_db / 10.0)));

  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.resize(clip.samples.size());
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] = clip.samples[i] + gain * segment[i];
  }
  return out;
}

}  // namespace kws
