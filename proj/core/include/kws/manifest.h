// core/include/kws/manifest.h

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

#include <string>
#include <vector>

namespace kws {

/// One keyword instance. `hypothesis` is the transcript an external ASR
/// system produced for the segment; comparing it against `keyword` gives
/// the CER used for filtering.
struct ManifestEntry {
  std::string audio_path;
  std::string keyword;     // lowercase, non-empty
  std::string hypothesis;  // lowercase
  double duration_s = 0.0;
  std::string source;
};

/// Reads a UTF-8 JSON Lines manifest (keys: audio_path, keyword, hypothesis,
/// duration_s, source). keyword/hypothesis are lowercased on load. Malformed
/// lines and invariant violations are reported with their line number.
std::vector<ManifestEntry> read_manifest(const std::string& path);

void write_manifest(const std::string& path,
                    const std::vector<ManifestEntry>& entries);

}  // namespace kws
