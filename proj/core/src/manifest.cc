// core/src/manifest.cc

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

#include "kws/manifest.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace kws {

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);

  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": malformed JSONL line: " + e.what());
    }
    try {
      ManifestEntry entry;
      entry.audio_path = obj.at("audio_path").get<std::string>();
      entry.keyword = lowercase(obj.at("keyword").get<std::string>());
      entry.hypothesis = lowercase(obj.at("hypothesis").get<std::string>());
      entry.duration_s = obj.at("duration_s").get<double>();
      entry.source = obj.at("source").get<std::string>();
      if (entry.keyword.empty()) throw std::runtime_error("empty keyword");
      if (entry.duration_s <= 0.0) throw std::runtime_error("duration_s must be > 0");
      entries.push_back(std::move(entry));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": invalid manifest entry: " + e.what());
    }
  }
  return entries;
}

void write_manifest(const std::string& path,
                    const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot create manifest: " + path);
  for (const auto& entry : entries) {
    nlohmann::ordered_json obj;
    obj["audio_path"] = entry.audio_path;
    obj["keyword"] = entry.keyword;
    obj["hypothesis"] = entry.hypothesis;
    obj["duration_s"] = entry.duration_s;
    obj["source"] = entry.source;
    out << obj.dump() << '\n';
  }
  if (!out) throw std::runtime_error("failed writing manifest: " + path);
}

}  // namespace kws
