// core/src/enrollment.cc

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

#include "kws/enrollment.h"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "kws/losses.h"

namespace kws {

std::vector<Prototype> enroll(const std::map<std::string, std::vector<Vector>>& samples,
                              const EnrollOptions& options) {
  if (samples.empty()) throw std::invalid_argument("enroll: no keywords given");
  std::size_t dim = 0;
  std::vector<Prototype> prototypes;
  prototypes.reserve(samples.size());
  for (const auto& [keyword, embeddings] : samples) {
    if (embeddings.empty()) {
      throw std::invalid_argument("enroll: keyword '" + keyword + "' has no samples");
    }
    if (dim == 0) dim = embeddings.front().size();
    for (const auto& e : embeddings) {
      if (e.size() != dim) {
        throw std::invalid_argument("enroll: embedding dimension mismatch for keyword '" +
                                    keyword + "'");
      }
    }
    Vector proto;
    if (options.normalize_before_average) {
      std::vector<Vector> normalized;
      normalized.reserve(embeddings.size());
      for (const auto& e : embeddings) normalized.push_back(l2_normalize(e));
      proto = centroid(normalized);
    } else {
      proto = centroid(embeddings);
    }
    check_finite(proto, "prototype for '" + keyword + "'");
    prototypes.push_back({keyword, std::move(proto), static_cast<int>(embeddings.size())});
  }
  return prototypes;  // map iteration already sorted them by keyword
}

ScoreReport score(const Vector& query, const std::vector<Prototype>& prototypes) {
  if (prototypes.empty()) throw std::invalid_argument("score: no prototypes");
  ScoreReport report;
  report.scores.reserve(prototypes.size());
  bool first = true;
  for (const auto& proto : prototypes) {
    const double c = cosine(query, proto.vector);
    report.scores.emplace_back(proto.keyword, c);
    // Strict > plus sorted prototypes gives the lexicographically smallest
    // keyword on ties.
    if (first || c > report.best_score) {
      report.best_score = c;
      report.best_keyword = proto.keyword;
      first = false;
    }
  }
  return report;
}

std::optional<std::string> detect(const ScoreReport& report, double threshold) {
  if (report.best_score >= threshold) return report.best_keyword;
  return std::nullopt;
}

namespace {

constexpr char kStoreMagic[8] = {'K', 'W', 'S', 'P', 'R', 'O', '0', '1'};

void write_u32le(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

std::uint32_t read_u32le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void save_prototypes(const std::string& path, const std::vector<Prototype>& prototypes) {
  if (prototypes.empty()) throw std::invalid_argument("save_prototypes: empty store");
  const std::size_t dim = prototypes.front().vector.size();
  for (const auto& p : prototypes) {
    if (p.vector.size() != dim) {
      throw std::invalid_argument("save_prototypes: inconsistent prototype dimensions");
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot create prototype store: " + path);
  out.write(kStoreMagic, sizeof(kStoreMagic));
  write_u32le(out, static_cast<std::uint32_t>(prototypes.size()));
  write_u32le(out, static_cast<std::uint32_t>(dim));
  for (const auto& p : prototypes) {
    write_u32le(out, static_cast<std::uint32_t>(p.keyword.size()));
    out.write(p.keyword.data(), static_cast<std::streamsize>(p.keyword.size()));
    write_u32le(out, static_cast<std::uint32_t>(p.shots));
    for (const double v : p.vector) {
      const float f = static_cast<float>(v);
      std::uint32_t bits;
      std::memcpy(&bits, &f, sizeof(bits));
      write_u32le(out, bits);
    }
  }
  if (!out) throw std::runtime_error("failed writing prototype store: " + path);
}

std::vector<Prototype> load_prototypes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open prototype store: " + path);
  char magic[sizeof(kStoreMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kStoreMagic, sizeof(magic)) != 0) {
    throw std::runtime_error(path + ": not a kws prototype store");
  }
  const std::uint32_t count = read_u32le(in);
  const std::uint32_t dim = read_u32le(in);
  std::vector<Prototype> prototypes;
  prototypes.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Prototype p;
    const std::uint32_t name_len = read_u32le(in);
    p.keyword.resize(name_len);
    in.read(p.keyword.data(), name_len);
    p.shots = static_cast<int>(read_u32le(in));
    p.vector.resize(dim);
    for (std::uint32_t d = 0; d < dim; ++d) {
      const std::uint32_t bits = read_u32le(in);
      float f;
      std::memcpy(&f, &bits, sizeof(f));
      p.vector[d] = static_cast<double>(f);
    }
    if (!in) throw std::runtime_error(path + ": truncated prototype store");
    prototypes.push_back(std::move(p));
  }
  return prototypes;
}

void export_prototypes_json(const std::string& path,
                            const std::vector<Prototype>& prototypes) {
  nlohmann::ordered_json root = nlohmann::ordered_json::array();
  for (const auto& p : prototypes) {
    nlohmann::ordered_json obj;
    obj["keyword"] = p.keyword;
    obj["shots"] = p.shots;
    obj["vector"] = p.vector;
    root.push_back(std::move(obj));
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot create JSON export: " + path);
  out << root.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing JSON export: " + path);
}

}  // namespace kws
