// core/include/kws/numeric.h

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
#include <span>
#include <string>
#include <vector>

namespace kws {

using Vector = std::vector<double>;

/// Dense row-major matrix. Just enough linear algebra for this toolkit;
/// no decompositions, no broadcasting.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::span<double> row(std::size_t r) {
    return std::span<double>(data.data() + r * cols, cols);
  }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data.data() + r * cols, cols);
  }
};

/// Throws std::invalid_argument if any entry is NaN or infinite. `what`
/// names the offending quantity in the message.
void check_finite(std::span<const double> values, const std::string& what);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> v);

/// dot(a,b) / (|a| |b|), clamped to [-1, 1] to absorb rounding.
/// Throws on dimension mismatch or a zero-norm input.
double cosine(std::span<const double> a, std::span<const double> b);

/// log(sum_i exp(v_i)) with max subtraction; stable for entries of
/// magnitude ~1e3 and beyond.
double logsumexp(std::span<const double> v);

/// Entry-wise logits - logsumexp(logits). exp of the result sums to 1.
Vector log_softmax(std::span<const double> logits);

/// v / |v|. Throws on a zero-norm input.
Vector l2_normalize(std::span<const double> v);

}  // namespace kws
