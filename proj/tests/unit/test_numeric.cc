// tests/unit/test_numeric.cc

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

#include <cmath>
#include <stdexcept>

#include "kws/numeric.h"
#include "kws/rng.h"

using kws::Vector;

namespace {

// Extended-precision log-softmax, the straightforward way.
Vector long_double_log_softmax(const Vector& logits) {
  long double sum = 0.0L;
  for (const double v : logits) sum += std::exp(static_cast<long double>(v));
  const long double lse = std::log(sum);
  Vector out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = static_cast<double>(static_cast<long double>(logits[i]) - lse);
  }
  return out;
}

}  // namespace

TEST_CASE("cosine basics") {
  CHECK(kws::cosine(Vector{1, 0}, Vector{0, 1}) == doctest::Approx(0.0));
  CHECK(kws::cosine(Vector{2, 2}, Vector{1, 1}) == doctest::Approx(1.0));
  CHECK(kws::cosine(Vector{3, 4}, Vector{4, 3}) == doctest::Approx(0.96));  // 24/25
}

TEST_CASE("cosine errors") {
  CHECK_THROWS_AS(kws::cosine(Vector{1, 0}, Vector{1, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(kws::cosine(Vector{0, 0}, Vector{1, 0}), std::invalid_argument);
}

TEST_CASE("cosine symmetry and scale invariance") {
  kws::Rng rng(7);
  for (int it = 0; it < 200; ++it) {
    Vector a(5), b(5);
    for (auto& v : a) v = rng.normal();
    for (auto& v : b) v = rng.normal();
    CHECK(kws::cosine(a, b) == kws::cosine(b, a));  // exact

    const double s = std::exp(rng.uniform(-3.0, 3.0));
    Vector scaled = a;
    for (auto& v : scaled) v *= s;
    CHECK(kws::cosine(a, scaled) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("cosine output stays clamped") {
  // A vector against itself can exceed 1 by rounding without the clamp.
  kws::Rng rng(11);
  for (int it = 0; it < 500; ++it) {
    Vector a(8);
    for (auto& v : a) v = rng.normal() * 1e3;
    const double c = kws::cosine(a, a);
    CHECK(c <= 1.0);
    CHECK(c >= -1.0);
  }
}

TEST_CASE("log_softmax trivial values") {
  const Vector uniform = kws::log_softmax(Vector{0, 0});
  CHECK(uniform[0] == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
  CHECK(uniform[1] == doctest::Approx(-std::log(2.0)).epsilon(1e-15));

  const Vector big = kws::log_softmax(Vector{1000, 0});
  CHECK(big[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(big[1] == doctest::Approx(-1000.0).epsilon(1e-9));

  CHECK_THROWS_AS(kws::log_softmax(Vector{}), std::invalid_argument);
}

TEST_CASE("log_softmax matches extended-precision oracle") {
  const Vector expected = long_double_log_softmax(Vector{1, 2, 3});
  const Vector actual = kws::log_softmax(Vector{1, 2, 3});
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::fabs(actual[i] - expected[i]) < 1e-12);
  }

  kws::Rng rng(3);
  for (int it = 0; it < 100; ++it) {
    Vector v(1 + rng.uniform_index(8));
    for (auto& x : v) x = rng.uniform(-40.0, 40.0);
    const Vector want = long_double_log_softmax(v);
    const Vector got = kws::log_softmax(v);
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(std::fabs(got[i] - want[i]) < 1e-12);
    }
  }
}

TEST_CASE("log_softmax exp sums to one, large magnitudes included") {
  kws::Rng rng(5);
  for (int it = 0; it < 200; ++it) {
    Vector v(2 + rng.uniform_index(6));
    for (auto& x : v) x = rng.uniform(-1e3, 1e3);
    const Vector ls = kws::log_softmax(v);
    long double sum = 0.0L;
    for (const double x : ls) sum += std::exp(static_cast<long double>(x));
    CHECK(std::fabs(static_cast<double>(sum) - 1.0) < 1e-12);
  }
}

TEST_CASE("log_softmax shift invariance") {
  kws::Rng rng(9);
  for (int it = 0; it < 100; ++it) {
    Vector v(3);
    for (auto& x : v) x = rng.uniform(-10.0, 10.0);
    const double shift = rng.uniform(-100.0, 100.0);
    Vector shifted = v;
    for (auto& x : shifted) x += shift;
    const Vector a = kws::log_softmax(v);
    const Vector b = kws::log_softmax(shifted);
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(std::fabs(a[i] - b[i]) < 1e-9);
    }
  }
}

TEST_CASE("l2_normalize") {
  const Vector unit = kws::l2_normalize(Vector{3, 4});
  CHECK(unit[0] == doctest::Approx(0.6));
  CHECK(unit[1] == doctest::Approx(0.8));

  const Vector already = kws::l2_normalize(Vector{1, 0});
  CHECK(already[0] == 1.0);
  CHECK(already[1] == 0.0);

  const Vector negative = kws::l2_normalize(Vector{-2, 0});
  CHECK(negative[0] == -1.0);

  CHECK_THROWS_AS(kws::l2_normalize(Vector{0, 0}), std::invalid_argument);

  kws::Rng rng(13);
  for (int it = 0; it < 100; ++it) {
    Vector v(6);
    for (auto& x : v) x = rng.normal() * std::exp(rng.uniform(-2.0, 6.0));
    CHECK(std::fabs(kws::norm(kws::l2_normalize(v)) - 1.0) < 1e-12);
  }
}

TEST_CASE("check_finite rejects NaN and infinity") {
  CHECK_NOTHROW(kws::check_finite(Vector{1.0, -2.0}, "x"));
  CHECK_THROWS_AS(kws::check_finite(Vector{1.0, std::nan("")}, "x"), std::invalid_argument);
  CHECK_THROWS_AS(kws::check_finite(Vector{1.0, INFINITY}, "x"), std::invalid_argument);
}

TEST_CASE("matrix layout") {
  kws::Matrix m(2, 3);
  m.at(0, 0) = 1.0;
  m.at(1, 2) = 5.0;
  CHECK(m.data[0] == 1.0);
  CHECK(m.data[5] == 5.0);
  CHECK(m.row(1)[2] == 5.0);
}
