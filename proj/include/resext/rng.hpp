/*
 * Copyright 2025-present the resext authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef RESEXT_RNG_HPP_
#define RESEXT_RNG_HPP_

#include <cmath>
#include <cstdint>

#include "resext/errors.hpp"

namespace resext {

/// Deterministic random stream used by the synthetic-data generator.
///
/// The generator algorithm is part of the data contract: a reimplementation
/// in another language must reproduce the same stream for the same seed.
///
///   state update   SplitMix64 (Steele, Lea & Vigna 2014):
///                  s += 0x9E3779B97F4A7C15
///                  z = s; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///                  z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///                  return z ^ (z >> 31)
///   uniform        (next() >> 11) * 2^-53, in [0, 1)
///   normal         Box-Muller, cosine branch only:
///                  u1 = 1 - uniform(); u2 = uniform()
///                  z  = sqrt(-2 ln u1) * cos(2 pi u2)
///                  (two uniforms consumed per variate)
///   gamma(k>=1)    Marsaglia & Tsang (2000) squeeze/rejection:
///                  d = k - 1/3, c = 1/sqrt(9 d)
///                  repeat: x = normal(); v = (1 + c x)^3
///                          if v > 0: u = uniform()
///                          accept when ln u < x^2/2 + d - d v + d ln v
///                  return d * v
///   gamma(k<1)     gamma(k + 1) * uniform()^(1/k), with uniform() == 0
///                  redrawn (consumes the gamma(k+1) draws first, then one
///                  or more uniforms)
///
/// All variates are drawn from a single sequential stream; the consumer
/// documents its draw order (e.g. rasters row-major, VV band before VH).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), by rejection of the biased tail.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

  /// Standard normal variate.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Gamma(shape, scale 1) variate, shape > 0.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw ParamError("gamma shape must be > 0");
    if (shape < 1.0) {
      const double g = gamma(shape + 1.0);
      double u = uniform();
      while (u == 0.0) u = uniform();
      return g * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      const double x = normal();
      const double t = 1.0 + c * x;
      if (t <= 0.0) continue;
      const double v = t * t * t;
      const double u = uniform();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
        return d * v;
      }
    }
  }

  /// Multiplicative speckle factor: Gamma(looks) / looks, unit mean,
  /// variance 1/looks.
  double unit_mean_gamma(double looks) { return gamma(looks) / looks; }

 private:
  std::uint64_t state_;
};

}  // namespace resext

#endif  // RESEXT_RNG_HPP_
