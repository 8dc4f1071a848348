// Copyright 2026 The rlxkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RLX_SPACE_HPP_
#define RLX_SPACE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rlx/error.hpp"

namespace rlx {

// Action/observation space descriptor: a flat continuous box with
// componentwise bounds, or a discrete choice among n arms.
struct Space {
  enum class Kind { kContinuousBox, kDiscrete };

  Kind kind = Kind::kContinuousBox;
  std::vector<float> low;   // box only
  std::vector<float> high;  // box only
  std::int64_t n = 0;       // discrete only

  static Space box(std::vector<float> low, std::vector<float> high) {
    if (low.size() != high.size() || low.empty())
      throw ConfigError("box space: low/high size mismatch");
    for (std::size_t i = 0; i < low.size(); ++i)
      if (!(low[i] < high[i]))
        throw ConfigError("box space: low must be componentwise below high");
    Space s;
    s.kind = Kind::kContinuousBox;
    s.low = std::move(low);
    s.high = std::move(high);
    return s;
  }

  static Space discrete(std::int64_t n) {
    if (n < 1) throw ConfigError("discrete space: n must be >= 1");
    Space s;
    s.kind = Kind::kDiscrete;
    s.n = n;
    return s;
  }

  // Width of the flat vector representation: box dimension, or 1 for a
  // discrete arm index.
  std::int64_t flat_dim() const {
    return kind == Kind::kContinuousBox
               ? static_cast<std::int64_t>(low.size())
               : 1;
  }

  bool contains(const std::vector<float>& v) const {
    if (kind == Kind::kDiscrete) {
      if (v.size() != 1) return false;
      const auto a = static_cast<std::int64_t>(v[0]);
      return a >= 0 && a < n && static_cast<float>(a) == v[0];
    }
    if (v.size() != low.size()) return false;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] < low[i] || v[i] > high[i]) return false;
    return true;
  }

  std::string describe() const {
    if (kind == Kind::kDiscrete) return "discrete(" + std::to_string(n) + ")";
    return "box(" + std::to_string(low.size()) + ")";
  }

  friend bool operator==(const Space& a, const Space& b) {
    return a.kind == b.kind && a.low == b.low && a.high == b.high && a.n == b.n;
  }
};

inline const char* space_kind_name(Space::Kind k) {
  return k == Space::Kind::kContinuousBox ? "continuous_box" : "discrete";
}

}  // namespace rlx

#endif  // RLX_SPACE_HPP_
