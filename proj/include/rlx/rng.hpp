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

#ifndef RLX_RNG_HPP_
#define RLX_RNG_HPP_

#include <cmath>
#include <cstdint>

namespace rlx {

// One splitmix64 step. All randomness in the kit flows through this
// generator so that every run is reproducible from a single integer and
// the same bit stream is produced on every platform (std::<random>
// distributions are implementation-defined; these are not).
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent sub-streams of a master seed. A derived seed is one splitmix64
// output of (master XOR stream-tag) where the tag is the stream id scaled by
// an odd 64-bit constant. Every consumer of randomness in a run draws from
// one of these streams, never from the master seed directly.
enum class SeedStream : std::uint64_t {
  kEnvBase = 1,      // base seed for environment resets; env i gets base + i
  kNetworkInit = 2,  // weight initialization
  kShuffle = 3,      // PPO minibatch shuffling
  kActionNoise = 4,  // policy sampling during collection
  kWarmup = 5,       // SAC pre-learning uniform actions
  kReplay = 6,       // SAC replay batch sampling
  kEval = 7,         // test-mode episodes
};

inline std::uint64_t derive_seed(std::uint64_t master, SeedStream stream) {
  std::uint64_t state =
      master ^ (static_cast<std::uint64_t>(stream) * 0xa3ec647659359acdULL);
  return splitmix64_next(state);
}

// Deterministic, portable RNG: splitmix64 stream with hand-rolled
// distributions (unit uniform, Box-Muller normal, fixed-point bounded int).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; generates pairs, caches the second.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    // u1 in (0, 1] keeps the log finite.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
  }

  // Uniform integer in [0, n). Fixed-point multiply; the O(n/2^64) bias is
  // irrelevant at the sizes used here.
  std::uint64_t bounded(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace rlx

#endif  // RLX_RNG_HPP_
