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

#ifndef RLX_ENV_HPP_
#define RLX_ENV_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "rlx/space.hpp"

namespace rlx {

// One environment transition.
//
// terminated: the episode reached an environment-defined end state; the
//   successor value is zero when bootstrapping.
// truncated: a time limit cut the episode; the successor state is still
//   worth bootstrapping from.
// final_observation: set by vectorized wrappers when an autoreset replaced
//   `observation` with a fresh reset; holds the true last observation.
struct StepResult {
  std::vector<float> observation;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
  std::optional<std::vector<float>> final_observation;

  bool done() const { return terminated || truncated; }
};

// Episodic environment contract.
//
// reset(seed): seeds the env's private rng when a seed is given, otherwise
// continues the existing stream (the autoreset path). Identical seed implies
// identical observation. step() after a terminated/truncated transition
// without an intervening reset throws UsageError. Continuous actions are
// clipped to the action box before dynamics; discrete actions arrive as the
// arm index in action[0].
class Env {
 public:
  virtual ~Env() = default;

  virtual const Space& observation_space() const = 0;
  virtual const Space& action_space() const = 0;

  virtual std::vector<float> reset(std::optional<std::uint64_t> seed) = 0;
  virtual StepResult step(std::span<const float> action) = 0;
};

using EnvFactory = std::function<std::unique_ptr<Env>()>;

}  // namespace rlx

#endif  // RLX_ENV_HPP_
