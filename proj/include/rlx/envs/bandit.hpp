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

#ifndef RLX_ENVS_BANDIT_HPP_
#define RLX_ENVS_BANDIT_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rlx/env.hpp"
#include "rlx/error.hpp"

namespace rlx {

// Two-armed bandit with one-step episodes: reward 1 for the hidden best arm,
// 0 otherwise. Discrete-action target for interface tests.
class BanditEnv : public Env {
 public:
  explicit BanditEnv(std::int64_t best_arm = 1, std::int64_t nr_arms = 2)
      : obs_space_(Space::box({-1.0f}, {1.0f})),
        act_space_(Space::discrete(nr_arms)),
        best_arm_(best_arm) {
    if (best_arm < 0 || best_arm >= nr_arms)
      throw ConfigError("bandit: best_arm out of range");
  }

  const Space& observation_space() const override { return obs_space_; }
  const Space& action_space() const override { return act_space_; }

  std::vector<float> reset(std::optional<std::uint64_t> /*seed*/) override {
    active_ = true;
    return {0.0f};
  }

  StepResult step(std::span<const float> action) override {
    if (!active_)
      throw UsageError("bandit: step() after episode end without reset()");
    if (action.size() != 1)
      throw ConfigError("bandit: expected 1 action value");
    const auto arm = static_cast<std::int64_t>(std::llround(action[0]));
    StepResult r;
    r.reward = (arm == best_arm_) ? 1.0 : 0.0;
    r.terminated = true;
    r.observation = {0.0f};
    active_ = false;
    return r;
  }

 private:
  Space obs_space_;
  Space act_space_;
  std::int64_t best_arm_;
  bool active_ = false;
};

}  // namespace rlx

#endif  // RLX_ENVS_BANDIT_HPP_
