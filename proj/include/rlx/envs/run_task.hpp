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

#ifndef RLX_ENVS_RUN_TASK_HPP_
#define RLX_ENVS_RUN_TASK_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rlx/env.hpp"
#include "rlx/error.hpp"

namespace rlx {

// 1-D point-mass sprint: accelerate toward a goal 30 m away within an
// 8-second episode (160 control steps at dt = 0.05 s). The action is an
// acceleration in [-1, 1] m/s^2, velocity saturates at +/-2 m/s, and each
// step pays out the distance gained toward the goal:
//   reward = |goal - pos_before| - |goal - pos_after|
// so the episode return telescopes to 30 minus the final distance. The goal
// is out of reach inside the time limit; episodes end truncated at step 160
// (or terminated early if the goal were ever crossed).
class RunTaskEnv : public Env {
 public:
  static constexpr double kGoal = 30.0;
  static constexpr double kDt = 0.05;
  static constexpr double kMaxSpeed = 2.0;
  static constexpr std::int64_t kMaxSteps = 160;

  RunTaskEnv()
      : obs_space_(Space::box({0.0f, -1.0f, 0.0f}, {1.0f, 1.0f, 1.0f})),
        act_space_(Space::box({-1.0f}, {1.0f})) {}

  const Space& observation_space() const override { return obs_space_; }
  const Space& action_space() const override { return act_space_; }

  std::vector<float> reset(std::optional<std::uint64_t> /*seed*/) override {
    // The initial state is deterministic; the seed only fixes the contract.
    position_ = 0.0;
    velocity_ = 0.0;
    step_index_ = 0;
    active_ = true;
    return observation();
  }

  StepResult step(std::span<const float> action) override {
    if (!active_)
      throw UsageError("run_task: step() after episode end without reset()");
    if (action.size() != 1)
      throw ConfigError("run_task: expected 1 action value");
    const double a = std::clamp(static_cast<double>(action[0]), -1.0, 1.0);

    const double dist_prev = std::abs(kGoal - position_);
    velocity_ = std::clamp(velocity_ + a * kDt, -kMaxSpeed, kMaxSpeed);
    position_ += velocity_ * kDt;
    step_index_ += 1;
    const double dist_new = std::abs(kGoal - position_);

    StepResult r;
    r.reward = dist_prev - dist_new;
    r.terminated = position_ >= kGoal;
    r.truncated = !r.terminated && step_index_ >= kMaxSteps;
    r.observation = observation();
    if (r.done()) active_ = false;
    return r;
  }

  double position() const { return position_; }
  double velocity() const { return velocity_; }

 private:
  std::vector<float> observation() const {
    const double dist = std::abs(kGoal - position_);
    const double remaining =
        static_cast<double>(kMaxSteps - step_index_) /
        static_cast<double>(kMaxSteps);
    return {static_cast<float>(dist / kGoal),
            static_cast<float>(velocity_ / kMaxSpeed),
            static_cast<float>(remaining)};
  }

  Space obs_space_;
  Space act_space_;
  double position_ = 0.0;
  double velocity_ = 0.0;
  std::int64_t step_index_ = 0;
  bool active_ = false;
};

}  // namespace rlx

#endif  // RLX_ENVS_RUN_TASK_HPP_
