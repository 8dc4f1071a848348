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

#ifndef RLX_ENVS_PENDULUM_HPP_
#define RLX_ENVS_PENDULUM_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rlx/env.hpp"
#include "rlx/error.hpp"
#include "rlx/rng.hpp"

namespace rlx {

// Classic torque-limited pendulum swing-up. g=10, m=1, l=1, dt=0.05,
// semi-implicit Euler:
//   accel = (3g / 2l) sin(theta) + (3 / m l^2) torque
// Reward is computed on the pre-step state with the clipped torque:
//   -(wrap(theta)^2 + 0.1 thetadot^2 + 0.001 torque^2)
// where wrap maps to (-pi, pi]. Episodes never terminate; they truncate at
// 200 steps. Initial state: theta ~ U(-pi, pi), thetadot ~ U(-1, 1).
class PendulumEnv : public Env {
 public:
  static constexpr double kGravity = 10.0;
  static constexpr double kMass = 1.0;
  static constexpr double kLength = 1.0;
  static constexpr double kDt = 0.05;
  static constexpr double kMaxSpeed = 8.0;
  static constexpr double kMaxTorque = 2.0;
  static constexpr std::int64_t kMaxSteps = 200;

  PendulumEnv()
      : obs_space_(Space::box({-1.0f, -1.0f, -8.0f}, {1.0f, 1.0f, 8.0f})),
        act_space_(Space::box({-2.0f}, {2.0f})),
        rng_(0) {}

  const Space& observation_space() const override { return obs_space_; }
  const Space& action_space() const override { return act_space_; }

  std::vector<float> reset(std::optional<std::uint64_t> seed) override {
    if (seed) rng_ = Rng(*seed);
    theta_ = rng_.uniform(-M_PI, M_PI);
    theta_dot_ = rng_.uniform(-1.0, 1.0);
    step_index_ = 0;
    active_ = true;
    return observation();
  }

  StepResult step(std::span<const float> action) override {
    if (!active_)
      throw UsageError("pendulum: step() after episode end without reset()");
    if (action.size() != 1)
      throw ConfigError("pendulum: expected 1 action value");
    const double torque =
        std::clamp(static_cast<double>(action[0]), -kMaxTorque, kMaxTorque);

    const double wrapped = wrap_angle(theta_);
    StepResult r;
    r.reward = -(wrapped * wrapped + 0.1 * theta_dot_ * theta_dot_ +
                 0.001 * torque * torque);

    const double accel = (3.0 * kGravity / (2.0 * kLength)) * std::sin(theta_) +
                         (3.0 / (kMass * kLength * kLength)) * torque;
    theta_dot_ =
        std::clamp(theta_dot_ + accel * kDt, -kMaxSpeed, kMaxSpeed);
    theta_ += theta_dot_ * kDt;
    step_index_ += 1;

    r.terminated = false;
    r.truncated = step_index_ >= kMaxSteps;
    r.observation = observation();
    if (r.done()) active_ = false;
    return r;
  }

  double theta() const { return theta_; }
  double theta_dot() const { return theta_dot_; }

  // Maps any angle into (-pi, pi].
  static double wrap_angle(double a) {
    a = std::fmod(a + M_PI, 2.0 * M_PI);
    if (a < 0) a += 2.0 * M_PI;
    const double w = a - M_PI;
    return w == -M_PI ? M_PI : w;
  }

 private:
  std::vector<float> observation() const {
    return {static_cast<float>(std::cos(theta_)),
            static_cast<float>(std::sin(theta_)),
            static_cast<float>(theta_dot_)};
  }

  Space obs_space_;
  Space act_space_;
  Rng rng_;
  double theta_ = 0.0;
  double theta_dot_ = 0.0;
  std::int64_t step_index_ = 0;
  bool active_ = false;
};

}  // namespace rlx

#endif  // RLX_ENVS_PENDULUM_HPP_
