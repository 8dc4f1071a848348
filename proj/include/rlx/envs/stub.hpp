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

#ifndef RLX_ENVS_STUB_HPP_
#define RLX_ENVS_STUB_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rlx/env.hpp"
#include "rlx/error.hpp"

namespace rlx {

// Synthetic environment for throughput calibration: trivial dynamics plus an
// artificial per-step sleep of `sleep_micros`. The sleep is a busy-wait so
// the per-step cost is accurate at microsecond scales where OS timer
// granularity would distort a real sleep.
class StubEnv : public Env {
 public:
  explicit StubEnv(std::int64_t sleep_micros = 100,
                   std::int64_t max_steps = 256)
      : obs_space_(Space::box({-1.0f}, {1.0f})),
        act_space_(Space::box({-1.0f}, {1.0f})),
        sleep_micros_(sleep_micros),
        max_steps_(max_steps) {
    if (sleep_micros < 0) throw ConfigError("stub: sleep_micros must be >= 0");
    if (max_steps < 1) throw ConfigError("stub: max_steps must be >= 1");
  }

  const Space& observation_space() const override { return obs_space_; }
  const Space& action_space() const override { return act_space_; }

  std::vector<float> reset(std::optional<std::uint64_t> /*seed*/) override {
    step_index_ = 0;
    active_ = true;
    return {0.0f};
  }

  StepResult step(std::span<const float> action) override {
    if (!active_)
      throw UsageError("stub: step() after episode end without reset()");
    if (action.size() != 1)
      throw ConfigError("stub: expected 1 action value");
    if (sleep_micros_ > 0) {
      const auto until = std::chrono::steady_clock::now() +
                         std::chrono::microseconds(sleep_micros_);
      while (std::chrono::steady_clock::now() < until) {
      }
    }
    step_index_ += 1;
    StepResult r;
    r.reward = 0.0;
    r.truncated = step_index_ >= max_steps_;
    r.observation = {0.0f};
    if (r.done()) active_ = false;
    return r;
  }

 private:
  Space obs_space_;
  Space act_space_;
  std::int64_t sleep_micros_;
  std::int64_t max_steps_;
  std::int64_t step_index_ = 0;
  bool active_ = false;
};

}  // namespace rlx

#endif  // RLX_ENVS_STUB_HPP_
