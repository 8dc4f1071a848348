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

#ifndef RLX_VEC_ENV_HPP_
#define RLX_VEC_ENV_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "rlx/env.hpp"
#include "rlx/error.hpp"

namespace rlx {

// Batched step over nr_envs sub-envs. Arrays are indexed by sub-env;
// observations are packed row-major [nr_envs x obs_dim].
struct VecStepResult {
  std::vector<float> observations;
  std::vector<double> rewards;
  std::vector<std::uint8_t> terminated;
  std::vector<std::uint8_t> truncated;
  // Present at index i exactly when terminated[i] || truncated[i]; holds the
  // observation the sub-env produced before the autoreset replaced it.
  std::vector<std::optional<std::vector<float>>> final_observations;
};

// Synchronous vectorization with immediate autoreset. Sub-env i is seeded
// base_seed + i on the initial reset; autoresets continue each env's own
// stream, so a VecEnv run is bit-identical to stepping the same seeded envs
// by hand.
class VecEnv {
 public:
  VecEnv(const EnvFactory& factory, int nr_envs, std::uint64_t base_seed)
      : base_seed_(base_seed) {
    if (nr_envs < 1) throw ConfigError("vectorize: nr_envs must be >= 1");
    for (int i = 0; i < nr_envs; ++i) envs_.push_back(factory());
    obs_dim_ = envs_[0]->observation_space().flat_dim();
    act_dim_ = envs_[0]->action_space().flat_dim();
  }

  int nr_envs() const { return static_cast<int>(envs_.size()); }
  std::int64_t obs_dim() const { return obs_dim_; }
  std::int64_t act_dim() const { return act_dim_; }
  const Space& observation_space() const { return envs_[0]->observation_space(); }
  const Space& action_space() const { return envs_[0]->action_space(); }

  // Batched initial reset.
  std::vector<float> reset() {
    std::vector<float> out;
    out.reserve(static_cast<std::size_t>(nr_envs()) * obs_dim_);
    for (int i = 0; i < nr_envs(); ++i) {
      auto obs = envs_[i]->reset(base_seed_ + static_cast<std::uint64_t>(i));
      out.insert(out.end(), obs.begin(), obs.end());
    }
    return out;
  }

  // Batched step; actions packed row-major [nr_envs x act_dim]. A finished
  // sub-env is reset in the same call: the batch observation is the fresh
  // reset observation and the true last one is carried in
  // final_observations.
  VecStepResult step(std::span<const float> actions) {
    const auto n = static_cast<std::size_t>(nr_envs());
    if (actions.size() != n * static_cast<std::size_t>(act_dim_))
      throw ConfigError("vec step: expected " +
                        std::to_string(n * static_cast<std::size_t>(act_dim_)) +
                        " action values, got " + std::to_string(actions.size()));
    VecStepResult out;
    out.observations.reserve(n * static_cast<std::size_t>(obs_dim_));
    out.rewards.resize(n);
    out.terminated.resize(n);
    out.truncated.resize(n);
    out.final_observations.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      StepResult r = envs_[i]->step(
          actions.subspan(i * static_cast<std::size_t>(act_dim_),
                          static_cast<std::size_t>(act_dim_)));
      out.rewards[i] = r.reward;
      out.terminated[i] = r.terminated ? 1 : 0;
      out.truncated[i] = r.truncated ? 1 : 0;
      if (r.done()) {
        out.final_observations[i] = std::move(r.observation);
        auto fresh = envs_[i]->reset(std::nullopt);
        out.observations.insert(out.observations.end(), fresh.begin(),
                                fresh.end());
      } else {
        out.observations.insert(out.observations.end(), r.observation.begin(),
                                r.observation.end());
      }
    }
    return out;
  }

  Env& env(int i) { return *envs_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<std::unique_ptr<Env>> envs_;
  std::uint64_t base_seed_;
  std::int64_t obs_dim_;
  std::int64_t act_dim_;
};

inline std::unique_ptr<VecEnv> vectorize(const EnvFactory& factory,
                                         int nr_envs,
                                         std::uint64_t base_seed) {
  return std::make_unique<VecEnv>(factory, nr_envs, base_seed);
}

}  // namespace rlx

#endif  // RLX_VEC_ENV_HPP_
