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

#ifndef RLX_GAE_HPP_
#define RLX_GAE_HPP_

#include <cstdint>
#include <vector>

#include "rlx/error.hpp"

namespace rlx {

// Generalized advantage estimation over a [nr_steps x nr_envs] rollout,
// flat-indexed t * nr_envs + i. bootstrap_values[t, i] is the value of the
// state that followed (t, i): V(s_{t+1}) mid-episode, V(final_observation)
// where the episode ended (a truncated end still bootstraps; a terminated
// end is masked inside delta).
//
//   delta_t = r_t + gamma * bootstrap_t * (1 - terminated_t) - V_t
//   A_t     = delta_t + gamma * lambda * (1 - done_t) * A_{t+1}
//   return_t = A_t + V_t
//
// computed backwards, where done = terminated or truncated cuts the
// recursion.
template <typename S>
void compute_gae(const std::vector<S>& rewards, const std::vector<S>& values,
                 const std::vector<S>& bootstrap_values,
                 const std::vector<std::uint8_t>& terminated,
                 const std::vector<std::uint8_t>& truncated, int nr_steps,
                 int nr_envs, double gamma, double lambda,
                 std::vector<S>* advantages, std::vector<S>* returns) {
  const std::size_t total =
      static_cast<std::size_t>(nr_steps) * static_cast<std::size_t>(nr_envs);
  if (rewards.size() != total || values.size() != total ||
      bootstrap_values.size() != total || terminated.size() != total ||
      truncated.size() != total)
    throw ConfigError("compute_gae: array sizes must all be nr_steps*nr_envs");
  advantages->assign(total, S(0));
  returns->assign(total, S(0));
  for (int i = 0; i < nr_envs; ++i) {
    S tail = S(0);
    for (int t = nr_steps - 1; t >= 0; --t) {
      const std::size_t p = static_cast<std::size_t>(t) *
                                static_cast<std::size_t>(nr_envs) +
                            static_cast<std::size_t>(i);
      const S not_terminated = terminated[p] ? S(0) : S(1);
      const S done = (terminated[p] || truncated[p]) ? S(1) : S(0);
      const S delta = rewards[p] +
                      static_cast<S>(gamma) * bootstrap_values[p] *
                          not_terminated -
                      values[p];
      tail = delta +
             static_cast<S>(gamma) * static_cast<S>(lambda) * (S(1) - done) *
                 tail;
      (*advantages)[p] = tail;
      (*returns)[p] = tail + values[p];
    }
  }
}

}  // namespace rlx

#endif  // RLX_GAE_HPP_
