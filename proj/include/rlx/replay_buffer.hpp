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

#ifndef RLX_REPLAY_BUFFER_HPP_
#define RLX_REPLAY_BUFFER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "rlx/error.hpp"
#include "rlx/param_set.hpp"
#include "rlx/rng.hpp"

namespace rlx {

// Fixed-capacity FIFO transition store. A ring cursor overwrites the oldest
// entry once full; sampling is uniform with replacement over the current
// size.
template <typename S>
class ReplayBuffer {
 public:
  ReplayBuffer(std::int64_t capacity, std::int64_t obs_dim,
               std::int64_t act_dim)
      : capacity_(capacity), obs_dim_(obs_dim), act_dim_(act_dim) {
    if (capacity < 1) throw ConfigError("replay buffer capacity must be >= 1");
    obs_.resize(static_cast<std::size_t>(capacity * obs_dim));
    next_obs_.resize(static_cast<std::size_t>(capacity * obs_dim));
    actions_.resize(static_cast<std::size_t>(capacity * act_dim));
    rewards_.resize(static_cast<std::size_t>(capacity));
    terminated_.resize(static_cast<std::size_t>(capacity));
  }

  std::int64_t capacity() const { return capacity_; }
  std::int64_t size() const { return size_; }
  std::int64_t cursor() const { return cursor_; }

  void insert(std::span<const float> obs, std::span<const S> action,
              double reward, std::span<const float> next_obs,
              bool terminated) {
    if (static_cast<std::int64_t>(obs.size()) != obs_dim_ ||
        static_cast<std::int64_t>(next_obs.size()) != obs_dim_ ||
        static_cast<std::int64_t>(action.size()) != act_dim_)
      throw ConfigError("replay insert: width mismatch");
    const auto row = static_cast<std::size_t>(cursor_);
    for (std::int64_t d = 0; d < obs_dim_; ++d) {
      obs_[row * static_cast<std::size_t>(obs_dim_) +
           static_cast<std::size_t>(d)] =
          static_cast<S>(obs[static_cast<std::size_t>(d)]);
      next_obs_[row * static_cast<std::size_t>(obs_dim_) +
                static_cast<std::size_t>(d)] =
          static_cast<S>(next_obs[static_cast<std::size_t>(d)]);
    }
    for (std::int64_t d = 0; d < act_dim_; ++d)
      actions_[row * static_cast<std::size_t>(act_dim_) +
               static_cast<std::size_t>(d)] = action[static_cast<std::size_t>(d)];
    rewards_[row] = static_cast<S>(reward);
    terminated_[row] = terminated ? 1 : 0;
    cursor_ = (cursor_ + 1) % capacity_;
    if (size_ < capacity_) ++size_;
  }

  struct Batch {
    MatX<S> obs;
    MatX<S> actions;
    MatX<S> next_obs;
    VecX<S> rewards;
    VecX<S> terminated;
  };

  Batch sample(std::int64_t batch_size, Rng& rng) const {
    if (size_ == 0) throw UsageError("replay sample: buffer is empty");
    Batch b;
    b.obs.resize(batch_size, obs_dim_);
    b.actions.resize(batch_size, act_dim_);
    b.next_obs.resize(batch_size, obs_dim_);
    b.rewards.resize(batch_size);
    b.terminated.resize(batch_size);
    for (std::int64_t r = 0; r < batch_size; ++r) {
      const auto idx = static_cast<std::size_t>(
          rng.bounded(static_cast<std::uint64_t>(size_)));
      for (std::int64_t d = 0; d < obs_dim_; ++d) {
        b.obs(r, d) = obs_[idx * static_cast<std::size_t>(obs_dim_) +
                           static_cast<std::size_t>(d)];
        b.next_obs(r, d) =
            next_obs_[idx * static_cast<std::size_t>(obs_dim_) +
                      static_cast<std::size_t>(d)];
      }
      for (std::int64_t d = 0; d < act_dim_; ++d)
        b.actions(r, d) = actions_[idx * static_cast<std::size_t>(act_dim_) +
                                   static_cast<std::size_t>(d)];
      b.rewards[r] = rewards_[idx];
      b.terminated[r] = terminated_[idx];
    }
    return b;
  }

  // Stored transition, for model-equivalence tests.
  struct Transition {
    std::vector<S> obs;
    std::vector<S> action;
    S reward;
    std::vector<S> next_obs;
    bool terminated;

    bool operator==(const Transition&) const = default;
  };

  Transition transition(std::int64_t i) const {
    if (i < 0 || i >= size_) throw UsageError("replay transition: bad index");
    const auto row = static_cast<std::size_t>(i);
    Transition t;
    t.obs.assign(obs_.begin() + row * static_cast<std::size_t>(obs_dim_),
                 obs_.begin() + (row + 1) * static_cast<std::size_t>(obs_dim_));
    t.next_obs.assign(
        next_obs_.begin() + row * static_cast<std::size_t>(obs_dim_),
        next_obs_.begin() + (row + 1) * static_cast<std::size_t>(obs_dim_));
    t.action.assign(
        actions_.begin() + row * static_cast<std::size_t>(act_dim_),
        actions_.begin() + (row + 1) * static_cast<std::size_t>(act_dim_));
    t.reward = rewards_[row];
    t.terminated = terminated_[row] != 0;
    return t;
  }

 private:
  std::int64_t capacity_;
  std::int64_t obs_dim_;
  std::int64_t act_dim_;
  std::int64_t cursor_ = 0;
  std::int64_t size_ = 0;
  std::vector<S> obs_;
  std::vector<S> actions_;
  std::vector<S> next_obs_;
  std::vector<S> rewards_;
  std::vector<std::uint8_t> terminated_;
};

}  // namespace rlx

#endif  // RLX_REPLAY_BUFFER_HPP_
