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

#ifndef RLX_EPISODE_STATS_HPP_
#define RLX_EPISODE_STATS_HPP_

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "rlx/env.hpp"
#include "rlx/error.hpp"

namespace rlx {

struct CompletedEpisode {
  int env_index = 0;
  double episode_return = 0.0;
  std::int64_t episode_length = 0;
};

// Per-run episode bookkeeping: accumulates returns per sub-env and keeps the
// last `window` completed episode returns/lengths in FIFOs. The running
// average is the arithmetic mean of the FIFO contents and is absent until
// the first episode completes.
class EpisodeStats {
 public:
  explicit EpisodeStats(int nr_envs, std::size_t window = 100)
      : window_(window),
        acc_return_(static_cast<std::size_t>(nr_envs), 0.0),
        acc_length_(static_cast<std::size_t>(nr_envs), 0) {
    if (nr_envs < 1) throw ConfigError("EpisodeStats needs nr_envs >= 1");
  }

  // Call exactly once per sub-env per step. Returns the episode record when
  // this step completed one.
  std::optional<CompletedEpisode> record(int env_index, const StepResult& r) {
    auto i = static_cast<std::size_t>(env_index);
    total_steps_ += 1;
    acc_return_[i] += r.reward;
    acc_length_[i] += 1;
    if (!r.done()) return std::nullopt;
    CompletedEpisode ep{env_index, acc_return_[i], acc_length_[i]};
    push(ep);
    acc_return_[i] = 0.0;
    acc_length_[i] = 0;
    return ep;
  }

  std::optional<double> running_average_return() const {
    if (returns_.empty()) return std::nullopt;
    double sum = 0.0;
    for (double r : returns_) sum += r;
    return sum / static_cast<double>(returns_.size());
  }

  std::optional<double> running_average_length() const {
    if (lengths_.empty()) return std::nullopt;
    double sum = 0.0;
    for (auto l : lengths_) sum += static_cast<double>(l);
    return sum / static_cast<double>(lengths_.size());
  }

  const std::deque<double>& returns() const { return returns_; }
  std::uint64_t total_steps() const { return total_steps_; }
  std::size_t completed_episodes() const { return completed_; }

 private:
  void push(const CompletedEpisode& ep) {
    completed_ += 1;
    returns_.push_back(ep.episode_return);
    lengths_.push_back(ep.episode_length);
    while (returns_.size() > window_) returns_.pop_front();
    while (lengths_.size() > window_) lengths_.pop_front();
  }

  std::size_t window_;
  std::deque<double> returns_;
  std::deque<std::int64_t> lengths_;
  std::vector<double> acc_return_;
  std::vector<std::int64_t> acc_length_;
  std::uint64_t total_steps_ = 0;
  std::size_t completed_ = 0;
};

}  // namespace rlx

#endif  // RLX_EPISODE_STATS_HPP_
