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

#include <gtest/gtest.h>

#include <memory>
#include <vector>

#include "rlx/compat.hpp"
#include "rlx/envs/bandit.hpp"
#include "rlx/envs/pendulum.hpp"
#include "rlx/envs/run_task.hpp"
#include "rlx/episode_stats.hpp"
#include "rlx/rng.hpp"
#include "rlx/space.hpp"
#include "rlx/vec_env.hpp"

namespace {

using rlx::EpisodeStats;
using rlx::Space;
using rlx::StepResult;

TEST(Space, BoxValidatesBounds) {
  EXPECT_THROW(Space::box({0.0f}, {0.0f}), rlx::ConfigError);
  EXPECT_THROW(Space::box({1.0f}, {0.0f}), rlx::ConfigError);
  auto s = Space::box({-1.0f, 0.0f}, {1.0f, 2.0f});
  EXPECT_EQ(s.flat_dim(), 2);
  EXPECT_TRUE(s.contains({0.0f, 1.0f}));
  EXPECT_FALSE(s.contains({0.0f, 3.0f}));
}

TEST(Space, DiscreteValidatesCount) {
  EXPECT_THROW(Space::discrete(0), rlx::ConfigError);
  auto s = Space::discrete(3);
  EXPECT_TRUE(s.contains({2.0f}));
  EXPECT_FALSE(s.contains({3.0f}));
  EXPECT_FALSE(s.contains({0.5f}));
}

TEST(EpisodeStats, MeanOfCompletedEpisodes) {
  EpisodeStats stats(1);
  StepResult r;
  for (double ret : {1.0, 2.0, 3.0}) {
    r.reward = ret;
    r.terminated = true;
    stats.record(0, r);
  }
  ASSERT_TRUE(stats.running_average_return().has_value());
  EXPECT_DOUBLE_EQ(*stats.running_average_return(), 2.0);
}

// FIFO eviction: 101 zero-return episodes followed by one of return 101
// leaves an average of (99*0 + 101)/100 over the last hundred.
TEST(EpisodeStats, EvictsBeyondWindow) {
  EpisodeStats stats(1);
  StepResult r;
  r.terminated = true;
  for (int i = 0; i < 101; ++i) {
    r.reward = 0.0;
    stats.record(0, r);
  }
  r.reward = 101.0;
  stats.record(0, r);
  EXPECT_DOUBLE_EQ(*stats.running_average_return(), 1.01);
}

TEST(EpisodeStats, AbsentBeforeFirstCompletion) {
  EpisodeStats stats(2);
  StepResult r;
  r.reward = 5.0;
  stats.record(0, r);
  stats.record(1, r);
  EXPECT_FALSE(stats.running_average_return().has_value());
  EXPECT_EQ(stats.total_steps(), 2u);
}

TEST(EpisodeStats, MultiEnvAccumulatorsAreIndependent) {
  EpisodeStats stats(2);
  StepResult r;
  r.reward = 1.0;
  stats.record(0, r);  // env0 running: 1
  stats.record(1, r);  // env1 running: 1
  r.reward = 2.0;
  r.terminated = true;
  auto ep = stats.record(0, r);  // env0 completes with 3
  ASSERT_TRUE(ep.has_value());
  EXPECT_DOUBLE_EQ(ep->episode_return, 3.0);
  EXPECT_EQ(ep->episode_length, 2);
  EXPECT_DOUBLE_EQ(*stats.running_average_return(), 3.0);
}

TEST(Compat, SacRejectsDiscreteActions) {
  rlx::AlgoCaps sac{"sac", {Space::Kind::kContinuousBox}};
  rlx::BanditEnv bandit;
  auto res = rlx::check_compatibility(sac, bandit.action_space(),
                                      bandit.observation_space());
  EXPECT_FALSE(res.ok);
  EXPECT_NE(res.report.find("action space: discrete unsupported"),
            std::string::npos);
}

TEST(Compat, PpoAcceptsRunTaskAndBandit) {
  rlx::AlgoCaps ppo{
      "ppo", {Space::Kind::kContinuousBox, Space::Kind::kDiscrete}};
  rlx::RunTaskEnv rt;
  EXPECT_TRUE(rlx::check_compatibility(ppo, rt.action_space(),
                                       rt.observation_space())
                  .ok);
  rlx::BanditEnv bandit;
  EXPECT_TRUE(rlx::check_compatibility(ppo, bandit.action_space(),
                                       bandit.observation_space())
                  .ok);
}

TEST(VecEnv, SingleEnvMatchesRawPlusAutoreset) {
  auto vec = rlx::vectorize([] { return std::make_unique<rlx::RunTaskEnv>(); },
                            1, 7);
  rlx::RunTaskEnv raw;
  auto vobs = vec->reset();
  auto robs = raw.reset(7);
  EXPECT_EQ(vobs, robs);

  const float act[1] = {1.0f};
  for (int t = 0; t < 200; ++t) {
    auto vr = vec->step(act);
    auto rr = raw.step(act);
    EXPECT_EQ(vr.rewards[0], rr.reward);
    EXPECT_EQ(vr.terminated[0] != 0, rr.terminated);
    EXPECT_EQ(vr.truncated[0] != 0, rr.truncated);
    if (rr.done()) {
      ASSERT_TRUE(vr.final_observations[0].has_value());
      EXPECT_EQ(*vr.final_observations[0], rr.observation);
      auto fresh = raw.reset(std::nullopt);
      EXPECT_EQ(vr.observations, fresh);
    } else {
      EXPECT_EQ(vr.observations, rr.observation);
      EXPECT_FALSE(vr.final_observations[0].has_value());
    }
  }
}

// Oracle: run the same seeded envs manually without vectorization and check
// the batch is assembled from them in index order, autoreset included.
TEST(VecEnv, MatchesManualEnvsUnderMixedEpisodeEnds) {
  const int n = 3;
  auto vec = rlx::vectorize(
      [] { return std::make_unique<rlx::PendulumEnv>(); }, n, 100);
  std::vector<std::unique_ptr<rlx::PendulumEnv>> manual;
  for (int i = 0; i < n; ++i) {
    manual.push_back(std::make_unique<rlx::PendulumEnv>());
    manual[static_cast<std::size_t>(i)]->reset(100 + static_cast<std::uint64_t>(i));
  }
  vec->reset();

  rlx::Rng act_rng(55);
  std::vector<float> actions(n);
  for (int t = 0; t < 450; ++t) {
    for (auto& a : actions) a = static_cast<float>(act_rng.uniform(-2, 2));
    auto vr = vec->step(actions);
    for (int i = 0; i < n; ++i) {
      auto& env = *manual[static_cast<std::size_t>(i)];
      auto rr = env.step(std::span<const float>(&actions[static_cast<std::size_t>(i)], 1));
      ASSERT_EQ(vr.rewards[static_cast<std::size_t>(i)], rr.reward);
      std::vector<float> batch_obs(
          vr.observations.begin() + i * 3,
          vr.observations.begin() + (i + 1) * 3);
      if (rr.done()) {
        ASSERT_TRUE(vr.final_observations[static_cast<std::size_t>(i)].has_value());
        ASSERT_EQ(*vr.final_observations[static_cast<std::size_t>(i)], rr.observation);
        auto fresh = env.reset(std::nullopt);
        ASSERT_EQ(batch_obs, fresh);
      } else {
        ASSERT_EQ(batch_obs, rr.observation);
      }
    }
  }
}

TEST(VecEnv, BitDeterministicAcrossRuns) {
  auto run_once = [] {
    auto vec = rlx::vectorize(
        [] { return std::make_unique<rlx::PendulumEnv>(); }, 2, 9);
    std::vector<float> trace = vec->reset();
    rlx::Rng rng(1);
    std::vector<float> actions(2);
    for (int t = 0; t < 300; ++t) {
      for (auto& a : actions) a = static_cast<float>(rng.uniform(-2, 2));
      auto r = vec->step(actions);
      trace.insert(trace.end(), r.observations.begin(), r.observations.end());
      for (double rew : r.rewards) trace.push_back(static_cast<float>(rew));
    }
    return trace;
  };
  EXPECT_EQ(run_once(), run_once());
}

TEST(VecEnv, EveryObservationInsideDeclaredSpace) {
  auto vec = rlx::vectorize(
      [] { return std::make_unique<rlx::PendulumEnv>(); }, 2, 77);
  const auto& space = vec->observation_space();
  auto obs = vec->reset();
  rlx::Rng rng(2);
  std::vector<float> actions(2);
  for (int t = 0; t < 500; ++t) {
    for (int i = 0; i < 2; ++i) {
      std::vector<float> one(obs.begin() + i * 3, obs.begin() + (i + 1) * 3);
      ASSERT_TRUE(space.contains(one));
    }
    for (auto& a : actions) a = static_cast<float>(rng.uniform(-2, 2));
    obs = vec->step(actions).observations;
  }
}

}  // namespace
