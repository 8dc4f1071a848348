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

#ifndef RLX_TRAIN_HPP_
#define RLX_TRAIN_HPP_

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>

#include "rlx/episode_stats.hpp"
#include "rlx/ppo.hpp"
#include "rlx/sac.hpp"
#include "rlx/vec_env.hpp"

namespace rlx {

// Output channels of a training run. `metric` rows are deterministic
// functions of seed and config; `timing` rows carry wall-clock quantities
// (steps/sec) and are kept separate so deterministic logs stay bit-stable.
struct TrainSinks {
  std::function<void(std::uint64_t step, const std::string& name,
                     double value)>
      metric;
  std::function<void(std::uint64_t step, const std::string& name,
                     double value)>
      timing;
  std::function<void(std::uint64_t step, const CompletedEpisode&)> episode;
  std::function<void(std::uint64_t step)> progress;  // checkpoint cadence
};

struct TrainResult {
  std::uint64_t steps = 0;
  std::uint64_t updates = 0;  // gradient updates (SAC: one per step past warmup)
  double seconds = 0.0;       // training loop only, setup excluded
};

struct TrainSeeds {
  std::uint64_t env_base = 0;
  std::uint64_t network_init = 0;
  std::uint64_t shuffle = 0;
  std::uint64_t action_noise = 0;
  std::uint64_t warmup = 0;
  std::uint64_t replay = 0;
  std::uint64_t eval = 0;

  static TrainSeeds from_master(std::uint64_t master) {
    TrainSeeds s;
    s.env_base = derive_seed(master, SeedStream::kEnvBase);
    s.network_init = derive_seed(master, SeedStream::kNetworkInit);
    s.shuffle = derive_seed(master, SeedStream::kShuffle);
    s.action_noise = derive_seed(master, SeedStream::kActionNoise);
    s.warmup = derive_seed(master, SeedStream::kWarmup);
    s.replay = derive_seed(master, SeedStream::kReplay);
    s.eval = derive_seed(master, SeedStream::kEval);
    return s;
  }
};

// On-policy training: repeat collect -> GAE -> clipped-surrogate update
// until at least total_steps environment steps have been taken (the loop
// completes whole iterations of nr_steps * nr_envs).
inline TrainResult train_ppo(PpoAgent<float>& agent, const PpoConfig& cfg,
                             VecEnv& env, std::uint64_t total_steps,
                             const TrainSeeds& seeds, TrainSinks& sinks) {
  cfg.validate();
  EpisodeStats stats(env.nr_envs());
  RolloutBuffer<float> buffer(cfg.nr_steps, cfg.nr_envs, env.obs_dim(),
                              agent.discrete ? 1 : agent.action_dim);
  Rng action_rng(seeds.action_noise);
  Rng shuffle_rng(seeds.shuffle);

  std::vector<float> current_obs = env.reset();
  TrainResult result;
  const auto t0 = std::chrono::steady_clock::now();
  auto now_seconds = [&t0] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0)
        .count();
  };

  std::uint64_t steps = 0;
  while (steps < total_steps) {
    const double iter_t0 = now_seconds();
    buffer.clear();
    collect_rollout<float>(
        agent, cfg, env, buffer, action_rng, current_obs, stats,
        [&](const CompletedEpisode& ep) {
          // stats counts every sub-env record, i.e. global env steps
          if (sinks.episode) sinks.episode(stats.total_steps(), ep);
        });
    compute_gae<float>(buffer.rewards, buffer.values, buffer.bootstrap_values,
                       buffer.terminated, buffer.truncated,
                       static_cast<int>(cfg.nr_steps),
                       static_cast<int>(cfg.nr_envs), cfg.gamma,
                       cfg.gae_lambda, &buffer.advantages, &buffer.returns);
    PpoUpdateMetrics m = ppo_update(agent, buffer, cfg, shuffle_rng);
    steps += static_cast<std::uint64_t>(cfg.batch_size());

    if (sinks.metric) {
      if (auto avg = stats.running_average_return())
        sinks.metric(steps, "episode_return_avg100", *avg);
      if (auto len = stats.running_average_length())
        sinks.metric(steps, "episode_length_avg100", *len);
      sinks.metric(steps, "policy_loss", m.policy_loss);
      sinks.metric(steps, "value_loss", m.value_loss);
      sinks.metric(steps, "entropy", m.entropy);
      sinks.metric(steps, "clip_fraction", m.clip_fraction);
      sinks.metric(steps, "approx_kl", m.approx_kl);
    }
    if (sinks.timing) {
      const double dt = now_seconds() - iter_t0;
      if (dt > 0)
        sinks.timing(steps, "steps_per_second",
                     static_cast<double>(cfg.batch_size()) / dt);
    }
    if (sinks.progress) sinks.progress(steps);
  }
  result.steps = steps;
  result.seconds = now_seconds();
  return result;
}

// Off-policy training: act, store, and after the warmup gate run exactly one
// gradient update (critic, actor, alpha, Polyak) per environment step.
inline TrainResult train_sac(SacAgent<float>& agent, const SacConfig& cfg,
                             Env& env, std::uint64_t total_steps,
                             const TrainSeeds& seeds, TrainSinks& sinks,
                             std::uint64_t log_interval = 1000) {
  cfg.validate();
  const Space& box = env.action_space();
  if (box.kind != Space::Kind::kContinuousBox)
    throw ConfigError("sac requires a continuous action space");
  const auto act_dim = agent.action_dim;
  const double target_entropy = cfg.target_entropy(act_dim);

  ReplayBuffer<float> buffer(cfg.buffer_size, agent.obs_dim, act_dim);
  EpisodeStats stats(1);
  Rng warmup_rng(seeds.warmup);
  Rng noise_rng(seeds.action_noise);
  Rng replay_rng(seeds.replay);

  ParamSet<float> critic_grads = agent.critic_params.zeros_like();
  ParamSet<float> actor_grads = agent.actor_params.zeros_like();
  ParamSet<float> alpha_grads = agent.alpha_params.zeros_like();

  std::vector<float> obs = env.reset(seeds.env_base);
  double window_critic = 0, window_actor = 0, window_alpha = 0;
  std::uint64_t window_updates = 0;

  TrainResult result;
  const auto t0 = std::chrono::steady_clock::now();
  auto now_seconds = [&t0] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0)
        .count();
  };
  double window_t0 = 0.0;
  std::uint64_t window_start_step = 0;

  for (std::uint64_t step = 1; step <= total_steps; ++step) {
    // act
    std::vector<float> unit_action(static_cast<std::size_t>(act_dim));
    if (step <= static_cast<std::uint64_t>(cfg.learning_starts)) {
      std::vector<float> env_action(static_cast<std::size_t>(act_dim));
      for (std::size_t i = 0; i < env_action.size(); ++i)
        env_action[i] = static_cast<float>(
            warmup_rng.uniform(box.low[i], box.high[i]));
      unit_action = scale_from_box(env_action, box);
    } else {
      MatX<float> o(1, agent.obs_dim);
      for (Eigen::Index d = 0; d < agent.obs_dim; ++d)
        o(0, d) = obs[static_cast<std::size_t>(d)];
      const auto out = agent.actor_forward(agent.actor_params, o);
      MatX<float> noise(1, act_dim);
      for (Eigen::Index d = 0; d < act_dim; ++d)
        noise(0, d) = static_cast<float>(noise_rng.normal());
      const auto sample = squashed_batch(out.mean, out.log_std, noise);
      for (Eigen::Index d = 0; d < act_dim; ++d)
        unit_action[static_cast<std::size_t>(d)] = sample.action(0, d);
    }
    const std::vector<float> env_action = scale_to_box(unit_action, box);
    StepResult r = env.step(env_action);

    // store; a truncated end keeps terminated=false so the target still
    // bootstraps through it
    buffer.insert(obs, std::span<const float>(unit_action), r.reward,
                  r.observation, r.terminated);
    auto ep = stats.record(0, r);
    if (ep && sinks.episode) sinks.episode(step, *ep);
    obs = r.done() ? env.reset(std::nullopt) : r.observation;

    // learn
    if (step > static_cast<std::uint64_t>(cfg.learning_starts)) {
      auto batch = buffer.sample(cfg.batch_size, replay_rng);

      MatX<float> next_noise(cfg.batch_size, act_dim);
      for (Eigen::Index j = 0; j < cfg.batch_size; ++j)
        for (Eigen::Index d = 0; d < act_dim; ++d)
          next_noise(j, d) = static_cast<float>(noise_rng.normal());
      const VecX<float> y =
          critic_target(agent, batch, next_noise, cfg.gamma, agent.alpha());

      for (auto& e : critic_grads.entries)
        std::fill(e.values.begin(), e.values.end(), 0.0f);
      auto cstats = critic_loss_and_grad(agent, batch, y, critic_grads);
      adam_step(agent.critic_params, critic_grads, agent.critic_opt,
                cfg.learning_rate);

      MatX<float> actor_noise(cfg.batch_size, act_dim);
      for (Eigen::Index j = 0; j < cfg.batch_size; ++j)
        for (Eigen::Index d = 0; d < act_dim; ++d)
          actor_noise(j, d) = static_cast<float>(noise_rng.normal());
      for (auto& e : actor_grads.entries)
        std::fill(e.values.begin(), e.values.end(), 0.0f);
      auto astats = actor_and_alpha_loss_and_grad(
          agent, batch.obs, actor_noise, target_entropy, actor_grads,
          alpha_grads);
      adam_step(agent.actor_params, actor_grads, agent.actor_opt,
                cfg.learning_rate);
      adam_step(agent.alpha_params, alpha_grads, agent.alpha_opt,
                cfg.learning_rate);

      polyak_update(agent.target_params, agent.critic_params, cfg.tau);

      window_critic += static_cast<double>(cstats.loss);
      window_actor += static_cast<double>(astats.actor_loss);
      window_alpha += static_cast<double>(astats.alpha_loss);
      ++window_updates;
      ++result.updates;
    }

    if (step % log_interval == 0 || step == total_steps) {
      if (sinks.metric) {
        if (auto avg = stats.running_average_return())
          sinks.metric(step, "episode_return_avg100", *avg);
        if (window_updates > 0) {
          const double inv = 1.0 / static_cast<double>(window_updates);
          sinks.metric(step, "critic_loss", window_critic * inv);
          sinks.metric(step, "actor_loss", window_actor * inv);
          sinks.metric(step, "alpha_loss", window_alpha * inv);
          sinks.metric(step, "alpha", static_cast<double>(agent.alpha()));
        }
      }
      if (sinks.timing) {
        const double now = now_seconds();
        if (now > window_t0)
          sinks.timing(step, "steps_per_second",
                       static_cast<double>(step - window_start_step) /
                           (now - window_t0));
        window_t0 = now;
        window_start_step = step;
      }
      window_critic = window_actor = window_alpha = 0;
      window_updates = 0;
      if (sinks.progress) sinks.progress(step);
    }
  }
  result.steps = total_steps;
  result.seconds = now_seconds();
  return result;
}

}  // namespace rlx

#endif  // RLX_TRAIN_HPP_
