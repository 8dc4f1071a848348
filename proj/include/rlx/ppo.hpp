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

#ifndef RLX_PPO_HPP_
#define RLX_PPO_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rlx/adam.hpp"
#include "rlx/episode_stats.hpp"
#include "rlx/error.hpp"
#include "rlx/gae.hpp"
#include "rlx/gaussian.hpp"
#include "rlx/mlp.hpp"
#include "rlx/rng.hpp"
#include "rlx/space.hpp"
#include "rlx/vec_env.hpp"

namespace rlx {

struct PpoConfig {
  double clip_range = 0.2;
  double critic_coef = 0.5;
  double entropy_coef = 0.0;
  double gae_lambda = 0.95;
  double max_grad_norm = 0.5;
  std::int64_t minibatch_size = 1536;
  std::int64_t nr_epochs = 10;
  std::int64_t nr_steps = 2048;
  double std_dev = 0.3;
  double gamma = 0.99;
  double learning_rate = 0.0003;
  bool anneal_learning_rate = false;
  std::int64_t nr_hidden_units = 64;
  std::int64_t nr_envs = 24;

  std::int64_t batch_size() const { return nr_steps * nr_envs; }
  std::int64_t nr_minibatches() const { return batch_size() / minibatch_size; }

  void validate() const {
    if (nr_steps < 1 || nr_envs < 1 || minibatch_size < 1 || nr_epochs < 1 ||
        nr_hidden_units < 1)
      throw ConfigError("ppo: sizes must be positive");
    if (!(clip_range > 0) || !(std_dev > 0) || !(learning_rate > 0) ||
        !(max_grad_norm > 0))
      throw ConfigError("ppo: rates must be positive");
    if (gamma <= 0 || gamma > 1 || gae_lambda < 0 || gae_lambda > 1)
      throw ConfigError("ppo: gamma/gae_lambda out of range");
    if (batch_size() % minibatch_size != 0)
      throw ConfigError("ppo: minibatch_size " +
                        std::to_string(minibatch_size) +
                        " does not divide nr_steps*nr_envs = " +
                        std::to_string(batch_size()));
    if (anneal_learning_rate)
      throw ConfigError("ppo: anneal_learning_rate is not supported");
  }
};

// Fixed-horizon on-policy storage for one iteration across nr_envs parallel
// environments. Flat sample index is t * nr_envs + i. bootstrap_values[p]
// holds the value of the state that followed sample p (the next batch row,
// or the final observation where an episode ended).
template <typename S>
struct RolloutBuffer {
  std::int64_t nr_steps = 0;
  std::int64_t nr_envs = 0;
  MatX<S> observations;  // [T*N, obs_dim]
  MatX<S> actions;       // [T*N, act_dim]; discrete arm index in column 0
  std::vector<S> log_probs;
  std::vector<S> rewards;
  std::vector<std::uint8_t> terminated;
  std::vector<std::uint8_t> truncated;
  std::vector<S> values;
  std::vector<S> bootstrap_values;
  std::vector<S> advantages;
  std::vector<S> returns;
  std::int64_t filled = 0;

  RolloutBuffer(std::int64_t steps, std::int64_t envs, std::int64_t obs_dim,
                std::int64_t act_dim)
      : nr_steps(steps), nr_envs(envs) {
    const auto total = steps * envs;
    observations.resize(total, obs_dim);
    actions.resize(total, act_dim);
    log_probs.resize(static_cast<std::size_t>(total));
    rewards.resize(static_cast<std::size_t>(total));
    terminated.resize(static_cast<std::size_t>(total));
    truncated.resize(static_cast<std::size_t>(total));
    values.resize(static_cast<std::size_t>(total));
    bootstrap_values.resize(static_cast<std::size_t>(total));
  }

  std::int64_t capacity() const { return nr_steps * nr_envs; }
  void clear() { filled = 0; }
};

// Actor-critic parameter bundle. Policy and value networks live in one
// ParamSet ("policy.*", "value.*") driven by a single Adam state, so the
// global-norm clip spans both, mirroring a joint optimizer.
template <typename S>
struct PpoAgent {
  MlpShape policy_shape;
  MlpShape value_shape;
  ParamSet<S> params;
  AdamState<S> opt;
  bool discrete = false;
  std::int64_t action_dim = 0;  // box dimension, or arm count for discrete
  S log_std = S(0);             // constant, state-independent (box policies)

  static PpoAgent make(const Space& observation_space,
                       const Space& action_space, const PpoConfig& cfg,
                       std::uint64_t init_seed) {
    PpoAgent agent;
    const auto obs_dim = observation_space.flat_dim();
    agent.discrete = action_space.kind == Space::Kind::kDiscrete;
    agent.action_dim =
        agent.discrete ? action_space.n
                       : static_cast<std::int64_t>(action_space.low.size());
    agent.log_std = static_cast<S>(std::log(cfg.std_dev));
    const auto h = cfg.nr_hidden_units;
    agent.policy_shape =
        MlpShape{{obs_dim, h, h, agent.action_dim}, Activation::kTanh,
                 "policy."};
    agent.value_shape =
        MlpShape{{obs_dim, h, h, 1}, Activation::kTanh, "value."};
    Rng rng(init_seed);
    add_mlp_params(agent.params, agent.policy_shape, rng, 0.01);
    add_mlp_params(agent.params, agent.value_shape, rng, 1.0);
    agent.opt = AdamState<S>::init(agent.params);
    return agent;
  }

  // Mean actions (box) or logits (discrete).
  MatX<S> policy_forward(const MatX<S>& obs) const {
    return mlp_forward(policy_shape, params, obs);
  }

  VecX<S> value_forward(const MatX<S>& obs) const {
    return mlp_forward(value_shape, params, obs).col(0);
  }
};

template <typename S>
struct PpoMinibatch {
  MatX<S> observations;
  MatX<S> actions;
  VecX<S> old_log_probs;
  VecX<S> advantages;  // already normalized by the caller
  VecX<S> returns;
};

template <typename S>
struct PpoLossOutput {
  S loss = S(0);
  S policy_loss = S(0);
  S value_loss = S(0);
  S entropy = S(0);
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
};

namespace ppo_detail {

template <typename S>
VecX<S> row_log_probs(const PpoAgent<S>& agent, const MatX<S>& outputs,
                      const MatX<S>& actions) {
  const auto m = outputs.rows();
  VecX<S> lp(m);
  if (agent.discrete) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto arm = static_cast<Eigen::Index>(actions(j, 0));
      const S mx = outputs.row(j).maxCoeff();
      const S lse =
          mx + std::log((outputs.row(j).array() - mx).exp().sum());
      lp[j] = outputs(j, arm) - lse;
    }
  } else {
    const S sigma = std::exp(agent.log_std);
    const S per_dim_const = agent.log_std + S(0.5) * S(kLog2Pi);
    for (Eigen::Index j = 0; j < m; ++j) {
      S acc = S(0);
      for (Eigen::Index i = 0; i < outputs.cols(); ++i) {
        const S z = (actions(j, i) - outputs(j, i)) / sigma;
        acc += S(-0.5) * z * z - per_dim_const;
      }
      lp[j] = acc;
    }
  }
  return lp;
}

}  // namespace ppo_detail

// Clipped-surrogate PPO loss on one minibatch:
//   L = -mean(min(rho*A, clip(rho, 1-eps, 1+eps)*A))
//       + critic_coef * mean((V - return)^2) - entropy_coef * entropy
// with rho = exp(new_log_prob - old_log_prob). Advantages arrive already
// normalized. Diagnostics: clip fraction (|rho-1| > eps) and approximate KL
// mean(old - new).
template <typename S>
PpoLossOutput<S> ppo_loss(const PpoAgent<S>& agent,
                          const PpoMinibatch<S>& mb, const PpoConfig& cfg) {
  const auto m = mb.observations.rows();
  const MatX<S> outputs = agent.policy_forward(mb.observations);
  const VecX<S> new_lp =
      ppo_detail::row_log_probs(agent, outputs, mb.actions);
  const VecX<S> v = agent.value_forward(mb.observations);

  const S eps = static_cast<S>(cfg.clip_range);
  PpoLossOutput<S> out;
  S policy_obj = S(0);
  S value_acc = S(0);
  S entropy_acc = S(0);
  int clipped = 0;
  double kl_acc = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const S rho = std::exp(new_lp[j] - mb.old_log_probs[j]);
    const S a = mb.advantages[j];
    const S surr1 = rho * a;
    const S surr2 = std::clamp(rho, S(1) - eps, S(1) + eps) * a;
    policy_obj += std::min(surr1, surr2);
    if (std::abs(rho - S(1)) > eps) ++clipped;
    kl_acc += static_cast<double>(mb.old_log_probs[j] - new_lp[j]);
    const S verr = v[j] - mb.returns[j];
    value_acc += verr * verr;

    if (agent.discrete) {
      const S mx = outputs.row(j).maxCoeff();
      const auto shifted = (outputs.row(j).array() - mx).eval();
      const S lse = mx + std::log(shifted.exp().sum());
      S h = S(0);
      for (Eigen::Index k = 0; k < outputs.cols(); ++k) {
        const S lpk = outputs(j, k) - lse;
        h -= std::exp(lpk) * lpk;
      }
      entropy_acc += h;
    }
  }
  if (!agent.discrete) {
    // state-independent constant std: entropy is the same for every sample
    VecX<S> ls = VecX<S>::Constant(agent.action_dim, agent.log_std);
    entropy_acc = static_cast<S>(m) * gaussian_entropy(ls);
  }

  out.policy_loss = -policy_obj / static_cast<S>(m);
  out.value_loss = value_acc / static_cast<S>(m);
  out.entropy = entropy_acc / static_cast<S>(m);
  out.clip_fraction = static_cast<double>(clipped) / static_cast<double>(m);
  out.approx_kl = kl_acc / static_cast<double>(m);
  out.loss = out.policy_loss + static_cast<S>(cfg.critic_coef) * out.value_loss -
             static_cast<S>(cfg.entropy_coef) * out.entropy;
  return out;
}

// Loss plus analytic gradients, accumulated into `grads` (congruent with
// agent.params). Throws NumericError with diagnostics when the loss is not
// finite.
template <typename S>
PpoLossOutput<S> ppo_loss_and_grad(const PpoAgent<S>& agent,
                                   const PpoMinibatch<S>& mb,
                                   const PpoConfig& cfg, ParamSet<S>& grads) {
  const auto m = mb.observations.rows();
  const MatX<S> outputs = agent.policy_forward(mb.observations);
  const VecX<S> new_lp =
      ppo_detail::row_log_probs(agent, outputs, mb.actions);
  const VecX<S> v = agent.value_forward(mb.observations);

  const S eps = static_cast<S>(cfg.clip_range);
  const S inv_m = S(1) / static_cast<S>(m);

  // d loss / d new_log_prob: -(1/m) * rho * A on the unclipped branch, 0 on
  // the clipped one.
  VecX<S> dlp(m);
  PpoLossOutput<S> out;
  S policy_obj = S(0);
  S value_acc = S(0);
  int clipped = 0;
  double kl_acc = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const S rho = std::exp(new_lp[j] - mb.old_log_probs[j]);
    const S a = mb.advantages[j];
    const S surr1 = rho * a;
    const S surr2 = std::clamp(rho, S(1) - eps, S(1) + eps) * a;
    policy_obj += std::min(surr1, surr2);
    dlp[j] = (surr1 <= surr2) ? -inv_m * rho * a : S(0);
    if (std::abs(rho - S(1)) > eps) ++clipped;
    kl_acc += static_cast<double>(mb.old_log_probs[j] - new_lp[j]);
    const S verr = v[j] - mb.returns[j];
    value_acc += verr * verr;
  }

  // policy head upstream
  MatX<S> upstream_policy(m, outputs.cols());
  S entropy_acc = S(0);
  if (agent.discrete) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const S mx = outputs.row(j).maxCoeff();
      const auto shifted = (outputs.row(j).array() - mx).eval();
      const S lse = mx + std::log(shifted.exp().sum());
      const auto arm = static_cast<Eigen::Index>(mb.actions(j, 0));
      S h = S(0);
      for (Eigen::Index k = 0; k < outputs.cols(); ++k) {
        const S p = std::exp(outputs(j, k) - lse);
        const S lpk = outputs(j, k) - lse;
        h -= p * lpk;
        upstream_policy(j, k) = dlp[j] * ((k == arm ? S(1) : S(0)) - p);
      }
      entropy_acc += h;
      if (cfg.entropy_coef != 0.0) {
        // d(-coef * mean(H)) / d logits_k = coef/m * p_k (log p_k + H)
        for (Eigen::Index k = 0; k < outputs.cols(); ++k) {
          const S p = std::exp(outputs(j, k) - lse);
          const S lpk = outputs(j, k) - lse;
          upstream_policy(j, k) +=
              static_cast<S>(cfg.entropy_coef) * inv_m * p * (lpk + h);
        }
      }
    }
  } else {
    const S sigma = std::exp(agent.log_std);
    const S inv_var = S(1) / (sigma * sigma);
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index i = 0; i < outputs.cols(); ++i)
        upstream_policy(j, i) =
            dlp[j] * (mb.actions(j, i) - outputs(j, i)) * inv_var;
    VecX<S> ls = VecX<S>::Constant(agent.action_dim, agent.log_std);
    entropy_acc = static_cast<S>(m) * gaussian_entropy(ls);
  }

  // value head upstream: critic_coef * 2 (V - ret) / m
  MatX<S> upstream_value(m, 1);
  for (Eigen::Index j = 0; j < m; ++j)
    upstream_value(j, 0) =
        static_cast<S>(cfg.critic_coef) * S(2) * (v[j] - mb.returns[j]) * inv_m;

  mlp_backward(agent.policy_shape, agent.params, mb.observations,
               upstream_policy, grads);
  mlp_backward(agent.value_shape, agent.params, mb.observations,
               upstream_value, grads);

  out.policy_loss = -policy_obj * inv_m;
  out.value_loss = value_acc * inv_m;
  out.entropy = entropy_acc * inv_m;
  out.clip_fraction = static_cast<double>(clipped) / static_cast<double>(m);
  out.approx_kl = kl_acc / static_cast<double>(m);
  out.loss = out.policy_loss + static_cast<S>(cfg.critic_coef) * out.value_loss -
             static_cast<S>(cfg.entropy_coef) * out.entropy;
  if (!std::isfinite(static_cast<double>(out.loss)))
    throw NumericError(
        "ppo: non-finite loss (policy_loss=" +
        std::to_string(static_cast<double>(out.policy_loss)) +
        " value_loss=" + std::to_string(static_cast<double>(out.value_loss)) +
        " approx_kl=" + std::to_string(out.approx_kl) + ")");
  return out;
}

// Normalizes a minibatch advantage vector to mean 0, std 1 (sample std,
// epsilon-guarded). Degenerate single-sample batches pass through centered.
template <typename S>
void normalize_advantages(VecX<S>& adv) {
  const auto n = adv.size();
  const S mean = adv.mean();
  if (n < 2) {
    adv.array() -= mean;
    return;
  }
  const S var = (adv.array() - mean).square().sum() / static_cast<S>(n - 1);
  const S std = std::sqrt(var);
  adv = ((adv.array() - mean) / (std + S(1e-8))).matrix();
}

struct PpoUpdateMetrics {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  double max_post_clip_grad_norm = 0.0;
};

// One PPO update phase: nr_epochs passes over the buffer in shuffled
// minibatches; per minibatch advantages are normalized, gradients clipped to
// max_grad_norm by global norm, then one Adam step. Shuffling draws only
// from `shuffle_rng`, so updates are reproducible.
template <typename S>
PpoUpdateMetrics ppo_update(PpoAgent<S>& agent, const RolloutBuffer<S>& buffer,
                            const PpoConfig& cfg, Rng& shuffle_rng) {
  const std::int64_t total = cfg.batch_size();
  if (buffer.filled != total)
    throw UsageError("ppo_update: buffer not full");
  const std::int64_t mb_size = cfg.minibatch_size;
  const std::int64_t nr_mb = cfg.nr_minibatches();

  std::vector<std::int64_t> order(static_cast<std::size_t>(total));
  for (std::int64_t i = 0; i < total; ++i)
    order[static_cast<std::size_t>(i)] = i;

  PpoUpdateMetrics metrics;
  std::int64_t updates = 0;
  ParamSet<S> grads = agent.params.zeros_like();
  for (std::int64_t epoch = 0; epoch < cfg.nr_epochs; ++epoch) {
    // Fisher-Yates with the dedicated stream
    for (std::int64_t i = total - 1; i > 0; --i) {
      const auto j = static_cast<std::int64_t>(
          shuffle_rng.bounded(static_cast<std::uint64_t>(i + 1)));
      std::swap(order[static_cast<std::size_t>(i)],
                order[static_cast<std::size_t>(j)]);
    }
    for (std::int64_t mb = 0; mb < nr_mb; ++mb) {
      PpoMinibatch<S> batch;
      batch.observations.resize(mb_size, buffer.observations.cols());
      batch.actions.resize(mb_size, buffer.actions.cols());
      batch.old_log_probs.resize(mb_size);
      batch.advantages.resize(mb_size);
      batch.returns.resize(mb_size);
      for (std::int64_t r = 0; r < mb_size; ++r) {
        const auto src = order[static_cast<std::size_t>(mb * mb_size + r)];
        batch.observations.row(r) = buffer.observations.row(src);
        batch.actions.row(r) = buffer.actions.row(src);
        batch.old_log_probs[r] = buffer.log_probs[static_cast<std::size_t>(src)];
        batch.advantages[r] = buffer.advantages[static_cast<std::size_t>(src)];
        batch.returns[r] = buffer.returns[static_cast<std::size_t>(src)];
      }
      normalize_advantages(batch.advantages);

      for (auto& e : grads.entries) std::fill(e.values.begin(), e.values.end(), S(0));
      PpoLossOutput<S> out;
      try {
        out = ppo_loss_and_grad(agent, batch, cfg, grads);
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " [epoch " +
                           std::to_string(epoch) + ", minibatch " +
                           std::to_string(mb) + "]");
      }
      clip_global_grad_norm(grads, cfg.max_grad_norm);
      metrics.max_post_clip_grad_norm =
          std::max(metrics.max_post_clip_grad_norm, global_norm(grads));
      adam_step(agent.params, grads, agent.opt, cfg.learning_rate);

      metrics.policy_loss += static_cast<double>(out.policy_loss);
      metrics.value_loss += static_cast<double>(out.value_loss);
      metrics.entropy += static_cast<double>(out.entropy);
      metrics.clip_fraction += out.clip_fraction;
      metrics.approx_kl += out.approx_kl;
      ++updates;
    }
  }
  const double inv = 1.0 / static_cast<double>(updates);
  metrics.policy_loss *= inv;
  metrics.value_loss *= inv;
  metrics.entropy *= inv;
  metrics.clip_fraction *= inv;
  metrics.approx_kl *= inv;
  return metrics;
}

// Sampler used during collection; also the deterministic policy for test
// mode (mean action / argmax arm).
template <typename S>
struct PpoSampler {
  const PpoAgent<S>& agent;
  double std_dev;

  void sample_row(const MatX<S>& outputs, Eigen::Index row, Rng& rng,
                  MatX<S>& actions_out, S* log_prob) const {
    if (agent.discrete) {
      const S mx = outputs.row(row).maxCoeff();
      const auto shifted = (outputs.row(row).array() - mx).eval();
      const S lse = mx + std::log(shifted.exp().sum());
      const double u = rng.uniform();
      double acc = 0.0;
      Eigen::Index arm = outputs.cols() - 1;
      for (Eigen::Index k = 0; k < outputs.cols(); ++k) {
        acc += std::exp(static_cast<double>(outputs(row, k) - lse));
        if (u < acc) {
          arm = k;
          break;
        }
      }
      actions_out(row, 0) = static_cast<S>(arm);
      *log_prob = outputs(row, arm) - lse;
    } else {
      const S sigma = static_cast<S>(std_dev);
      const S per_dim_const =
          static_cast<S>(std::log(std_dev)) + S(0.5) * S(kLog2Pi);
      S lp = S(0);
      for (Eigen::Index i = 0; i < outputs.cols(); ++i) {
        const S z = static_cast<S>(rng.normal());
        actions_out(row, i) = outputs(row, i) + sigma * z;
        lp += S(-0.5) * z * z - per_dim_const;
      }
      *log_prob = lp;
    }
  }

  // Deterministic action for evaluation.
  std::vector<float> deterministic_action(const std::vector<float>& obs) const {
    MatX<S> o(1, static_cast<Eigen::Index>(obs.size()));
    for (std::size_t i = 0; i < obs.size(); ++i)
      o(0, static_cast<Eigen::Index>(i)) = static_cast<S>(obs[i]);
    const MatX<S> out = agent.policy_forward(o);
    if (agent.discrete) {
      Eigen::Index arm = 0;
      out.row(0).maxCoeff(&arm);
      return {static_cast<float>(arm)};
    }
    std::vector<float> a(static_cast<std::size_t>(out.cols()));
    for (Eigen::Index i = 0; i < out.cols(); ++i)
      a[static_cast<std::size_t>(i)] = static_cast<float>(out(0, i));
    return a;
  }
};

// Fills the buffer with nr_steps batched transitions. Values and bootstrap
// values are recorded along the way: a finished sub-episode bootstraps from
// its final observation, everything else from the next batch row.
template <typename S>
void collect_rollout(const PpoAgent<S>& agent, const PpoConfig& cfg,
                     VecEnv& env, RolloutBuffer<S>& buffer, Rng& action_rng,
                     std::vector<float>& current_obs, EpisodeStats& stats,
                     const std::function<void(const CompletedEpisode&)>&
                         on_episode) {
  if (buffer.filled != 0) throw UsageError("collect_rollout: buffer not empty");
  const auto n = static_cast<Eigen::Index>(env.nr_envs());
  const auto obs_dim = static_cast<Eigen::Index>(env.obs_dim());
  const auto act_dim = buffer.actions.cols();

  MatX<S> obs_batch(n, obs_dim);
  MatX<S> action_batch(n, act_dim);
  std::vector<float> action_flat(static_cast<std::size_t>(n * act_dim));

  auto load_obs = [&](const std::vector<float>& flat) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index d = 0; d < obs_dim; ++d)
        obs_batch(i, d) =
            static_cast<S>(flat[static_cast<std::size_t>(i * obs_dim + d)]);
  };
  auto value_of_obs = [&](const std::vector<float>& single) {
    MatX<S> o(1, obs_dim);
    for (Eigen::Index d = 0; d < obs_dim; ++d)
      o(0, d) = static_cast<S>(single[static_cast<std::size_t>(d)]);
    return agent.value_forward(o)[0];
  };

  PpoSampler<S> sampler{agent, cfg.std_dev};
  for (std::int64_t t = 0; t < cfg.nr_steps; ++t) {
    load_obs(current_obs);
    const MatX<S> outputs = agent.policy_forward(obs_batch);
    const VecX<S> vals = agent.value_forward(obs_batch);

    for (Eigen::Index i = 0; i < n; ++i) {
      const auto p = static_cast<std::size_t>(t * n + i);
      S lp = S(0);
      sampler.sample_row(outputs, i, action_rng, action_batch, &lp);
      buffer.log_probs[p] = lp;
      buffer.values[p] = vals[i];
      buffer.observations.row(t * n + i) = obs_batch.row(i);
      buffer.actions.row(t * n + i) = action_batch.row(i);
      for (Eigen::Index d = 0; d < act_dim; ++d)
        action_flat[static_cast<std::size_t>(i * act_dim + d)] =
            static_cast<float>(action_batch(i, d));
    }

    VecStepResult r = env.step(action_flat);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto p = static_cast<std::size_t>(t * n + i);
      buffer.rewards[p] = static_cast<S>(r.rewards[static_cast<std::size_t>(i)]);
      buffer.terminated[p] = r.terminated[static_cast<std::size_t>(i)];
      buffer.truncated[p] = r.truncated[static_cast<std::size_t>(i)];
      if (r.terminated[static_cast<std::size_t>(i)] ||
          r.truncated[static_cast<std::size_t>(i)]) {
        buffer.bootstrap_values[p] =
            value_of_obs(*r.final_observations[static_cast<std::size_t>(i)]);
      }
      StepResult single;
      single.reward = r.rewards[static_cast<std::size_t>(i)];
      single.terminated = r.terminated[static_cast<std::size_t>(i)] != 0;
      single.truncated = r.truncated[static_cast<std::size_t>(i)] != 0;
      auto ep = stats.record(static_cast<int>(i), single);
      if (ep && on_episode) on_episode(*ep);
    }
    // previous step's live transitions bootstrap from this step's values
    if (t > 0) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto prev = static_cast<std::size_t>((t - 1) * n + i);
        if (!buffer.terminated[prev] && !buffer.truncated[prev])
          buffer.bootstrap_values[prev] = vals[i];
      }
    }
    current_obs = std::move(r.observations);
  }
  // bootstrap for the final row
  load_obs(current_obs);
  const VecX<S> tail_vals = agent.value_forward(obs_batch);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto last = static_cast<std::size_t>((cfg.nr_steps - 1) * n + i);
    if (!buffer.terminated[last] && !buffer.truncated[last])
      buffer.bootstrap_values[last] = tail_vals[i];
  }
  buffer.filled = buffer.capacity();
}

}  // namespace rlx

#endif  // RLX_PPO_HPP_
