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

#ifndef RLX_SAC_HPP_
#define RLX_SAC_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rlx/adam.hpp"
#include "rlx/error.hpp"
#include "rlx/gaussian.hpp"
#include "rlx/mlp.hpp"
#include "rlx/replay_buffer.hpp"
#include "rlx/rng.hpp"
#include "rlx/space.hpp"

namespace rlx {

struct SacConfig {
  std::int64_t batch_size = 256;
  std::int64_t buffer_size = 1000000;
  std::int64_t learning_starts = 5000;
  double log_std_min = -20.0;
  double log_std_max = 2.0;
  // "auto" resolves to -(action dimension); a numeric override wins.
  std::optional<double> target_entropy_override;
  double tau = 0.005;
  double gamma = 0.99;
  double learning_rate = 0.0003;
  bool anneal_learning_rate = false;
  std::int64_t nr_hidden_units = 64;

  double target_entropy(std::int64_t action_dim) const {
    return target_entropy_override ? *target_entropy_override
                                   : -static_cast<double>(action_dim);
  }

  void validate() const {
    if (batch_size < 1 || buffer_size < 1 || nr_hidden_units < 1)
      throw ConfigError("sac: sizes must be positive");
    if (learning_starts < 0)
      throw ConfigError("sac: learning_starts must be >= 0");
    if (!(tau > 0) || tau > 1) throw ConfigError("sac: tau must be in (0, 1]");
    if (gamma <= 0 || gamma > 1) throw ConfigError("sac: gamma out of range");
    if (!(learning_rate > 0)) throw ConfigError("sac: learning_rate <= 0");
    if (log_std_min >= log_std_max)
      throw ConfigError("sac: log_std_min must be below log_std_max");
    if (anneal_learning_rate)
      throw ConfigError("sac: anneal_learning_rate is not supported");
  }
};

// target <- (1 - tau) * target + tau * online, elementwise.
template <typename S>
void polyak_update(ParamSet<S>& target, const ParamSet<S>& online,
                   double tau) {
  check_congruent(target, online);
  for (std::size_t i = 0; i < target.entries.size(); ++i) {
    auto& tv = target.entries[i].values;
    const auto& ov = online.entries[i].values;
    for (std::size_t j = 0; j < tv.size(); ++j)
      tv[j] = static_cast<S>((1.0 - tau) * static_cast<double>(tv[j]) +
                             tau * static_cast<double>(ov[j]));
  }
}

// Maps a squashed action in (-1, 1)^d onto the env's action box and back.
inline std::vector<float> scale_to_box(const std::vector<float>& unit,
                                       const Space& box) {
  std::vector<float> out(unit.size());
  for (std::size_t i = 0; i < unit.size(); ++i)
    out[i] = box.low[i] + (unit[i] + 1.0f) * 0.5f * (box.high[i] - box.low[i]);
  return out;
}

inline std::vector<float> scale_from_box(const std::vector<float>& env_action,
                                         const Space& box) {
  std::vector<float> out(env_action.size());
  for (std::size_t i = 0; i < env_action.size(); ++i)
    out[i] =
        2.0f * (env_action[i] - box.low[i]) / (box.high[i] - box.low[i]) - 1.0f;
  return out;
}

// Actor, twin critics, Polyak targets and the temperature parameter.
// critic_params holds both Q networks ("q1.*", "q2.*") under one Adam state;
// target_params mirrors them; alpha_params is the single log_alpha scalar.
template <typename S>
struct SacAgent {
  MlpShape actor_shape;  // obs -> [mean, raw log_std]
  MlpShape q1_shape;     // [obs, action] -> 1
  MlpShape q2_shape;
  ParamSet<S> actor_params;
  ParamSet<S> critic_params;
  ParamSet<S> target_params;
  ParamSet<S> alpha_params;
  AdamState<S> actor_opt;
  AdamState<S> critic_opt;
  AdamState<S> alpha_opt;
  std::int64_t obs_dim = 0;
  std::int64_t action_dim = 0;
  S log_std_min = S(-20);
  S log_std_max = S(2);

  static SacAgent make(const Space& observation_space,
                       const Space& action_space, const SacConfig& cfg,
                       std::uint64_t init_seed) {
    if (action_space.kind != Space::Kind::kContinuousBox)
      throw ConfigError("sac requires a continuous action space");
    SacAgent agent;
    agent.obs_dim = observation_space.flat_dim();
    agent.action_dim = static_cast<std::int64_t>(action_space.low.size());
    agent.log_std_min = static_cast<S>(cfg.log_std_min);
    agent.log_std_max = static_cast<S>(cfg.log_std_max);
    const auto h = cfg.nr_hidden_units;
    agent.actor_shape = MlpShape{
        {agent.obs_dim, h, h, 2 * agent.action_dim}, Activation::kRelu, ""};
    agent.q1_shape = MlpShape{
        {agent.obs_dim + agent.action_dim, h, h, 1}, Activation::kRelu, "q1."};
    agent.q2_shape = MlpShape{
        {agent.obs_dim + agent.action_dim, h, h, 1}, Activation::kRelu, "q2."};
    Rng rng(init_seed);
    add_mlp_params(agent.actor_params, agent.actor_shape, rng, 1.0);
    add_mlp_params(agent.critic_params, agent.q1_shape, rng, 1.0);
    add_mlp_params(agent.critic_params, agent.q2_shape, rng, 1.0);
    agent.target_params = agent.critic_params;
    agent.alpha_params.add("log_alpha", {1});  // alpha starts at 1
    agent.actor_opt = AdamState<S>::init(agent.actor_params);
    agent.critic_opt = AdamState<S>::init(agent.critic_params);
    agent.alpha_opt = AdamState<S>::init(agent.alpha_params);
    return agent;
  }

  S log_alpha() const { return alpha_params.at("log_alpha").values[0]; }
  S alpha() const { return std::exp(log_alpha()); }

  struct ActorOutput {
    MatX<S> mean;       // [m, d]
    MatX<S> log_std;    // [m, d], clamped
    MatX<S> raw;        // [m, 2d] network output (for clamp masking)
  };

  ActorOutput actor_forward(const ParamSet<S>& params,
                            const MatX<S>& obs) const {
    ActorOutput out;
    out.raw = mlp_forward(actor_shape, params, obs);
    const auto d = action_dim;
    out.mean = out.raw.leftCols(d);
    out.log_std = out.raw.rightCols(d)
                      .cwiseMax(log_std_min)
                      .cwiseMin(log_std_max);
    return out;
  }

  // Q values for concatenated [obs, action] rows.
  VecX<S> q_forward(const MlpShape& shape, const ParamSet<S>& params,
                    const MatX<S>& obs, const MatX<S>& actions) const {
    MatX<S> in(obs.rows(), obs.cols() + actions.cols());
    in.leftCols(obs.cols()) = obs;
    in.rightCols(actions.cols()) = actions;
    return mlp_forward(shape, params, in).col(0);
  }
};

// Reparameterized squashed-Gaussian actions for a batch of observations,
// with summed log-probs. noise is [m, d] of standard normals.
template <typename S>
struct SquashedBatch {
  MatX<S> pre_tanh;
  MatX<S> action;
  VecX<S> log_prob;
};

template <typename S>
SquashedBatch<S> squashed_batch(const MatX<S>& mean, const MatX<S>& log_std,
                                const MatX<S>& noise) {
  SquashedBatch<S> out;
  const auto m = mean.rows();
  const auto d = mean.cols();
  out.pre_tanh.resize(m, d);
  out.action.resize(m, d);
  out.log_prob = VecX<S>::Zero(m);
  const S interior = std::nextafter(S(1), S(0));
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const S sigma = std::exp(log_std(j, i));
      const S u = mean(j, i) + sigma * noise(j, i);
      const S a = std::clamp(std::tanh(u), -interior, interior);
      out.pre_tanh(j, i) = u;
      out.action(j, i) = a;
      const S z = noise(j, i);
      out.log_prob[j] += S(-0.5) * z * z - log_std(j, i) -
                         S(0.5) * S(kLog2Pi) -
                         std::log(S(1) - a * a + S(kSquashEps));
    }
  }
  return out;
}

// y = r + gamma * (1 - terminated) * (min(Q'1, Q'2)(s', a') - alpha log pi'),
// with a' freshly sampled from the actor at the next observations. No
// gradient flows anywhere; y is a constant for the critic update.
template <typename S>
VecX<S> critic_target(const SacAgent<S>& agent,
                      const typename ReplayBuffer<S>::Batch& batch,
                      const MatX<S>& next_noise, double gamma, S alpha) {
  if (!(alpha > S(0))) throw ConfigError("critic_target: alpha must be > 0");
  const auto actor = agent.actor_forward(agent.actor_params, batch.next_obs);
  const auto next = squashed_batch(actor.mean, actor.log_std, next_noise);
  const VecX<S> q1 =
      agent.q_forward(agent.q1_shape, agent.target_params, batch.next_obs,
                      next.action);
  const VecX<S> q2 =
      agent.q_forward(agent.q2_shape, agent.target_params, batch.next_obs,
                      next.action);
  VecX<S> y(batch.rewards.size());
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const S minq = std::min(q1[j], q2[j]);
    const S value = minq - alpha * next.log_prob[j];
    y[j] = batch.rewards[j] +
           static_cast<S>(gamma) * (S(1) - batch.terminated[j]) * value;
    if (!std::isfinite(static_cast<double>(y[j])))
      throw NumericError("sac: non-finite critic target");
  }
  return y;
}

// sum_k mean((Q_k(s, a) - y)^2), y constant.
template <typename S>
S critic_loss(const SacAgent<S>& agent, const ParamSet<S>& critic_params,
              const typename ReplayBuffer<S>::Batch& batch, const VecX<S>& y) {
  const VecX<S> q1 =
      agent.q_forward(agent.q1_shape, critic_params, batch.obs, batch.actions);
  const VecX<S> q2 =
      agent.q_forward(agent.q2_shape, critic_params, batch.obs, batch.actions);
  const auto m = static_cast<S>(y.size());
  return (q1 - y).squaredNorm() / m + (q2 - y).squaredNorm() / m;
}

template <typename S>
struct SacCriticStats {
  S loss = S(0);
  S mean_q1 = S(0);
  S mean_q2 = S(0);
};

template <typename S>
SacCriticStats<S> critic_loss_and_grad(const SacAgent<S>& agent,
                                       const typename ReplayBuffer<S>::Batch& batch,
                                       const VecX<S>& y, ParamSet<S>& grads) {
  const auto m = batch.obs.rows();
  MatX<S> in(m, batch.obs.cols() + batch.actions.cols());
  in.leftCols(batch.obs.cols()) = batch.obs;
  in.rightCols(batch.actions.cols()) = batch.actions;

  SacCriticStats<S> stats;
  const S inv_m = S(1) / static_cast<S>(m);
  for (int k = 0; k < 2; ++k) {
    const MlpShape& shape = k == 0 ? agent.q1_shape : agent.q2_shape;
    const VecX<S> q = mlp_forward(shape, agent.critic_params, in).col(0);
    MatX<S> upstream(m, 1);
    for (Eigen::Index j = 0; j < m; ++j)
      upstream(j, 0) = S(2) * (q[j] - y[j]) * inv_m;
    mlp_backward(shape, agent.critic_params, in, upstream, grads);
    stats.loss += (q - y).squaredNorm() * inv_m;
    if (k == 0)
      stats.mean_q1 = q.mean();
    else
      stats.mean_q2 = q.mean();
  }
  if (!std::isfinite(static_cast<double>(stats.loss)))
    throw NumericError("sac: non-finite critic loss");
  return stats;
}

// Actor loss mean(alpha * log pi(a~|s) - min Q(s, a~)) with a~
// reparameterized; alpha loss -mean(log_alpha * (log pi + target_entropy))
// with log pi constant.
template <typename S>
struct SacActorStats {
  S actor_loss = S(0);
  S alpha_loss = S(0);
  S mean_log_pi = S(0);
};

// Pure losses for verification paths.
template <typename S>
S actor_loss_value(const SacAgent<S>& agent, const ParamSet<S>& actor_params,
                   const MatX<S>& obs, const MatX<S>& noise, S alpha) {
  const auto out = agent.actor_forward(actor_params, obs);
  const auto sample = squashed_batch(out.mean, out.log_std, noise);
  const VecX<S> q1 = agent.q_forward(agent.q1_shape, agent.critic_params, obs,
                                     sample.action);
  const VecX<S> q2 = agent.q_forward(agent.q2_shape, agent.critic_params, obs,
                                     sample.action);
  S acc = S(0);
  for (Eigen::Index j = 0; j < obs.rows(); ++j)
    acc += alpha * sample.log_prob[j] - std::min(q1[j], q2[j]);
  return acc / static_cast<S>(obs.rows());
}

template <typename S>
S alpha_loss_value(S log_alpha, const VecX<S>& log_pi, double target_entropy) {
  S acc = S(0);
  for (Eigen::Index j = 0; j < log_pi.size(); ++j)
    acc += log_alpha * (log_pi[j] + static_cast<S>(target_entropy));
  return -acc / static_cast<S>(log_pi.size());
}

template <typename S>
SacActorStats<S> actor_and_alpha_loss_and_grad(
    const SacAgent<S>& agent, const MatX<S>& obs, const MatX<S>& noise,
    double target_entropy, ParamSet<S>& actor_grads,
    ParamSet<S>& alpha_grads) {
  const auto m = obs.rows();
  const auto d = agent.action_dim;
  const S alpha = agent.alpha();
  const S inv_m = S(1) / static_cast<S>(m);

  const auto out = agent.actor_forward(agent.actor_params, obs);
  const auto sample = squashed_batch(out.mean, out.log_std, noise);

  // min-critic selection and dQ/da through the chosen critic only
  MatX<S> qin(m, obs.cols() + d);
  qin.leftCols(obs.cols()) = obs;
  qin.rightCols(d) = sample.action;
  const VecX<S> q1 = mlp_forward(agent.q1_shape, agent.critic_params, qin).col(0);
  const VecX<S> q2 = mlp_forward(agent.q2_shape, agent.critic_params, qin).col(0);

  MatX<S> pick1 = MatX<S>::Zero(m, 1);
  MatX<S> pick2 = MatX<S>::Zero(m, 1);
  for (Eigen::Index j = 0; j < m; ++j)
    (q1[j] <= q2[j] ? pick1 : pick2)(j, 0) = S(1);

  ParamSet<S> scratch = agent.critic_params.zeros_like();
  const MatX<S> din1 =
      mlp_backward(agent.q1_shape, agent.critic_params, qin, pick1, scratch);
  const MatX<S> din2 =
      mlp_backward(agent.q2_shape, agent.critic_params, qin, pick2, scratch);
  // dmin(Q1,Q2)/d[obs, action]; only the action columns matter here
  const MatX<S> dq_din = din1 + din2;

  // Upstream gradient on the actor's raw output [mean, raw_log_std].
  //   d log pi / d u_i   = 2 a_i (1 - a_i^2) / (1 - a_i^2 + eps)  (squash)
  //   d log pi / d ls_i  = -1 + (d log pi / d u_i) * sigma_i z_i
  //   d (-minQ) / d u_i  = -(dQ/da_i) * (1 - a_i^2)
  // with u = mean + sigma z, a = tanh(u), and the log_std clamp zeroing the
  // gradient outside [log_std_min, log_std_max].
  MatX<S> upstream_actor = MatX<S>::Zero(m, 2 * d);
  S mean_log_pi = S(0);
  S actor_loss = S(0);
  for (Eigen::Index j = 0; j < m; ++j) {
    mean_log_pi += sample.log_prob[j];
    actor_loss += alpha * sample.log_prob[j] - std::min(q1[j], q2[j]);
    for (Eigen::Index i = 0; i < d; ++i) {
      const S a = sample.action(j, i);
      const S omaa = S(1) - a * a;
      const S dlp_du = squash_correction_grad(a);
      const S dq_da = dq_din(j, obs.cols() + i);
      const S df_du = alpha * dlp_du - dq_da * omaa;
      const S sigma_z = std::exp(out.log_std(j, i)) * noise(j, i);
      upstream_actor(j, i) = inv_m * df_du;
      const S raw_ls = out.raw(j, d + i);
      const bool clamped = raw_ls < agent.log_std_min || raw_ls > agent.log_std_max;
      if (!clamped)
        upstream_actor(j, d + i) =
            inv_m * (alpha * S(-1) + df_du * sigma_z);
    }
  }
  mlp_backward(agent.actor_shape, agent.actor_params, obs, upstream_actor,
               actor_grads);

  SacActorStats<S> stats;
  stats.mean_log_pi = mean_log_pi * inv_m;
  stats.actor_loss = actor_loss * inv_m;
  stats.alpha_loss = alpha_loss_value(agent.log_alpha(), sample.log_prob,
                                      target_entropy);
  alpha_grads.at("log_alpha").values[0] =
      -(stats.mean_log_pi + static_cast<S>(target_entropy));
  if (!std::isfinite(static_cast<double>(stats.actor_loss)) ||
      !std::isfinite(static_cast<double>(stats.alpha_loss)))
    throw NumericError("sac: non-finite actor/alpha loss");
  return stats;
}

}  // namespace rlx

#endif  // RLX_SAC_HPP_
