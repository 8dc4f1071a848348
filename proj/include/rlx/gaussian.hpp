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

#ifndef RLX_GAUSSIAN_HPP_
#define RLX_GAUSSIAN_HPP_

#include <algorithm>
#include <cmath>

#include "rlx/error.hpp"
#include "rlx/param_set.hpp"

namespace rlx {

inline constexpr double kLog2Pi = 1.8378770664093454836;

// Keeps the tanh change-of-variables correction finite at saturation.
inline constexpr double kSquashEps = 1e-6;

namespace detail {

template <typename S>
void require_finite(const VecX<S>& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(static_cast<double>(v[i])))
      throw NumericError(std::string("non-finite ") + what +
                         " in gaussian op");
}

}  // namespace detail

// Log density of a diagonal Gaussian, summed over dimensions:
// sum_i -0.5((a_i-mu_i)/sigma_i)^2 - log sigma_i - 0.5 log(2 pi).
template <typename S>
S gaussian_log_prob(const VecX<S>& mean, const VecX<S>& log_std,
                    const VecX<S>& action) {
  if (mean.size() != log_std.size() || mean.size() != action.size())
    throw ConfigError("gaussian_log_prob: dimension mismatch");
  detail::require_finite(mean, "mean");
  detail::require_finite(log_std, "log_std");
  detail::require_finite(action, "action");
  S total = S(0);
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    const S sigma = std::exp(log_std[i]);
    const S z = (action[i] - mean[i]) / sigma;
    total += S(-0.5) * z * z - log_std[i] - S(0.5) * S(kLog2Pi);
  }
  return total;
}

// Differential entropy of the diagonal Gaussian:
// sum_i log_std_i + 0.5 (1 + log(2 pi)).
template <typename S>
S gaussian_entropy(const VecX<S>& log_std) {
  detail::require_finite(log_std, "log_std");
  S total = S(0);
  for (Eigen::Index i = 0; i < log_std.size(); ++i)
    total += log_std[i] + S(0.5) * (S(1) + S(kLog2Pi));
  return total;
}

template <typename S>
struct SquashedSample {
  VecX<S> action;    // strictly inside (-1, 1)^d
  VecX<S> pre_tanh;  // mu + sigma * noise
  S log_prob;
};

// Reparameterized tanh-squashed Gaussian sample:
//   action = tanh(mu + sigma * noise)
//   log_prob = gaussian_log_prob(pre-squash) - sum_i log(1 - action_i^2 + eps)
template <typename S>
SquashedSample<S> squashed_sample_and_log_prob(const VecX<S>& mean,
                                               const VecX<S>& log_std,
                                               const VecX<S>& noise) {
  if (mean.size() != log_std.size() || mean.size() != noise.size())
    throw ConfigError("squashed sample: dimension mismatch");
  detail::require_finite(noise, "noise");
  SquashedSample<S> s;
  s.pre_tanh.resize(mean.size());
  s.action.resize(mean.size());
  // tanh rounds to exactly +/-1 for |x| beyond ~19; pin saturated samples to
  // the nearest representable interior value so actions stay strictly inside
  // the unit box.
  const S interior = std::nextafter(S(1), S(0));
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    s.pre_tanh[i] = mean[i] + std::exp(log_std[i]) * noise[i];
    s.action[i] = std::clamp(std::tanh(s.pre_tanh[i]), -interior, interior);
  }
  s.log_prob = gaussian_log_prob<S>(mean, log_std, s.pre_tanh);
  for (Eigen::Index i = 0; i < mean.size(); ++i)
    s.log_prob -= std::log(S(1) - s.action[i] * s.action[i] + S(kSquashEps));
  return s;
}

// d log_prob / d pre_tanh of the squash correction term; the Gaussian part
// contributes nothing through the sample itself under reparameterization
// (action = tanh(mu + sigma z) with z held fixed).
template <typename S>
S squash_correction_grad(S action) {
  const S omaa = S(1) - action * action;
  return S(2) * action * omaa / (omaa + S(kSquashEps));
}

}  // namespace rlx

#endif  // RLX_GAUSSIAN_HPP_
