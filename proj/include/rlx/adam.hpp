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

#ifndef RLX_ADAM_HPP_
#define RLX_ADAM_HPP_

#include <cmath>
#include <cstdint>

#include "rlx/error.hpp"
#include "rlx/param_set.hpp"

namespace rlx {

template <typename S>
struct AdamState {
  ParamSet<S> first_moment;
  ParamSet<S> second_moment;
  std::int64_t step_count = 0;

  static AdamState init(const ParamSet<S>& params) {
    AdamState st;
    st.first_moment = params.zeros_like();
    st.second_moment = params.zeros_like();
    return st;
  }
};

// Bias-corrected Adam update, in place. step_count advances by exactly one.
template <typename S>
void adam_step(ParamSet<S>& params, const ParamSet<S>& grads,
               AdamState<S>& state, double lr, double beta1 = 0.9,
               double beta2 = 0.999, double eps = 1e-8) {
  check_congruent(params, grads);
  check_congruent(params, state.first_moment);
  state.step_count += 1;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.step_count));
  for (std::size_t i = 0; i < params.entries.size(); ++i) {
    auto& p = params.entries[i].values;
    const auto& g = grads.entries[i].values;
    auto& m = state.first_moment.entries[i].values;
    auto& v = state.second_moment.entries[i].values;
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double gj = static_cast<double>(g[j]);
      if (!std::isfinite(gj))
        throw NumericError("non-finite gradient in entry " +
                           params.entries[i].name);
      const double mj = beta1 * static_cast<double>(m[j]) + (1.0 - beta1) * gj;
      const double vj =
          beta2 * static_cast<double>(v[j]) + (1.0 - beta2) * gj * gj;
      m[j] = static_cast<S>(mj);
      v[j] = static_cast<S>(vj);
      const double mhat = mj / bc1;
      const double vhat = vj / bc2;
      p[j] = static_cast<S>(static_cast<double>(p[j]) -
                            lr * mhat / (std::sqrt(vhat) + eps));
    }
  }
}

// Scales every gradient component by max_norm/norm when the global L2 norm
// over all entries exceeds max_norm. Returns the pre-clip norm.
template <typename S>
double clip_global_grad_norm(ParamSet<S>& grads, double max_norm) {
  if (!(max_norm > 0)) throw ConfigError("max_norm must be positive");
  const double norm = global_norm(grads);
  if (norm > max_norm) scale_in_place(grads, max_norm / norm);
  return norm;
}

}  // namespace rlx

#endif  // RLX_ADAM_HPP_
