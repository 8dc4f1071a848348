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

#ifndef RLX_GRAD_CHECK_HPP_
#define RLX_GRAD_CHECK_HPP_

#include <algorithm>
#include <cmath>

#include "rlx/param_set.hpp"

namespace rlx {

// Central-difference verification of an analytic gradient, in double
// precision. For every parameter component:
//   numeric = (loss(p + h e) - loss(p - h e)) / (2 h)
//   rel_err = |numeric - analytic| / max(|analytic|, |numeric|, 1e-8)
// Returns the maximum relative error over all components. loss_fn must be a
// deterministic function of the parameters.
template <typename LossFn>
double finite_difference_check(const LossFn& loss_fn,
                               const ParamSet<double>& params,
                               const ParamSet<double>& analytic,
                               double h = 1e-5) {
  check_congruent(params, analytic);
  ParamSet<double> work = params;
  double max_rel = 0.0;
  for (std::size_t i = 0; i < work.entries.size(); ++i) {
    auto& vals = work.entries[i].values;
    const auto& grad = analytic.entries[i].values;
    for (std::size_t j = 0; j < vals.size(); ++j) {
      const double saved = vals[j];
      vals[j] = saved + h;
      const double up = loss_fn(work);
      vals[j] = saved - h;
      const double down = loss_fn(work);
      vals[j] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double denom =
          std::max({std::abs(grad[j]), std::abs(numeric), 1e-8});
      max_rel = std::max(max_rel, std::abs(numeric - grad[j]) / denom);
    }
  }
  return max_rel;
}

}  // namespace rlx

#endif  // RLX_GRAD_CHECK_HPP_
