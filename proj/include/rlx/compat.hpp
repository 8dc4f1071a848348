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

#ifndef RLX_COMPAT_HPP_
#define RLX_COMPAT_HPP_

#include <set>
#include <string>

#include "rlx/space.hpp"

namespace rlx {

// What an algorithm can consume. Every algorithm here requires flat
// continuous-box observations; they differ in the action spaces they drive.
struct AlgoCaps {
  std::string name;
  std::set<Space::Kind> action_kinds;
};

struct CompatResult {
  bool ok = true;
  std::string report;  // names the failing axis when !ok
};

// Startup-time compatibility gate between an algorithm and an environment.
// A mismatch is reported here, never as a mid-run failure.
inline CompatResult check_compatibility(const AlgoCaps& algo,
                                        const Space& action_space,
                                        const Space& observation_space) {
  CompatResult res;
  auto fail = [&](const std::string& line) {
    res.ok = false;
    if (!res.report.empty()) res.report += "; ";
    res.report += line;
  };
  if (algo.action_kinds.count(action_space.kind) == 0)
    fail("action space: " + std::string(space_kind_name(action_space.kind)) +
         " unsupported by " + algo.name);
  if (observation_space.kind != Space::Kind::kContinuousBox)
    fail("observation space: " +
         std::string(space_kind_name(observation_space.kind)) +
         " unsupported by " + algo.name + " (flat continuous_box required)");
  return res;
}

}  // namespace rlx

#endif  // RLX_COMPAT_HPP_
