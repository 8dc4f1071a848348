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

#include "rlx/adam.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "rlx/grad_check.hpp"
#include "rlx/mlp.hpp"

namespace {

using rlx::AdamState;
using rlx::ParamSet;

ParamSet<double> scalar_param(double v) {
  ParamSet<double> p;
  p.add("x", {1}).values = {v};
  return p;
}

TEST(Adam, ZeroGradientIsIdentity) {
  auto params = scalar_param(1.25);
  auto grads = params.zeros_like();
  auto state = AdamState<double>::init(params);
  for (int i = 0; i < 50; ++i)
    rlx::adam_step(params, grads, state, 0.1);
  EXPECT_EQ(params.at("x").values[0], 1.25);
  EXPECT_EQ(state.first_moment.at("x").values[0], 0.0);
  EXPECT_EQ(state.second_moment.at("x").values[0], 0.0);
  EXPECT_EQ(state.step_count, 50);
}

// First bias-corrected step from zero moments: update is
// -lr / (1 + eps) regardless of the gradient's magnitude sign-scale.
TEST(Adam, FirstStepClosedForm) {
  auto params = scalar_param(0.0);
  auto grads = scalar_param(1.0);
  auto state = AdamState<double>::init(params);
  rlx::adam_step(params, grads, state, 0.0003);
  const double expected = -0.0003 * (1.0 / (1.0 + 1e-8));
  EXPECT_NEAR(params.at("x").values[0], expected, 1e-15);
  EXPECT_EQ(state.step_count, 1);
}

// Reference scalar optimization: minimizing x^2 from x=1 must reach
// |x| < 1e-3 within 10000 steps at lr 0.01.
TEST(Adam, MinimizesQuadratic) {
  auto params = scalar_param(1.0);
  auto state = AdamState<double>::init(params);
  int steps = 0;
  for (; steps < 10000; ++steps) {
    const double x = params.at("x").values[0];
    if (std::abs(x) < 1e-3) break;
    auto grads = scalar_param(2.0 * x);
    rlx::adam_step(params, grads, state, 0.01);
  }
  EXPECT_LT(std::abs(params.at("x").values[0]), 1e-3);
  EXPECT_LT(steps, 10000);
}

TEST(Adam, NonFiniteGradientNamesEntry) {
  auto params = scalar_param(0.0);
  auto grads = scalar_param(std::nan(""));
  auto state = AdamState<double>::init(params);
  try {
    rlx::adam_step(params, grads, state, 0.001);
    FAIL() << "expected NumericError";
  } catch (const rlx::NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("x"), std::string::npos);
  }
}

TEST(ClipGrads, BelowThresholdUnchanged) {
  ParamSet<double> g;
  g.add("a", {2}).values = {0.15, 0.2};  // norm 0.25
  auto before = g;
  const double norm = rlx::clip_global_grad_norm(g, 0.5);
  EXPECT_NEAR(norm, 0.25, 1e-12);
  EXPECT_EQ(g.at("a").values, before.at("a").values);
}

TEST(ClipGrads, ScalesAboveThreshold) {
  ParamSet<double> g;
  g.add("a", {2}).values = {3.0, 4.0};  // norm 5
  const double norm = rlx::clip_global_grad_norm(g, 0.5);
  EXPECT_NEAR(norm, 5.0, 1e-12);
  EXPECT_NEAR(g.at("a").values[0], 0.3, 1e-12);
  EXPECT_NEAR(g.at("a").values[1], 0.4, 1e-12);
}

TEST(ClipGrads, ZeroGradsUnchanged) {
  ParamSet<double> g;
  g.add("a", {3});
  const double norm = rlx::clip_global_grad_norm(g, 0.5);
  EXPECT_EQ(norm, 0.0);
  for (double v : g.at("a").values) EXPECT_EQ(v, 0.0);
}

// Norm is computed over all entries jointly, and direction is preserved.
TEST(ClipGrads, GlobalAcrossEntriesAndDirectionPreserving) {
  rlx::Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    ParamSet<double> g;
    g.add("a", {3});
    g.add("b", {2, 2});
    for (auto& e : g.entries)
      for (auto& v : e.values) v = rng.normal() * 3;
    auto orig = g;
    const double pre = rlx::clip_global_grad_norm(g, 0.5);
    EXPECT_NEAR(pre, rlx::global_norm(orig), 1e-12);
    EXPECT_LE(rlx::global_norm(g), 0.5 + 1e-12);
    // direction: clipped = s * orig with one nonnegative scalar s
    const double s = pre > 0.5 ? 0.5 / pre : 1.0;
    for (std::size_t i = 0; i < g.entries.size(); ++i)
      for (std::size_t j = 0; j < g.entries[i].values.size(); ++j)
        EXPECT_NEAR(g.entries[i].values[j], s * orig.entries[i].values[j],
                    1e-12);
  }
}

TEST(FiniteDifferenceCheck, QuadraticLossOnTwoLayerNet) {
  rlx::MlpShape shape{{3, 6, 4, 2}, rlx::Activation::kTanh, ""};
  rlx::Rng rng(41);
  ParamSet<double> params;
  rlx::add_mlp_params(params, shape, rng, 1.0);
  rlx::MatX<double> in = rlx::MatX<double>::Random(5, 3);

  auto loss_fn = [&](const ParamSet<double>& p) {
    return 0.5 * rlx::mlp_forward(shape, p, in).squaredNorm();
  };
  auto grads = params.zeros_like();
  rlx::MatX<double> out = rlx::mlp_forward(shape, params, in);
  rlx::mlp_backward(shape, params, in, out, grads);
  EXPECT_LT(rlx::finite_difference_check(loss_fn, params, grads), 1e-5);
}

TEST(FiniteDifferenceCheck, ConstantLossIsExactlyZeroError) {
  ParamSet<double> params;
  params.add("w", {4}).values = {0.1, 0.2, 0.3, 0.4};
  auto loss_fn = [](const ParamSet<double>&) { return 3.5; };
  auto grads = params.zeros_like();
  EXPECT_EQ(rlx::finite_difference_check(loss_fn, params, grads), 0.0);
}

// Central differences are exact for linear functions.
TEST(FiniteDifferenceCheck, LinearLossNearlyExact) {
  ParamSet<double> params;
  params.add("w", {5}).values = {0.3, -0.7, 1.1, 0.0, 2.5};
  auto loss_fn = [](const ParamSet<double>& p) {
    double s = 0.0;
    for (const auto& e : p.entries)
      for (double v : e.values) s += v;
    return s;
  };
  auto grads = params.zeros_like();
  for (auto& e : grads.entries)
    for (auto& v : e.values) v = 1.0;
  EXPECT_LT(rlx::finite_difference_check(loss_fn, params, grads), 1e-9);
}

}  // namespace
