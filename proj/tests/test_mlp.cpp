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

#include "rlx/mlp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "rlx/grad_check.hpp"
#include "test_util.hpp"

namespace {

using rlx::Activation;
using rlx::MatX;
using rlx::MlpShape;
using rlx::ParamSet;

MlpShape single_layer(Eigen::Index dim_in, Eigen::Index dim_out,
                      Activation hidden = Activation::kIdentity) {
  return MlpShape{{dim_in, dim_out}, hidden, ""};
}

TEST(MlpForward, IdentityLayerPassesInputThrough) {
  auto shape = single_layer(2, 2);
  ParamSet<double> params;
  auto& w = params.add(shape.weight_name(0), {2, 2});
  rlx::as_matrix<double>(w) = MatX<double>::Identity(2, 2);
  params.add(shape.bias_name(0), {2});

  MatX<double> in(1, 2);
  in << 1.0, 2.0;
  MatX<double> out = rlx::mlp_forward(shape, params, in);
  EXPECT_EQ(out(0, 0), 1.0);
  EXPECT_EQ(out(0, 1), 2.0);
}

TEST(MlpForward, ZeroWeightsBroadcastBias) {
  auto shape = single_layer(3, 2);
  ParamSet<double> params;
  params.add(shape.weight_name(0), {2, 3});
  auto& b = params.add(shape.bias_name(0), {2});
  b.values = {0.5, -1.5};

  MatX<double> in = MatX<double>::Random(4, 3);
  MatX<double> out = rlx::mlp_forward(shape, params, in);
  for (int r = 0; r < 4; ++r) {
    EXPECT_EQ(out(r, 0), 0.5);
    EXPECT_EQ(out(r, 1), -1.5);
  }
}

// Random 2-hidden-layer tanh net against a straight-line reimplementation of
// the affine+tanh chain.
TEST(MlpForward, MatchesStraightLineOracle) {
  MlpShape shape{{3, 5, 4, 2}, Activation::kTanh, "net."};
  rlx::Rng rng(99);
  ParamSet<double> params;
  rlx::add_mlp_params(params, shape, rng, 1.0);

  // copy params into the oracle's nested-vector form
  std::vector<rlx_test::OracleLayer> layers;
  for (int l = 0; l < shape.num_layers(); ++l) {
    rlx_test::OracleLayer layer;
    const auto& w = params.at(shape.weight_name(l));
    const auto& b = params.at(shape.bias_name(l));
    layer.weight.assign(static_cast<std::size_t>(w.shape[0]),
                        std::vector<double>(static_cast<std::size_t>(w.shape[1])));
    for (Eigen::Index r = 0; r < w.shape[0]; ++r)
      for (Eigen::Index c = 0; c < w.shape[1]; ++c)
        layer.weight[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
            w.values[static_cast<std::size_t>(r * w.shape[1] + c)];
    layer.bias = b.values;
    layer.tanh_act = l < shape.num_layers() - 1;
    layers.push_back(std::move(layer));
  }

  rlx::Rng in_rng(4);
  MatX<double> in(6, 3);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 3; ++c) in(r, c) = in_rng.normal();

  MatX<double> out = rlx::mlp_forward(shape, params, in);
  for (int r = 0; r < 6; ++r) {
    std::vector<double> x = {in(r, 0), in(r, 1), in(r, 2)};
    auto expected = rlx_test::oracle_forward(layers, x);
    for (int c = 0; c < 2; ++c)
      EXPECT_NEAR(out(r, c), expected[static_cast<std::size_t>(c)], 1e-12);
  }
}

TEST(MlpForward, PureFunctionBitIdentical) {
  MlpShape shape{{4, 8, 3}, Activation::kTanh, ""};
  rlx::Rng rng(5);
  ParamSet<float> params;
  rlx::add_mlp_params(params, shape, rng, 0.01);
  MatX<float> in = MatX<float>::Random(7, 4);

  MatX<float> a = rlx::mlp_forward(shape, params, in);
  MatX<float> b = rlx::mlp_forward(shape, params, in);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(float) * a.size()), 0);
}

TEST(MlpForward, ShapeMismatchNamesLayer) {
  MlpShape shape{{3, 2}, Activation::kIdentity, "pol."};
  rlx::Rng rng(1);
  ParamSet<double> params;
  rlx::add_mlp_params(params, shape, rng, 1.0);
  MatX<double> in = MatX<double>::Zero(1, 5);
  try {
    rlx::mlp_forward(shape, params, in);
    FAIL() << "expected ConfigError";
  } catch (const rlx::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("pol.layer0"), std::string::npos);
  }
}

TEST(MlpBackward, ZeroUpstreamGivesZeroGrads) {
  MlpShape shape{{3, 6, 2}, Activation::kTanh, ""};
  rlx::Rng rng(17);
  ParamSet<double> params;
  rlx::add_mlp_params(params, shape, rng, 1.0);
  MatX<double> in = MatX<double>::Random(5, 3);
  MatX<double> upstream = MatX<double>::Zero(5, 2);

  auto grads = params.zeros_like();
  MatX<double> in_grad = rlx::mlp_backward(shape, params, in, upstream, grads);
  for (const auto& e : grads.entries)
    for (double v : e.values) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(in_grad.cwiseAbs().maxCoeff(), 0.0);
}

// Affine layer with upstream of ones has closed-form gradients: the weight
// gradient row is the column sum of the input, the bias gradient is the
// batch size.
TEST(MlpBackward, AffineClosedForm) {
  auto shape = single_layer(3, 2);
  rlx::Rng rng(2);
  ParamSet<double> params;
  rlx::add_mlp_params(params, shape, rng, 1.0);
  MatX<double> in = MatX<double>::Random(4, 3);
  MatX<double> upstream = MatX<double>::Ones(4, 2);

  auto grads = params.zeros_like();
  rlx::mlp_backward(shape, params, in, upstream, grads);

  Eigen::RowVectorXd col_sums = in.colwise().sum();
  auto wg = rlx::as_matrix<double>(grads.at(shape.weight_name(0)));
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(wg(r, c), col_sums(c), 1e-12);
  auto bg = rlx::as_vector<double>(grads.at(shape.bias_name(0)));
  EXPECT_NEAR(bg(0), 4.0, 1e-12);
  EXPECT_NEAR(bg(1), 4.0, 1e-12);
}

// Every gradient component of a random 2-hidden-layer net checked against
// central finite differences through a smooth scalar loss.
TEST(MlpBackward, MatchesFiniteDifferences) {
  MlpShape shape{{3, 6, 5, 2}, Activation::kTanh, ""};
  rlx::Rng rng(23);
  ParamSet<double> params;
  rlx::add_mlp_params(params, shape, rng, 1.0);
  MatX<double> in = MatX<double>::Random(4, 3);
  MatX<double> target = MatX<double>::Random(4, 2);

  // loss = 0.5 * sum((out - target)^2); upstream = out - target
  auto loss_fn = [&](const ParamSet<double>& p) {
    MatX<double> out = rlx::mlp_forward(shape, p, in);
    return 0.5 * (out - target).squaredNorm();
  };
  auto grads = params.zeros_like();
  MatX<double> out = rlx::mlp_forward(shape, params, in);
  MatX<double> upstream = out - target;
  rlx::mlp_backward(shape, params, in, upstream, grads);

  const double max_rel = rlx::finite_difference_check(loss_fn, params, grads);
  EXPECT_LT(max_rel, 1e-5);
}

TEST(MlpBackward, InputGradMatchesFiniteDifferences) {
  MlpShape shape{{3, 4, 2}, Activation::kTanh, ""};
  rlx::Rng rng(31);
  ParamSet<double> params;
  rlx::add_mlp_params(params, shape, rng, 1.0);
  MatX<double> in = MatX<double>::Random(1, 3);
  MatX<double> upstream = MatX<double>::Ones(1, 2);

  auto grads = params.zeros_like();
  MatX<double> in_grad = rlx::mlp_backward(shape, params, in, upstream, grads);

  const double h = 1e-6;
  for (int c = 0; c < 3; ++c) {
    MatX<double> up = in, down = in;
    up(0, c) += h;
    down(0, c) -= h;
    const double fd = (rlx::mlp_forward(shape, params, up).sum() -
                       rlx::mlp_forward(shape, params, down).sum()) /
                      (2 * h);
    EXPECT_NEAR(in_grad(0, c), fd, 1e-7);
  }
}

TEST(MlpInit, OrthogonalRowsAndZeroBias) {
  MlpShape shape{{4, 8, 2}, Activation::kRelu, ""};
  rlx::Rng rng(77);
  ParamSet<double> params;
  rlx::add_mlp_params(params, shape, rng, 1.0);

  // hidden weight has gain sqrt(2): W W^T = 2 I for the 8x4 layer (rows
  // orthonormal before scaling since rows <= cols is false here; use W^T W)
  auto w = rlx::as_matrix<double>(params.at(shape.weight_name(0)));
  MatX<double> gram = w.transpose() * w;  // [4x4]
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      EXPECT_NEAR(gram(r, c), r == c ? 2.0 : 0.0, 1e-9);
  for (double v : params.at(shape.bias_name(0)).values) EXPECT_EQ(v, 0.0);
}

}  // namespace
