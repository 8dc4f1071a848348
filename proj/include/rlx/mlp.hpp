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

#ifndef RLX_MLP_HPP_
#define RLX_MLP_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "rlx/error.hpp"
#include "rlx/param_set.hpp"
#include "rlx/rng.hpp"

namespace rlx {

enum class Activation { kTanh, kRelu, kIdentity };

inline const char* activation_name(Activation a) {
  switch (a) {
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
    case Activation::kIdentity: return "identity";
  }
  return "?";
}

// Dense feed-forward network description. Layer l maps sizes[l] -> sizes[l+1]
// as h W^T + b; hidden layers apply `hidden` pointwise, the output layer is
// always linear. Parameters live in a shared ParamSet under
// "<prefix>layer<l>.weight" ([out, in]) and "<prefix>layer<l>.bias" ([out]).
struct MlpShape {
  std::vector<Eigen::Index> sizes;
  Activation hidden = Activation::kTanh;
  std::string prefix;

  int num_layers() const { return static_cast<int>(sizes.size()) - 1; }
  Eigen::Index in_dim() const { return sizes.front(); }
  Eigen::Index out_dim() const { return sizes.back(); }

  std::string weight_name(int l) const {
    return prefix + "layer" + std::to_string(l) + ".weight";
  }
  std::string bias_name(int l) const {
    return prefix + "layer" + std::to_string(l) + ".bias";
  }
};

// Orthogonal [rows x cols] matrix from the QR decomposition of a Gaussian
// sample, sign-fixed with the diagonal of R so the result is unique.
template <typename S>
MatX<S> orthogonal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const bool transpose = rows < cols;
  const Eigen::Index r = transpose ? cols : rows;
  const Eigen::Index c = transpose ? rows : cols;

  Eigen::MatrixXd a(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) a(i, j) = rng.normal();

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q =
      qr.householderQ() * Eigen::MatrixXd::Identity(r, c);
  Eigen::MatrixXd rmat = qr.matrixQR().topRows(c);
  for (Eigen::Index j = 0; j < c; ++j)
    if (rmat(j, j) < 0) q.col(j) = -q.col(j);

  Eigen::MatrixXd out = transpose ? q.transpose() : q;
  return out.cast<S>();
}

// Adds the network's weights and biases to `params`: orthogonal init with
// gain sqrt(2) on hidden layers and `out_gain` on the output layer, zero
// biases.
template <typename S>
void add_mlp_params(ParamSet<S>& params, const MlpShape& shape, Rng& rng,
                    double out_gain) {
  const int nl = shape.num_layers();
  if (nl < 1) throw ConfigError("mlp needs at least one layer");
  for (int l = 0; l < nl; ++l) {
    const Eigen::Index in = shape.sizes[l];
    const Eigen::Index out = shape.sizes[l + 1];
    auto& w = params.add(shape.weight_name(l), {out, in});
    const double gain = (l == nl - 1) ? out_gain : std::sqrt(2.0);
    as_matrix<S>(w) = (orthogonal_matrix<S>(out, in, rng).array() *
                       static_cast<S>(gain))
                          .matrix();
    params.add(shape.bias_name(l), {out});
  }
}

namespace detail {

template <typename S>
void apply_activation(MatX<S>& m, Activation a) {
  switch (a) {
    case Activation::kTanh:
      m = m.array().tanh().matrix();
      break;
    case Activation::kRelu:
      m = m.cwiseMax(S(0));
      break;
    case Activation::kIdentity:
      break;
  }
}

// Derivative expressed through the post-activation value h.
template <typename S>
MatX<S> activation_grad_from_output(const MatX<S>& h, Activation a) {
  switch (a) {
    case Activation::kTanh:
      return (S(1) - h.array().square()).matrix();
    case Activation::kRelu:
      return (h.array() > S(0)).template cast<S>().matrix();
    case Activation::kIdentity:
      return MatX<S>::Constant(h.rows(), h.cols(), S(1));
  }
  return {};
}

template <typename S>
void check_input_width(const MlpShape& shape,
                       const MatX<S>& input) {
  if (input.cols() != shape.in_dim())
    throw ConfigError(shape.prefix + "layer0: input width " +
                      std::to_string(input.cols()) + ", expected " +
                      std::to_string(shape.in_dim()));
}

}  // namespace detail

// Forward pass caching post-activation values. acts->at(l) holds the output
// of layer l (after the hidden activation; the last one is the linear
// output). Pure: params is never mutated.
template <typename S>
MatX<S> mlp_forward_cached(const MlpShape& shape, const ParamSet<S>& params,
                           const MatX<S>& input,
                           std::vector<MatX<S>>* acts) {
  detail::check_input_width<S>(shape, input);
  const int nl = shape.num_layers();
  if (acts) acts->clear();
  MatX<S> h = input;
  for (int l = 0; l < nl; ++l) {
    const auto& we = params.at(shape.weight_name(l));
    const auto& be = params.at(shape.bias_name(l));
    auto w = as_matrix<S>(we);
    auto b = as_vector<S>(be);
    if (h.cols() != w.cols())
      throw ConfigError(shape.prefix + "layer" + std::to_string(l) +
                        ": input width " + std::to_string(h.cols()) +
                        ", expected " + std::to_string(w.cols()));
    MatX<S> z = h * w.transpose();
    z.rowwise() += b.transpose();
    if (l < nl - 1) detail::apply_activation(z, shape.hidden);
    h = std::move(z);
    if (acts) acts->push_back(h);
  }
  return h;
}

template <typename S>
MatX<S> mlp_forward(const MlpShape& shape, const ParamSet<S>& params,
                    const MatX<S>& input) {
  return mlp_forward_cached<S>(shape, params, input, nullptr);
}

// Reverse pass for the scalar sum(upstream .* output). Accumulates parameter
// gradients into the congruent entries of `grad_accum` (+=) and returns the
// gradient with respect to the input.
template <typename S>
MatX<S> mlp_backward(const MlpShape& shape, const ParamSet<S>& params,
                     const MatX<S>& input,
                     const MatX<S>& upstream,
                     ParamSet<S>& grad_accum) {
  const int nl = shape.num_layers();
  std::vector<MatX<S>> acts;
  MatX<S> out = mlp_forward_cached<S>(shape, params, input, &acts);
  if (upstream.rows() != out.rows() || upstream.cols() != out.cols())
    throw ConfigError(shape.prefix + "backward: upstream grad is " +
                      std::to_string(upstream.rows()) + "x" +
                      std::to_string(upstream.cols()) + ", expected " +
                      std::to_string(out.rows()) + "x" +
                      std::to_string(out.cols()));

  MatX<S> delta = upstream;  // grad wrt pre-activation of the current layer
  for (int l = nl - 1; l >= 0; --l) {
    const MatX<S>& below = (l == 0) ? MatX<S>(input) : acts[l - 1];
    auto w = as_matrix<S>(params.at(shape.weight_name(l)));
    as_matrix<S>(grad_accum.at(shape.weight_name(l))).noalias() +=
        delta.transpose() * below;
    as_vector<S>(grad_accum.at(shape.bias_name(l))) +=
        delta.colwise().sum().transpose();
    MatX<S> grad_h = delta * w;
    if (l > 0) {
      delta = grad_h.cwiseProduct(
          detail::activation_grad_from_output(acts[l - 1], shape.hidden));
    } else {
      delta = std::move(grad_h);
    }
  }
  return delta;
}

}  // namespace rlx

#endif  // RLX_MLP_HPP_
