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
//
// Test-only oracles. Everything here is written straight from definitions,
// independent of the library's computation paths, so it can stand as the
// expected side of the checks.

#ifndef RLX_TESTS_TEST_UTIL_HPP_
#define RLX_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace rlx_test {

// Straight-line dense network evaluation on nested vectors: per layer
// out[j] = act(sum_i in[i] * w[j][i] + b[j]). No shared code with the
// library path.
struct OracleLayer {
  std::vector<std::vector<double>> weight;  // [out][in]
  std::vector<double> bias;                 // [out]
  bool tanh_act = false;
  bool relu_act = false;
};

inline std::vector<double> oracle_forward(
    const std::vector<OracleLayer>& layers, std::vector<double> x) {
  for (const auto& layer : layers) {
    std::vector<double> y(layer.bias.size(), 0.0);
    for (std::size_t j = 0; j < layer.bias.size(); ++j) {
      double acc = layer.bias[j];
      for (std::size_t i = 0; i < x.size(); ++i)
        acc += layer.weight[j][i] * x[i];
      if (layer.tanh_act) acc = std::tanh(acc);
      if (layer.relu_act) acc = acc > 0 ? acc : 0.0;
      y[j] = acc;
    }
    x = std::move(y);
  }
  return x;
}

// Generalized advantage estimation by explicit double sum:
//   A_t = sum_{k >= t} (gamma*lambda)^{k-t} delta_k, cut after any done step
//   delta_k = r_k + gamma * next_value_k * (1 - terminated_k) - value_k
// Flat arrays indexed t * nr_envs + i.
inline void brute_force_gae(const std::vector<double>& rewards,
                            const std::vector<double>& values,
                            const std::vector<double>& next_values,
                            const std::vector<std::uint8_t>& terminated,
                            const std::vector<std::uint8_t>& truncated,
                            int nr_steps, int nr_envs, double gamma,
                            double lambda, std::vector<double>* advantages,
                            std::vector<double>* returns) {
  advantages->assign(rewards.size(), 0.0);
  returns->assign(rewards.size(), 0.0);
  auto idx = [nr_envs](int t, int i) {
    return static_cast<std::size_t>(t) * static_cast<std::size_t>(nr_envs) +
           static_cast<std::size_t>(i);
  };
  for (int i = 0; i < nr_envs; ++i) {
    for (int t = 0; t < nr_steps; ++t) {
      double acc = 0.0;
      double w = 1.0;
      for (int k = t; k < nr_steps; ++k) {
        const auto p = idx(k, i);
        const double delta =
            rewards[p] +
            gamma * next_values[p] * (terminated[p] ? 0.0 : 1.0) - values[p];
        acc += w * delta;
        if (terminated[p] || truncated[p]) break;
        w *= gamma * lambda;
      }
      (*advantages)[idx(t, i)] = acc;
      (*returns)[idx(t, i)] = acc + values[idx(t, i)];
    }
  }
}

// Composite Simpson quadrature on [a, b] with n subintervals (n even).
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int n) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i)
    acc += f(a + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Regularized incomplete gamma functions (series + continued fraction),
// good to ~1e-12 for the moderate arguments used in the chi-square test.
inline double gamma_p(double a, double x) {
  if (x < 0 || a <= 0) return std::nan("");
  if (x == 0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    // series for P(a, x)
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  // continued fraction for Q(a, x)
  const double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  const double q = std::exp(-x + a * std::log(x) - gln) * h;
  return 1.0 - q;
}

inline double gamma_q(double a, double x) { return 1.0 - gamma_p(a, x); }

// Upper-tail p-value of a chi-square statistic with `dof` degrees of freedom.
inline double chi_square_p_value(double chi2, double dof) {
  return gamma_q(dof / 2.0, chi2 / 2.0);
}

}  // namespace rlx_test

#endif  // RLX_TESTS_TEST_UTIL_HPP_
