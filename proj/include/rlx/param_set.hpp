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

#ifndef RLX_PARAM_SET_HPP_
#define RLX_PARAM_SET_HPP_

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rlx/error.hpp"

namespace rlx {

template <typename S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

// Ordered collection of named, shaped, flat parameter arrays. Iteration
// order is insertion order and is the canonical order for checkpoints,
// optimizer state and gradient congruence.
template <typename S>
struct ParamSet {
  struct Entry {
    std::string name;
    std::vector<Eigen::Index> shape;
    std::vector<S> values;

    Eigen::Index numel() const {
      Eigen::Index n = 1;
      for (Eigen::Index d : shape) n *= d;
      return n;
    }
  };

  std::vector<Entry> entries;

  Entry& add(const std::string& name, std::vector<Eigen::Index> shape) {
    if (has(name)) throw ConfigError("duplicate parameter entry: " + name);
    Entry e;
    e.name = name;
    e.shape = std::move(shape);
    e.values.assign(static_cast<std::size_t>(e.numel()), S(0));
    entries.push_back(std::move(e));
    return entries.back();
  }

  bool has(const std::string& name) const {
    for (const Entry& e : entries)
      if (e.name == name) return true;
    return false;
  }

  Entry& at(const std::string& name) {
    for (Entry& e : entries)
      if (e.name == name) return e;
    throw ConfigError("no parameter entry named: " + name);
  }

  const Entry& at(const std::string& name) const {
    for (const Entry& e : entries)
      if (e.name == name) return e;
    throw ConfigError("no parameter entry named: " + name);
  }

  std::size_t entry_count() const { return entries.size(); }

  Eigen::Index total_values() const {
    Eigen::Index n = 0;
    for (const Entry& e : entries) n += e.numel();
    return n;
  }

  // Same names and shapes, all values zero.
  ParamSet zeros_like() const {
    ParamSet out;
    for (const Entry& e : entries) out.add(e.name, e.shape);
    return out;
  }

  template <typename T>
  ParamSet<T> cast() const {
    ParamSet<T> out;
    for (const Entry& e : entries) {
      auto& oe = out.add(e.name, e.shape);
      for (std::size_t i = 0; i < e.values.size(); ++i)
        oe.values[i] = static_cast<T>(e.values[i]);
    }
    return out;
  }

  // Appends every entry of `other` under `prefix`. Used to merge the nets
  // of an agent into the single ParamSet a checkpoint holds.
  void absorb(const std::string& prefix, const ParamSet& other) {
    for (const Entry& e : other.entries) {
      auto& oe = add(prefix + e.name, e.shape);
      oe.values = e.values;
    }
  }

  // Inverse of absorb: extracts the entries under `prefix` with the prefix
  // stripped, in order.
  ParamSet extract(const std::string& prefix) const {
    ParamSet out;
    for (const Entry& e : entries) {
      if (e.name.rfind(prefix, 0) == 0) {
        auto& oe = out.add(e.name.substr(prefix.size()), e.shape);
        oe.values = e.values;
      }
    }
    return out;
  }
};

// Maps a rank-2 entry as a row-major matrix.
template <typename S>
Eigen::Map<MatX<S>> as_matrix(typename ParamSet<S>::Entry& e) {
  if (e.shape.size() != 2)
    throw ConfigError("entry " + e.name + " is not a matrix");
  return Eigen::Map<MatX<S>>(e.values.data(), e.shape[0], e.shape[1]);
}

template <typename S>
Eigen::Map<const MatX<S>> as_matrix(const typename ParamSet<S>::Entry& e) {
  if (e.shape.size() != 2)
    throw ConfigError("entry " + e.name + " is not a matrix");
  return Eigen::Map<const MatX<S>>(e.values.data(), e.shape[0], e.shape[1]);
}

template <typename S>
Eigen::Map<VecX<S>> as_vector(typename ParamSet<S>::Entry& e) {
  if (e.shape.size() != 1)
    throw ConfigError("entry " + e.name + " is not a vector");
  return Eigen::Map<VecX<S>>(e.values.data(), e.shape[0]);
}

template <typename S>
Eigen::Map<const VecX<S>> as_vector(const typename ParamSet<S>::Entry& e) {
  if (e.shape.size() != 1)
    throw ConfigError("entry " + e.name + " is not a vector");
  return Eigen::Map<const VecX<S>>(e.values.data(), e.shape[0]);
}

template <typename S>
void check_congruent(const ParamSet<S>& a, const ParamSet<S>& b) {
  if (a.entries.size() != b.entries.size())
    throw ConfigError("parameter sets differ in entry count");
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    const auto& ea = a.entries[i];
    const auto& eb = b.entries[i];
    if (ea.name != eb.name || ea.shape != eb.shape)
      throw ConfigError("parameter sets not congruent at entry " + ea.name);
  }
}

// L2 norm over every component of every entry, accumulated in double.
template <typename S>
double global_norm(const ParamSet<S>& p) {
  double sq = 0.0;
  for (const auto& e : p.entries)
    for (S v : e.values) sq += static_cast<double>(v) * static_cast<double>(v);
  return std::sqrt(sq);
}

// dst += a * src, elementwise over congruent sets.
template <typename S>
void axpy(double a, const ParamSet<S>& src, ParamSet<S>& dst) {
  check_congruent(src, dst);
  for (std::size_t i = 0; i < src.entries.size(); ++i) {
    const auto& sv = src.entries[i].values;
    auto& dv = dst.entries[i].values;
    for (std::size_t j = 0; j < sv.size(); ++j)
      dv[j] += static_cast<S>(a * static_cast<double>(sv[j]));
  }
}

template <typename S>
void scale_in_place(ParamSet<S>& p, double a) {
  for (auto& e : p.entries)
    for (S& v : e.values) v = static_cast<S>(static_cast<double>(v) * a);
}

}  // namespace rlx

#endif  // RLX_PARAM_SET_HPP_
