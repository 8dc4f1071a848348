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

#ifndef RLX_ERROR_HPP_
#define RLX_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace rlx {

// Bad wiring detected before or at startup: shape mismatches, unknown
// config keys, duplicate registrations.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// API misuse at run time: stepping a finished episode, sampling an empty
// buffer.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values in training arithmetic.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wire-format violation. Fatal for the session that produced it.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Socket-level failure: refused, reset, closed mid-request, timeout.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem or serialization failure.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rlx

#endif  // RLX_ERROR_HPP_
