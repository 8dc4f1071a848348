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

#ifndef RLX_WIRE_HPP_
#define RLX_WIRE_HPP_

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "rlx/error.hpp"
#include "rlx/space.hpp"

namespace rlx {

// Remote-environment wire protocol, version 1.
//
// Frame: 4-byte big-endian unsigned payload length, then a UTF-8 JSON object
//   {"type": <type>, "v": 1, ...payload}
// Numbers are serialized with full round-trip precision. The session order
// is: hello (client->server), hello + spaces (server->client), then any
// number of reset/step request-reply pairs, then close. Anything else gets
// an error message and the session ends.
struct WireMessage {
  enum class Type {
    kHello,
    kSpaces,
    kReset,
    kResetResult,
    kStep,
    kStepResult,
    kClose,
    kError,
  };

  Type type = Type::kHello;
  int version = 1;

  // spaces
  std::optional<Space> observation_space;
  std::optional<Space> action_space;
  // reset
  std::optional<std::uint64_t> seed;
  // reset_result / step_result
  std::optional<std::vector<double>> observation;
  // step: exactly one of these, by action-space kind
  std::optional<std::vector<double>> action;
  std::optional<std::int64_t> discrete_action;
  // step_result
  std::optional<double> reward;
  std::optional<bool> terminated;
  std::optional<bool> truncated;
  // error
  std::optional<std::string> code;
  std::optional<std::string> message;

  static WireMessage hello() { return WireMessage{}; }

  static WireMessage spaces(Space obs, Space act) {
    WireMessage m;
    m.type = Type::kSpaces;
    m.observation_space = std::move(obs);
    m.action_space = std::move(act);
    return m;
  }

  static WireMessage reset(std::uint64_t seed_value) {
    WireMessage m;
    m.type = Type::kReset;
    m.seed = seed_value;
    return m;
  }

  static WireMessage reset_result(std::vector<double> obs) {
    WireMessage m;
    m.type = Type::kResetResult;
    m.observation = std::move(obs);
    return m;
  }

  static WireMessage step_box(std::vector<double> act) {
    WireMessage m;
    m.type = Type::kStep;
    m.action = std::move(act);
    return m;
  }

  static WireMessage step_discrete(std::int64_t arm) {
    WireMessage m;
    m.type = Type::kStep;
    m.discrete_action = arm;
    return m;
  }

  static WireMessage step_result(std::vector<double> obs, double reward,
                                 bool terminated, bool truncated) {
    WireMessage m;
    m.type = Type::kStepResult;
    m.observation = std::move(obs);
    m.reward = reward;
    m.terminated = terminated;
    m.truncated = truncated;
    return m;
  }

  static WireMessage close() {
    WireMessage m;
    m.type = Type::kClose;
    return m;
  }

  static WireMessage error(std::string code, std::string text) {
    WireMessage m;
    m.type = Type::kError;
    m.code = std::move(code);
    m.message = std::move(text);
    return m;
  }

  friend bool operator==(const WireMessage& a, const WireMessage& b) {
    return a.type == b.type && a.version == b.version &&
           a.observation_space == b.observation_space &&
           a.action_space == b.action_space && a.seed == b.seed &&
           a.observation == b.observation && a.action == b.action &&
           a.discrete_action == b.discrete_action && a.reward == b.reward &&
           a.terminated == b.terminated && a.truncated == b.truncated &&
           a.code == b.code && a.message == b.message;
  }
};

namespace wire_detail {

inline const char* type_tag(WireMessage::Type t) {
  switch (t) {
    case WireMessage::Type::kHello: return "hello";
    case WireMessage::Type::kSpaces: return "spaces";
    case WireMessage::Type::kReset: return "reset";
    case WireMessage::Type::kResetResult: return "reset_result";
    case WireMessage::Type::kStep: return "step";
    case WireMessage::Type::kStepResult: return "step_result";
    case WireMessage::Type::kClose: return "close";
    case WireMessage::Type::kError: return "error";
  }
  return "?";
}

inline std::optional<WireMessage::Type> tag_type(const std::string& tag) {
  using T = WireMessage::Type;
  if (tag == "hello") return T::kHello;
  if (tag == "spaces") return T::kSpaces;
  if (tag == "reset") return T::kReset;
  if (tag == "reset_result") return T::kResetResult;
  if (tag == "step") return T::kStep;
  if (tag == "step_result") return T::kStepResult;
  if (tag == "close") return T::kClose;
  if (tag == "error") return T::kError;
  return std::nullopt;
}

inline nlohmann::json space_to_json(const Space& s) {
  nlohmann::json j;
  if (s.kind == Space::Kind::kDiscrete) {
    j["kind"] = "discrete";
    j["n"] = s.n;
  } else {
    j["kind"] = "box";
    j["low"] = std::vector<double>(s.low.begin(), s.low.end());
    j["high"] = std::vector<double>(s.high.begin(), s.high.end());
  }
  return j;
}

inline Space space_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "discrete") return Space::discrete(j.at("n").get<std::int64_t>());
    if (kind == "box") {
      auto lo = j.at("low").get<std::vector<double>>();
      auto hi = j.at("high").get<std::vector<double>>();
      return Space::box(std::vector<float>(lo.begin(), lo.end()),
                        std::vector<float>(hi.begin(), hi.end()));
    }
    throw ProtocolError("unknown space kind: " + kind);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed space payload: ") + e.what());
  } catch (const ConfigError& e) {
    throw ProtocolError(std::string("invalid space payload: ") + e.what());
  }
}

}  // namespace wire_detail

// Encodes one message into a complete frame. Throws ProtocolError when the
// payload is invalid for the type, and an encoding error when the payload
// would not fit the 32-bit length prefix.
inline std::string encode_message(const WireMessage& m) {
  using T = WireMessage::Type;
  nlohmann::json j;
  j["type"] = wire_detail::type_tag(m.type);
  j["v"] = m.version;
  switch (m.type) {
    case T::kHello:
      break;
    case T::kSpaces:
      if (!m.observation_space || !m.action_space)
        throw ProtocolError("spaces message needs both spaces");
      j["observation_space"] = wire_detail::space_to_json(*m.observation_space);
      j["action_space"] = wire_detail::space_to_json(*m.action_space);
      break;
    case T::kReset:
      if (!m.seed) throw ProtocolError("reset message needs a seed");
      j["seed"] = *m.seed;
      break;
    case T::kResetResult:
      if (!m.observation) throw ProtocolError("reset_result needs observation");
      j["observation"] = *m.observation;
      break;
    case T::kStep:
      if (m.action)
        j["action"] = *m.action;
      else if (m.discrete_action)
        j["action"] = *m.discrete_action;
      else
        throw ProtocolError("step message needs an action");
      break;
    case T::kStepResult:
      if (!m.observation || !m.reward || !m.terminated.has_value() ||
          !m.truncated.has_value())
        throw ProtocolError("step_result payload incomplete");
      j["observation"] = *m.observation;
      j["reward"] = *m.reward;
      j["terminated"] = *m.terminated;
      j["truncated"] = *m.truncated;
      break;
    case T::kClose:
      break;
    case T::kError:
      if (!m.code || !m.message) throw ProtocolError("error payload incomplete");
      j["code"] = *m.code;
      j["message"] = *m.message;
      break;
  }
  const std::string payload = j.dump();
  if (payload.size() > 0xffffffffull)
    throw ProtocolError("payload exceeds frame size limit");
  std::string frame;
  frame.reserve(payload.size() + 4);
  const auto n = static_cast<std::uint32_t>(payload.size());
  frame.push_back(static_cast<char>((n >> 24) & 0xff));
  frame.push_back(static_cast<char>((n >> 16) & 0xff));
  frame.push_back(static_cast<char>((n >> 8) & 0xff));
  frame.push_back(static_cast<char>(n & 0xff));
  frame += payload;
  return frame;
}

struct DecodeResult {
  bool needs_more = false;  // incomplete frame; nothing consumed
  WireMessage message;
  std::size_t consumed = 0;  // bytes of the buffer holding this frame
};

// Decodes the first complete frame of `data`. A short buffer reports
// needs_more; a complete but malformed frame (bad JSON, unknown type,
// missing/ill-typed payload fields) throws ProtocolError, which ends the
// session.
inline DecodeResult decode_message(const std::string& data) {
  DecodeResult res;
  if (data.size() < 4) {
    res.needs_more = true;
    return res;
  }
  const std::uint32_t n =
      (static_cast<std::uint32_t>(static_cast<unsigned char>(data[0])) << 24) |
      (static_cast<std::uint32_t>(static_cast<unsigned char>(data[1])) << 16) |
      (static_cast<std::uint32_t>(static_cast<unsigned char>(data[2])) << 8) |
      static_cast<std::uint32_t>(static_cast<unsigned char>(data[3]));
  if (data.size() < 4ull + n) {
    res.needs_more = true;
    return res;
  }

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(data.substr(4, n));
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed frame payload: ") + e.what());
  }

  using T = WireMessage::Type;
  WireMessage m;
  try {
    const auto tag = j.at("type").get<std::string>();
    auto type = wire_detail::tag_type(tag);
    if (!type) throw ProtocolError("unknown message type: " + tag);
    m.type = *type;
    m.version = j.at("v").get<int>();
    switch (m.type) {
      case T::kHello:
        break;
      case T::kSpaces:
        m.observation_space =
            wire_detail::space_from_json(j.at("observation_space"));
        m.action_space = wire_detail::space_from_json(j.at("action_space"));
        break;
      case T::kReset:
        m.seed = j.at("seed").get<std::uint64_t>();
        break;
      case T::kResetResult:
        m.observation = j.at("observation").get<std::vector<double>>();
        break;
      case T::kStep: {
        const auto& a = j.at("action");
        if (a.is_array())
          m.action = a.get<std::vector<double>>();
        else if (a.is_number_integer())
          m.discrete_action = a.get<std::int64_t>();
        else
          throw ProtocolError("step action must be an array or an integer");
        break;
      }
      case T::kStepResult:
        m.observation = j.at("observation").get<std::vector<double>>();
        m.reward = j.at("reward").get<double>();
        m.terminated = j.at("terminated").get<bool>();
        m.truncated = j.at("truncated").get<bool>();
        break;
      case T::kClose:
        break;
      case T::kError:
        m.code = j.at("code").get<std::string>();
        m.message = j.at("message").get<std::string>();
        break;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed message payload: ") + e.what());
  }
  res.message = std::move(m);
  res.consumed = 4ull + n;
  return res;
}

}  // namespace rlx

#endif  // RLX_WIRE_HPP_
