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

#ifndef RLX_REMOTE_ENV_HPP_
#define RLX_REMOTE_ENV_HPP_

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rlx/env.hpp"
#include "rlx/error.hpp"
#include "rlx/tcp.hpp"
#include "rlx/wire.hpp"

namespace rlx {

inline constexpr int kHandshakeTimeoutMs = 10000;

// Client-side adapter: an Env whose dynamics live behind a socket. The
// constructor performs the handshake (hello exchange, version check, spaces);
// reset/step block until the reply arrives. Transport failures surface as
// TransportError, wire violations as ProtocolError; neither ever yields a
// corrupt StepResult.
class RemoteEnv : public Env {
 public:
  RemoteEnv(const std::string& host, std::uint16_t port,
            int handshake_timeout_ms = kHandshakeTimeoutMs)
      : socket_(TcpSocket::connect(host, port, handshake_timeout_ms)) {
    socket_.set_recv_timeout(handshake_timeout_ms);
    send(WireMessage::hello());
    const WireMessage their_hello = receive();
    if (their_hello.type != WireMessage::Type::kHello)
      throw ProtocolError("expected hello, got another message type");
    if (their_hello.version != 1)
      throw ProtocolError("protocol version mismatch: server speaks v" +
                          std::to_string(their_hello.version));
    const WireMessage spaces = receive();
    if (spaces.type != WireMessage::Type::kSpaces)
      throw ProtocolError("expected spaces after hello");
    obs_space_ = *spaces.observation_space;
    act_space_ = *spaces.action_space;
    // replies may take arbitrarily long once the episode is running
    socket_.set_recv_timeout(0);
  }

  ~RemoteEnv() override {
    try {
      if (socket_.valid()) send(WireMessage::close());
    } catch (...) {
    }
  }

  const Space& observation_space() const override { return obs_space_; }
  const Space& action_space() const override { return act_space_; }

  std::vector<float> reset(std::optional<std::uint64_t> seed) override {
    // the wire always carries an explicit seed; autoreset continuations
    // derive one from the env's stream counter
    const std::uint64_t s = seed ? *seed : next_auto_seed();
    send(WireMessage::reset(s));
    const WireMessage reply = expect_reply(WireMessage::Type::kResetResult);
    return to_float(*reply.observation);
  }

  StepResult step(std::span<const float> action) override {
    if (act_space_.kind == Space::Kind::kDiscrete) {
      if (action.size() != 1)
        throw ConfigError("remote env: discrete action must be 1 value");
      send(WireMessage::step_discrete(
          static_cast<std::int64_t>(std::llround(action[0]))));
    } else {
      std::vector<double> a(action.begin(), action.end());
      if (a.size() != act_space_.low.size())
        throw ConfigError("remote env: action width mismatch");
      send(WireMessage::step_box(std::move(a)));
    }
    const WireMessage reply = expect_reply(WireMessage::Type::kStepResult);
    StepResult r;
    r.observation = to_float(*reply.observation);
    r.reward = *reply.reward;
    r.terminated = *reply.terminated;
    r.truncated = *reply.truncated;
    return r;
  }

 private:
  std::uint64_t next_auto_seed() {
    // distinct per autoreset, deterministic per connection
    auto_seed_counter_ += 1;
    return 0x8000000000000000ull + auto_seed_counter_;
  }

  void send(const WireMessage& m) { socket_.send_all(encode_message(m)); }

  WireMessage receive() {
    for (;;) {
      DecodeResult d = decode_message(buffer_);
      if (!d.needs_more) {
        buffer_.erase(0, d.consumed);
        return d.message;
      }
      if (!socket_.recv_some(buffer_))
        throw TransportError("server closed the connection");
    }
  }

  WireMessage expect_reply(WireMessage::Type want) {
    const WireMessage reply = receive();
    if (reply.type == WireMessage::Type::kError)
      throw ProtocolError("server error [" + *reply.code + "] " +
                          *reply.message);
    if (reply.type != want)
      throw ProtocolError("unexpected reply type");
    return reply;
  }

  static std::vector<float> to_float(const std::vector<double>& v) {
    return std::vector<float>(v.begin(), v.end());
  }

  TcpSocket socket_;
  std::string buffer_;
  Space obs_space_;
  Space act_space_;
  std::uint64_t auto_seed_counter_ = 0;
};

// Connects to a remote environment server at "host:port".
inline std::unique_ptr<RemoteEnv> remote_env_connect(
    const std::string& address, int handshake_timeout_ms = kHandshakeTimeoutMs) {
  auto [host, port] = split_address(address);
  if (host.empty()) host = "127.0.0.1";
  return std::make_unique<RemoteEnv>(host, port, handshake_timeout_ms);
}

}  // namespace rlx

#endif  // RLX_REMOTE_ENV_HPP_
