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

#ifndef RLX_ENV_SERVER_HPP_
#define RLX_ENV_SERVER_HPP_

#include <atomic>
#include <memory>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rlx/env.hpp"
#include "rlx/error.hpp"
#include "rlx/tcp.hpp"
#include "rlx/wire.hpp"

namespace rlx {

// Reference server hosting one environment per session. Sessions are served
// one at a time: accept, handshake, answer reset/step until close or error,
// then accept the next connection with a fresh env instance.
//
// The session admits exactly hello -> spaces -> (reset -> step*)* -> close.
// Any other order draws an error message (code "bad_state") and ends the
// session; malformed frames draw "protocol_error"; a hello with the wrong
// version draws "version_mismatch".
class EnvServer {
 public:
  EnvServer(EnvFactory factory, const std::string& host, std::uint16_t port)
      : factory_(std::move(factory)), listener_(host, port) {}

  ~EnvServer() { stop(); }

  std::uint16_t bound_port() const { return listener_.bound_port(); }

  // Serves sessions until stop() is called (or forever).
  void run() {
    while (!stop_.load()) {
      TcpSocket session = listener_.accept(100);
      if (!session.valid()) continue;
      serve_session(std::move(session));
      ++sessions_served_;
    }
  }

  void start() {
    stop_.store(false);
    thread_ = std::thread([this] { run(); });
  }

  void stop() {
    stop_.store(true);
    if (thread_.joinable()) thread_.join();
  }

  int sessions_served() const { return sessions_served_.load(); }

 private:
  enum class State { kAwaitHello, kReady };

  void serve_session(TcpSocket sock) {
    auto env = factory_();
    std::string buffer;
    State state = State::kAwaitHello;
    bool has_reset = false;

    // short receive timeout so stop() can interrupt an idle session
    sock.set_recv_timeout(100);

    auto send = [&](const WireMessage& m) { sock.send_all(encode_message(m)); };
    auto fail = [&](const std::string& code, const std::string& why) {
      try {
        send(WireMessage::error(code, why));
      } catch (const TransportError&) {
      }
    };

    try {
      for (;;) {
        DecodeResult d = decode_message(buffer);
        if (d.needs_more) {
          switch (sock.recv_some_or_timeout(buffer)) {
            case TcpSocket::RecvStatus::kData:
              break;
            case TcpSocket::RecvStatus::kClosed:
              return;  // peer gone
            case TcpSocket::RecvStatus::kTimeout:
              if (stop_.load()) return;
              break;
          }
          continue;
        }
        buffer.erase(0, d.consumed);
        const WireMessage& m = d.message;

        if (state == State::kAwaitHello) {
          if (m.type != WireMessage::Type::kHello)
            return fail("bad_state", "expected hello first");
          if (m.version != 1)
            return fail("version_mismatch",
                        "server speaks v1, client sent v" +
                            std::to_string(m.version));
          send(WireMessage::hello());
          send(WireMessage::spaces(env->observation_space(),
                                   env->action_space()));
          state = State::kReady;
          continue;
        }

        switch (m.type) {
          case WireMessage::Type::kReset: {
            auto obs = env->reset(*m.seed);
            send(WireMessage::reset_result(
                std::vector<double>(obs.begin(), obs.end())));
            has_reset = true;
            break;
          }
          case WireMessage::Type::kStep: {
            if (!has_reset)
              return fail("bad_state", "step before reset");
            std::vector<float> action;
            if (env->action_space().kind == Space::Kind::kDiscrete) {
              if (!m.discrete_action)
                return fail("bad_message",
                            "discrete env needs an integer action");
              action = {static_cast<float>(*m.discrete_action)};
            } else {
              if (!m.action)
                return fail("bad_message", "box env needs an array action");
              action.assign(m.action->begin(), m.action->end());
            }
            StepResult r;
            try {
              r = env->step(action);
            } catch (const UsageError& e) {
              return fail("bad_state", e.what());
            } catch (const ConfigError& e) {
              return fail("bad_message", e.what());
            }
            send(WireMessage::step_result(
                std::vector<double>(r.observation.begin(),
                                    r.observation.end()),
                r.reward, r.terminated, r.truncated));
            break;
          }
          case WireMessage::Type::kClose:
            return;
          default:
            return fail("bad_state", "message not allowed in this state");
        }
      }
    } catch (const ProtocolError& e) {
      fail("protocol_error", e.what());
    } catch (const TransportError&) {
      // peer vanished mid-session; nothing to answer
    }
  }

  EnvFactory factory_;
  TcpListener listener_;
  std::thread thread_;
  std::atomic<bool> stop_{false};
  std::atomic<int> sessions_served_{0};
};

// Binds and starts a server thread for `factory` at "host:port".
inline std::unique_ptr<EnvServer> serve_env(EnvFactory factory,
                                            const std::string& bind_address) {
  auto [host, port] = split_address(bind_address);
  auto server = std::make_unique<EnvServer>(std::move(factory), host, port);
  server->start();
  return server;
}

}  // namespace rlx

#endif  // RLX_ENV_SERVER_HPP_
