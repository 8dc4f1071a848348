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

#ifndef RLX_TCP_HPP_
#define RLX_TCP_HPP_

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>
#include <utility>

#include "rlx/error.hpp"

namespace rlx {

// Minimal RAII TCP socket. Blocking I/O; connect supports a timeout.
class TcpSocket {
 public:
  TcpSocket() = default;
  explicit TcpSocket(int fd) : fd_(fd) {}
  ~TcpSocket() { close_fd(); }

  TcpSocket(TcpSocket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
  TcpSocket& operator=(TcpSocket&& other) noexcept {
    if (this != &other) {
      close_fd();
      fd_ = other.fd_;
      other.fd_ = -1;
    }
    return *this;
  }
  TcpSocket(const TcpSocket&) = delete;
  TcpSocket& operator=(const TcpSocket&) = delete;

  bool valid() const { return fd_ >= 0; }
  int fd() const { return fd_; }

  static TcpSocket connect(const std::string& host, std::uint16_t port,
                           int timeout_ms) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* info = nullptr;
    const std::string service = std::to_string(port);
    if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &info) != 0)
      throw TransportError("cannot resolve " + host);

    int fd = -1;
    std::string last_error = "no addresses";
    for (addrinfo* ai = info; ai != nullptr; ai = ai->ai_next) {
      fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
      if (fd < 0) continue;
      // non-blocking connect so the timeout is enforceable
      const int flags = ::fcntl(fd, F_GETFL, 0);
      ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
      int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
      if (rc < 0 && errno == EINPROGRESS) {
        pollfd pfd{fd, POLLOUT, 0};
        rc = ::poll(&pfd, 1, timeout_ms);
        if (rc == 0) {
          last_error = "connect timeout";
          ::close(fd);
          fd = -1;
          continue;
        }
        int err = 0;
        socklen_t len = sizeof(err);
        ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
        if (err != 0) {
          last_error = std::strerror(err);
          ::close(fd);
          fd = -1;
          continue;
        }
      } else if (rc < 0) {
        last_error = std::strerror(errno);
        ::close(fd);
        fd = -1;
        continue;
      }
      ::fcntl(fd, F_SETFL, flags);
      break;
    }
    ::freeaddrinfo(info);
    if (fd < 0)
      throw TransportError("cannot connect to " + host + ":" + service +
                           " (" + last_error + ")");
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return TcpSocket(fd);
  }

  void send_all(const std::string& data) {
    std::size_t sent = 0;
    while (sent < data.size()) {
      const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent,
                               MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError(std::string("send failed: ") +
                             std::strerror(errno));
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  enum class RecvStatus { kData, kClosed, kTimeout };

  // Appends up to 64 KiB to `buffer`; returns false on orderly peer close.
  // With SO_RCVTIMEO set, expiry is a TransportError.
  bool recv_some(std::string& buffer) {
    switch (recv_some_or_timeout(buffer)) {
      case RecvStatus::kData: return true;
      case RecvStatus::kClosed: return false;
      case RecvStatus::kTimeout: throw TransportError("recv timed out");
    }
    return false;
  }

  // Like recv_some but surfaces SO_RCVTIMEO expiry instead of retrying, so
  // callers can interleave shutdown checks with blocking reads.
  RecvStatus recv_some_or_timeout(std::string& buffer) {
    char chunk[65536];
    for (;;) {
      const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
      if (n < 0) {
        if (errno == EINTR) continue;
        if (errno == EAGAIN || errno == EWOULDBLOCK)
          return RecvStatus::kTimeout;
        throw TransportError(std::string("recv failed: ") +
                             std::strerror(errno));
      }
      if (n == 0) return RecvStatus::kClosed;
      buffer.append(chunk, static_cast<std::size_t>(n));
      return RecvStatus::kData;
    }
  }

  void set_recv_timeout(int timeout_ms) {
    timeval tv{};
    tv.tv_sec = timeout_ms / 1000;
    tv.tv_usec = (timeout_ms % 1000) * 1000;
    ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  }

  void shutdown_both() {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
  }

 private:
  void close_fd() {
    if (fd_ >= 0) {
      ::close(fd_);
      fd_ = -1;
    }
  }

  int fd_ = -1;
};

// Listening socket with a poll-based accept so servers can stop cleanly.
class TcpListener {
 public:
  TcpListener(const std::string& host, std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0)
      throw TransportError(std::string("socket failed: ") +
                           std::strerror(errno));
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (host.empty() || host == "0.0.0.0") {
      addr.sin_addr.s_addr = INADDR_ANY;
    } else if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
      ::close(fd_);
      throw TransportError("bind address must be an IPv4 literal: " + host);
    }
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
      const std::string why = std::strerror(errno);
      ::close(fd_);
      throw TransportError("cannot bind " + host + ":" +
                           std::to_string(port) + " (" + why + ")");
    }
    if (::listen(fd_, 16) < 0) {
      const std::string why = std::strerror(errno);
      ::close(fd_);
      throw TransportError("listen failed: " + why);
    }
  }

  ~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
  }
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  // Port actually bound (useful after binding port 0).
  std::uint16_t bound_port() const {
    sockaddr_in addr{};
    socklen_t len = sizeof(addr);
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    return ntohs(addr.sin_port);
  }

  // Waits up to timeout_ms; returns an invalid socket on timeout.
  TcpSocket accept(int timeout_ms) {
    pollfd pfd{fd_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, timeout_ms);
    if (rc <= 0) return TcpSocket();
    const int client = ::accept(fd_, nullptr, nullptr);
    if (client < 0)
      throw TransportError(std::string("accept failed: ") +
                           std::strerror(errno));
    int one = 1;
    ::setsockopt(client, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return TcpSocket(client);
  }

 private:
  int fd_ = -1;
};

// Splits "host:port". The host may be empty ("": any interface).
inline std::pair<std::string, std::uint16_t> split_address(
    const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos)
    throw ConfigError("address must be host:port, got: " + address);
  const std::string host = address.substr(0, colon);
  const std::string port_str = address.substr(colon + 1);
  int port = 0;
  try {
    port = std::stoi(port_str);
  } catch (...) {
    throw ConfigError("bad port in address: " + address);
  }
  if (port < 0 || port > 65535)
    throw ConfigError("port out of range in address: " + address);
  return {host, static_cast<std::uint16_t>(port)};
}

}  // namespace rlx

#endif  // RLX_TCP_HPP_
