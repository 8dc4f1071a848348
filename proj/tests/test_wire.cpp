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

#include "rlx/wire.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <string>

#include "rlx/rng.hpp"

namespace {

using rlx::Space;
using rlx::WireMessage;

TEST(Wire, CloseFrameIsLengthPrefixedJson) {
  const std::string frame = rlx::encode_message(WireMessage::close());
  ASSERT_GE(frame.size(), 4u);
  const auto n = static_cast<std::size_t>(
      (static_cast<unsigned char>(frame[0]) << 24) |
      (static_cast<unsigned char>(frame[1]) << 16) |
      (static_cast<unsigned char>(frame[2]) << 8) |
      static_cast<unsigned char>(frame[3]));
  EXPECT_EQ(frame.size(), n + 4);
  const auto j = nlohmann::json::parse(frame.substr(4));
  EXPECT_EQ(j.at("type"), "close");
  EXPECT_EQ(j.at("v"), 1);
}

TEST(Wire, StepActionRoundTrips) {
  auto m = WireMessage::step_box({0.5});
  auto d = rlx::decode_message(rlx::encode_message(m));
  ASSERT_FALSE(d.needs_more);
  EXPECT_TRUE(d.message == m);
}

TEST(Wire, ResetSeedRoundTrips) {
  auto d = rlx::decode_message(rlx::encode_message(WireMessage::reset(7)));
  ASSERT_FALSE(d.needs_more);
  EXPECT_EQ(d.message.type, WireMessage::Type::kReset);
  EXPECT_EQ(*d.message.seed, 7u);
}

TEST(Wire, TruncatedFrameNeedsMoreBytes) {
  const std::string frame = rlx::encode_message(WireMessage::reset(9));
  // a frame whose prefix promises more than the buffer holds
  EXPECT_TRUE(rlx::decode_message(frame.substr(0, 3)).needs_more);
  EXPECT_TRUE(rlx::decode_message(frame.substr(0, frame.size() - 1)).needs_more);
}

TEST(Wire, UnknownTypeIsProtocolError) {
  nlohmann::json j;
  j["type"] = "warp";
  j["v"] = 1;
  const std::string payload = j.dump();
  std::string frame;
  const auto n = static_cast<std::uint32_t>(payload.size());
  frame.push_back(static_cast<char>((n >> 24) & 0xff));
  frame.push_back(static_cast<char>((n >> 16) & 0xff));
  frame.push_back(static_cast<char>((n >> 8) & 0xff));
  frame.push_back(static_cast<char>(n & 0xff));
  frame += payload;
  EXPECT_THROW(rlx::decode_message(frame), rlx::ProtocolError);
}

TEST(Wire, MalformedJsonIsProtocolError) {
  std::string frame;
  frame.push_back(0);
  frame.push_back(0);
  frame.push_back(0);
  frame.push_back(5);
  frame += "{oops";
  EXPECT_THROW(rlx::decode_message(frame), rlx::ProtocolError);
}

TEST(Wire, MissingPayloadFieldIsProtocolError) {
  nlohmann::json j;
  j["type"] = "step_result";
  j["v"] = 1;
  j["observation"] = {0.0};
  // reward/terminated/truncated missing
  const std::string payload = j.dump();
  std::string frame;
  const auto n = static_cast<std::uint32_t>(payload.size());
  frame.push_back(static_cast<char>((n >> 24) & 0xff));
  frame.push_back(static_cast<char>((n >> 16) & 0xff));
  frame.push_back(static_cast<char>((n >> 8) & 0xff));
  frame.push_back(static_cast<char>(n & 0xff));
  frame += payload;
  EXPECT_THROW(rlx::decode_message(frame), rlx::ProtocolError);
}

TEST(Wire, IncompletePayloadRejectedAtEncode) {
  WireMessage m;
  m.type = WireMessage::Type::kSpaces;  // spaces not filled in
  EXPECT_THROW(rlx::encode_message(m), rlx::ProtocolError);
  WireMessage s;
  s.type = WireMessage::Type::kStep;  // no action
  EXPECT_THROW(rlx::encode_message(s), rlx::ProtocolError);
}

// Generator for arbitrary valid messages, used by the round-trip property.
WireMessage random_message(rlx::Rng& rng) {
  auto random_vec = [&](int max_len) {
    const auto len = 1 + rng.bounded(static_cast<std::uint64_t>(max_len));
    std::vector<double> v(len);
    for (auto& x : v) {
      // mix magnitudes, exact integers and subnormal-ish values
      switch (rng.bounded(4)) {
        case 0: x = rng.normal(); break;
        case 1: x = rng.normal() * 1e12; break;
        case 2: x = rng.normal() * 1e-12; break;
        default: x = static_cast<double>(static_cast<int>(rng.bounded(100))) - 50;
      }
    }
    return v;
  };
  auto random_space = [&]() {
    if (rng.bounded(2) == 0)
      return Space::discrete(1 + static_cast<std::int64_t>(rng.bounded(10)));
    const auto dim = 1 + rng.bounded(4);
    std::vector<float> lo(dim), hi(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      lo[i] = static_cast<float>(rng.uniform(-10, 0));
      hi[i] = static_cast<float>(rng.uniform(0.25, 10));
    }
    return Space::box(lo, hi);
  };
  auto random_text = [&](int max_len) {
    const auto len = rng.bounded(static_cast<std::uint64_t>(max_len));
    std::string s;
    const std::string alphabet =
        "abcdefghijklmnopqrstuvwxyz0123456789 _-\"\\/{}[]:\n\t";
    for (std::uint64_t i = 0; i < len; ++i)
      s.push_back(alphabet[rng.bounded(alphabet.size())]);
    return s;
  };

  switch (rng.bounded(8)) {
    case 0: return WireMessage::hello();
    case 1: return WireMessage::spaces(random_space(), random_space());
    case 2: return WireMessage::reset(rng.next_u64());
    case 3: return WireMessage::reset_result(random_vec(6));
    case 4:
      if (rng.bounded(2) == 0) return WireMessage::step_box(random_vec(6));
      return WireMessage::step_discrete(
          static_cast<std::int64_t>(rng.bounded(1000)) - 500);
    case 5:
      return WireMessage::step_result(random_vec(6), rng.normal() * 100,
                                      rng.bounded(2) == 0,
                                      rng.bounded(2) == 0);
    case 6: return WireMessage::close();
    default: return WireMessage::error(random_text(12), random_text(40));
  }
}

// decode(encode(m)) == m over the full message space, including doubles that
// need every bit to round-trip.
TEST(Wire, EncodeDecodeIdentityProperty) {
  rlx::Rng rng(20260101);
  for (int i = 0; i < 10000; ++i) {
    const WireMessage m = random_message(rng);
    const auto d = rlx::decode_message(rlx::encode_message(m));
    ASSERT_FALSE(d.needs_more);
    ASSERT_TRUE(d.message == m) << "round-trip mismatch at case " << i;
  }
}

// Frames arriving glued together decode one at a time.
TEST(Wire, BackToBackFramesDecodeSequentially) {
  std::string buf = rlx::encode_message(WireMessage::reset(1)) +
                    rlx::encode_message(WireMessage::close());
  auto first = rlx::decode_message(buf);
  ASSERT_FALSE(first.needs_more);
  EXPECT_EQ(first.message.type, WireMessage::Type::kReset);
  buf.erase(0, first.consumed);
  auto second = rlx::decode_message(buf);
  ASSERT_FALSE(second.needs_more);
  EXPECT_EQ(second.message.type, WireMessage::Type::kClose);
}

}  // namespace
