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

#ifndef RLX_CHECKPOINT_HPP_
#define RLX_CHECKPOINT_HPP_

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rlx/error.hpp"
#include "rlx/param_set.hpp"

namespace rlx {

// Checkpoint layout, bit-exact:
//   RLXKIT-CKPT v1\n
//   entries <N>\n
//   <name> <rank> <dim...> <byte_offset>\n        (N manifest lines)
//   payload <payload_bytes>\n
//   <raw little-endian float32 values, entry after entry>
// Entries appear in ParamSet iteration order; offsets index into the payload.
inline constexpr const char* kCheckpointMagic = "RLXKIT-CKPT v1";

namespace detail {

inline void append_f32_le(std::string& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  out.push_back(static_cast<char>(bits & 0xff));
  out.push_back(static_cast<char>((bits >> 8) & 0xff));
  out.push_back(static_cast<char>((bits >> 16) & 0xff));
  out.push_back(static_cast<char>((bits >> 24) & 0xff));
}

inline float read_f32_le(const char* p) {
  std::uint32_t bits = (static_cast<std::uint32_t>(static_cast<unsigned char>(p[0]))) |
                       (static_cast<std::uint32_t>(static_cast<unsigned char>(p[1])) << 8) |
                       (static_cast<std::uint32_t>(static_cast<unsigned char>(p[2])) << 16) |
                       (static_cast<std::uint32_t>(static_cast<unsigned char>(p[3])) << 24);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

}  // namespace detail

inline std::string serialize_checkpoint(const ParamSet<float>& params) {
  std::string manifest;
  std::string payload;
  std::uint64_t offset = 0;
  for (const auto& e : params.entries) {
    if (e.name.find_first_of(" \t\n") != std::string::npos)
      throw IoError("checkpoint entry name contains whitespace: " + e.name);
    manifest += e.name + " " + std::to_string(e.shape.size());
    for (auto d : e.shape) manifest += " " + std::to_string(d);
    manifest += " " + std::to_string(offset) + "\n";
    for (float v : e.values) detail::append_f32_le(payload, v);
    offset += 4ull * e.values.size();
  }
  std::string out = std::string(kCheckpointMagic) + "\n";
  out += "entries " + std::to_string(params.entries.size()) + "\n";
  out += manifest;
  out += "payload " + std::to_string(payload.size()) + "\n";
  out += payload;
  return out;
}

inline ParamSet<float> parse_checkpoint(const std::string& data) {
  std::size_t pos = 0;
  auto next_line = [&]() {
    std::size_t nl = data.find('\n', pos);
    if (nl == std::string::npos) throw IoError("checkpoint truncated");
    std::string line = data.substr(pos, nl - pos);
    pos = nl + 1;
    return line;
  };

  if (next_line() != kCheckpointMagic)
    throw IoError("not a checkpoint file (bad magic)");
  std::istringstream hdr(next_line());
  std::string word;
  std::size_t n_entries = 0;
  hdr >> word >> n_entries;
  if (word != "entries" || hdr.fail())
    throw IoError("checkpoint: malformed entries line");

  struct Rec {
    std::string name;
    std::vector<Eigen::Index> shape;
    std::uint64_t offset;
  };
  std::vector<Rec> recs;
  recs.reserve(n_entries);
  for (std::size_t i = 0; i < n_entries; ++i) {
    std::istringstream ls(next_line());
    Rec r;
    std::size_t rank = 0;
    ls >> r.name >> rank;
    for (std::size_t d = 0; d < rank; ++d) {
      Eigen::Index dim = 0;
      ls >> dim;
      r.shape.push_back(dim);
    }
    ls >> r.offset;
    if (ls.fail()) throw IoError("checkpoint: malformed manifest line " +
                                 std::to_string(i));
    recs.push_back(std::move(r));
  }
  std::istringstream ps(next_line());
  std::uint64_t payload_bytes = 0;
  ps >> word >> payload_bytes;
  if (word != "payload" || ps.fail())
    throw IoError("checkpoint: malformed payload line");
  if (data.size() - pos != payload_bytes)
    throw IoError("checkpoint: payload size mismatch");

  ParamSet<float> out;
  for (const auto& r : recs) {
    auto& e = out.add(r.name, r.shape);
    const std::uint64_t need = r.offset + 4ull * e.values.size();
    if (need > payload_bytes)
      throw IoError("checkpoint: entry " + r.name + " overruns payload");
    const char* base = data.data() + pos + r.offset;
    for (std::size_t j = 0; j < e.values.size(); ++j)
      e.values[j] = detail::read_f32_le(base + 4 * j);
  }
  return out;
}

inline void save_checkpoint(const std::string& path,
                            const ParamSet<float>& params) {
  std::string blob = serialize_checkpoint(params);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open checkpoint for writing: " + path);
  f.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!f) throw IoError("checkpoint write failed: " + path);
}

inline ParamSet<float> load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open checkpoint: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_checkpoint(ss.str());
}

}  // namespace rlx

#endif  // RLX_CHECKPOINT_HPP_
