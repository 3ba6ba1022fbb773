/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mxbf Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mxbf/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace mxbf {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

constexpr std::uint16_t kVersion = 1;

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw DataError(path + ": cannot open for writing");
  }
  template <typename T>
  void put(T v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void bytes(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
  void finish() {
    out_.flush();
    if (!out_) throw DataError(path_ + ": write failed");
  }

 private:
  std::ofstream out_;
  std::string path_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw DataError(path + ": cannot open for reading");
  }
  template <typename T>
  T get() {
    T v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in_) throw DataError(path_ + ": truncated file");
    return v;
  }
  void bytes(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!in_) throw DataError(path_ + ": truncated file");
  }
  void expect_end() {
    if (in_.peek() != std::char_traits<char>::eof()) throw DataError(path_ + ": trailing bytes");
  }
  void magic(const char* m) {
    char buf[4];
    bytes(buf, 4);
    if (std::memcmp(buf, m, 4) != 0) throw DataError(path_ + ": bad magic, expected " + std::string(m, 4));
    const auto v = get<std::uint16_t>();
    if (v != kVersion) throw DataError(path_ + ": unsupported version " + std::to_string(v));
  }
  const std::string& path() const { return path_; }

 private:
  std::ifstream in_;
  std::string path_;
};

std::uint32_t checked_u32(std::size_t v, const std::string& what) {
  if (v > 0xffffffffu) throw DataError(what + " does not fit in 32 bits");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

void write_channel_data(const std::string& path, const ChannelData& d) {
  if (d.samples.size() != d.n_tx * d.n_rx * d.n_t) throw DataError("channel data shape mismatch");
  Writer w(path);
  w.bytes("MBCD", 4);
  w.put<std::uint16_t>(kVersion);
  w.put<std::uint32_t>(checked_u32(d.n_tx, "n_tx"));
  w.put<std::uint32_t>(checked_u32(d.n_rx, "n_rx"));
  w.put<std::uint32_t>(checked_u32(d.n_t, "n_t"));
  w.put<double>(d.sampling_rate);
  w.put<double>(d.start_time);
  w.put<double>(d.center_frequency);
  w.bytes(d.samples.data(), d.samples.size() * sizeof(float));
  w.finish();
}

ChannelData read_channel_data(const std::string& path) {
  Reader r(path);
  r.magic("MBCD");
  ChannelData d;
  d.n_tx = r.get<std::uint32_t>();
  d.n_rx = r.get<std::uint32_t>();
  d.n_t = r.get<std::uint32_t>();
  d.sampling_rate = r.get<double>();
  d.start_time = r.get<double>();
  d.center_frequency = r.get<double>();
  if (!(d.sampling_rate > 0.0) || !(d.center_frequency > 0.0)) {
    throw DataError(path + ": invalid sampling rate or center frequency");
  }
  d.samples.resize(d.n_tx * d.n_rx * d.n_t);
  r.bytes(d.samples.data(), d.samples.size() * sizeof(float));
  r.expect_end();
  for (float v : d.samples) {
    if (!std::isfinite(v)) throw DataError(path + ": non-finite sample");
  }
  return d;
}

void write_volume(const std::string& path, const BeamformedVolume& v) {
  const PixelGrid& g = v.grid;
  if (v.values.size() != g.size()) throw DataError("volume shape mismatch");
  Writer w(path);
  w.bytes("MBVL", 4);
  w.put<std::uint16_t>(kVersion);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(v.kind));
  w.put<std::uint32_t>(checked_u32(g.nx, "nx"));
  w.put<std::uint32_t>(checked_u32(g.ny, "ny"));
  w.put<std::uint32_t>(checked_u32(g.nz, "nz"));
  w.put<double>(g.spacing.x);
  w.put<double>(g.spacing.y);
  w.put<double>(g.spacing.z);
  w.put<double>(g.origin.x);
  w.put<double>(g.origin.y);
  w.put<double>(g.origin.z);
  std::vector<float> buf;
  if (v.kind == VolumeKind::envelope) {
    buf.reserve(v.values.size());
    for (const auto& c : v.values) buf.push_back(static_cast<float>(c.real()));
  } else {
    buf.reserve(2 * v.values.size());
    for (const auto& c : v.values) {
      buf.push_back(static_cast<float>(c.real()));
      buf.push_back(static_cast<float>(c.imag()));
    }
  }
  w.bytes(buf.data(), buf.size() * sizeof(float));
  w.finish();
}

BeamformedVolume read_volume(const std::string& path) {
  Reader r(path);
  r.magic("MBVL");
  BeamformedVolume v;
  const auto kind = r.get<std::uint8_t>();
  if (kind > 1) throw DataError(path + ": unknown volume kind " + std::to_string(kind));
  v.kind = static_cast<VolumeKind>(kind);
  PixelGrid& g = v.grid;
  g.nx = r.get<std::uint32_t>();
  g.ny = r.get<std::uint32_t>();
  g.nz = r.get<std::uint32_t>();
  g.spacing.x = r.get<double>();
  g.spacing.y = r.get<double>();
  g.spacing.z = r.get<double>();
  g.origin.x = r.get<double>();
  g.origin.y = r.get<double>();
  g.origin.z = r.get<double>();
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(path + ": " + e.what());
  }
  const std::size_t n = g.size();
  const std::size_t per = v.kind == VolumeKind::envelope ? 1 : 2;
  std::vector<float> buf(n * per);
  r.bytes(buf.data(), buf.size() * sizeof(float));
  r.expect_end();
  v.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    v.values[i] = per == 1 ? cdouble(buf[i], 0.0) : cdouble(buf[2 * i], buf[2 * i + 1]);
  }
  v.coverage.assign(n, 1);
  return v;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path + ": cannot open for writing");
  out << text;
  if (!out) throw DataError(path + ": write failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

namespace {

std::string hex(const unsigned char* p, unsigned n) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (unsigned i = 0; i < n; ++i) {
    s.push_back(digits[p[i] >> 4]);
    s.push_back(digits[p[i] & 15]);
  }
  return s;
}

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("SHA-256 initialisation failed");
    }
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* p, std::size_t n) { EVP_DigestUpdate(ctx_, p, n); }
  std::string hex_digest() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx_, md, &len);
    return hex(md, len);
  }

 private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.hex_digest();
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open for hashing");
  Sha256 h;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex_digest();
}

}  // namespace mxbf
