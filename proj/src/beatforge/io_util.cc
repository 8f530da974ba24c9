// beatforge/io_util.cc

// Copyright 2026  BeatForge Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "beatforge/io_util.h"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "beatforge/common.h"

namespace beatforge {

namespace fs = std::filesystem;

void WriteFileAtomic(const std::string& path, const std::string& bytes) {
  fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw BfError(ErrorKind::kIo, "cannot open for writing: " + tmp.string());
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      throw BfError(ErrorKind::kIo, "short write: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw BfError(ErrorKind::kIo, "rename failed: " + path);
  }
}

std::string ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw BfError(ErrorKind::kIo, "cannot open: " + path);
  }
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return bytes;
}

void AppendU32(std::string* out, uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out->append(buf, 4);
}

void AppendU64(std::string* out, uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out->append(buf, 8);
}

void AppendF32(std::string* out, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, 4);
  AppendU32(out, bits);
}

void AppendF32Array(std::string* out, const float* data, size_t count) {
  // Host is little-endian; blocks are memcpy'd for speed.
  out->append(reinterpret_cast<const char*>(data), count * sizeof(float));
}

void ByteReader::Require(size_t count) {
  if (pos_ + count > bytes_.size()) {
    throw BfError(ErrorKind::kIo, what_ + ": truncated");
  }
}

uint32_t ByteReader::ReadU32() {
  Require(4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
  }
  pos_ += 4;
  return v;
}

uint64_t ByteReader::ReadU64() {
  Require(8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
  }
  pos_ += 8;
  return v;
}

float ByteReader::ReadF32() {
  uint32_t bits = ReadU32();
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

void ByteReader::ReadF32Array(float* out, size_t count) {
  Require(count * sizeof(float));
  std::memcpy(out, bytes_.data() + pos_, count * sizeof(float));
  pos_ += count * sizeof(float);
}

void ByteReader::ReadBytes(char* out, size_t count) {
  Require(count);
  std::memcpy(out, bytes_.data() + pos_, count);
  pos_ += count;
}

}  // namespace beatforge
