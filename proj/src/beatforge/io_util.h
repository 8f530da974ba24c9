// beatforge/io_util.h

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

#ifndef BEATFORGE_IO_UTIL_H_
#define BEATFORGE_IO_UTIL_H_

#include <cstdint>
#include <string>
#include <vector>

namespace beatforge {

// Writes to <path>.tmp in the same directory, then renames over the target.
// Either the old content or the full new content is visible, never a prefix.
void WriteFileAtomic(const std::string& path, const std::string& bytes);

std::string ReadFileBytes(const std::string& path);

// Little-endian scalar append/parse helpers for the binary file formats.
void AppendU32(std::string* out, uint32_t v);
void AppendU64(std::string* out, uint64_t v);
void AppendF32(std::string* out, float v);
void AppendF32Array(std::string* out, const float* data, size_t count);

class ByteReader {
 public:
  ByteReader(const std::string& bytes, std::string what)
      : bytes_(bytes), what_(std::move(what)) {}

  uint32_t ReadU32();
  uint64_t ReadU64();
  float ReadF32();
  void ReadF32Array(float* out, size_t count);
  void ReadBytes(char* out, size_t count);
  bool AtEnd() const { return pos_ == bytes_.size(); }

 private:
  void Require(size_t count);

  const std::string& bytes_;
  std::string what_;
  size_t pos_ = 0;
};

}  // namespace beatforge

#endif  // BEATFORGE_IO_UTIL_H_
