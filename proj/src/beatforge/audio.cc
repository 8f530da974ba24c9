// beatforge/audio.cc

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

#include "beatforge/audio.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "beatforge/common.h"
#include "beatforge/io_util.h"

namespace beatforge {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct RiffChunk {
  std::string id;
  size_t offset;  // payload start
  size_t size;
};

uint32_t ReadU32At(const std::string& b, size_t pos) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<uint32_t>(static_cast<unsigned char>(b[pos + i])) << (8 * i);
  }
  return v;
}

uint16_t ReadU16At(const std::string& b, size_t pos) {
  return static_cast<uint16_t>(static_cast<unsigned char>(b[pos]) |
                               (static_cast<unsigned char>(b[pos + 1]) << 8));
}

}  // namespace

void NormalizeAmplitude(AudioClip* clip) {
  float peak = 0.0f;
  for (float s : clip->samples) peak = std::max(peak, std::abs(s));
  if (peak > 1.0f) {
    const float inv = 1.0f / peak;
    for (float& s : clip->samples) s *= inv;
  }
}

AudioClip Resample(const AudioClip& clip, int target_rate) {
  if (target_rate <= 0 || clip.sample_rate == target_rate) return clip;
  if (clip.samples.empty()) {
    AudioClip out = clip;
    out.sample_rate = target_rate;
    return out;
  }

  const int taps = 16;
  const double ratio = static_cast<double>(clip.sample_rate) / target_rate;
  // Low-pass at the narrower Nyquist when downsampling.
  const double cutoff = std::min(1.0, 1.0 / ratio);
  const size_t n_in = clip.samples.size();
  const size_t n_out = static_cast<size_t>(
      std::ceil(static_cast<double>(n_in) * target_rate / clip.sample_rate));

  AudioClip out;
  out.sample_rate = target_rate;
  out.source_id = clip.source_id;
  out.samples.resize(n_out);

  for (size_t j = 0; j < n_out; ++j) {
    const double center = static_cast<double>(j) * ratio;
    const long first = static_cast<long>(std::floor(center)) - taps + 1;
    const long last = static_cast<long>(std::floor(center)) + taps;
    double acc = 0.0;
    for (long i = first; i <= last; ++i) {
      if (i < 0 || i >= static_cast<long>(n_in)) continue;
      const double x = (static_cast<double>(i) - center) * cutoff;
      double sinc;
      if (std::abs(x) < 1e-12) {
        sinc = 1.0;
      } else {
        sinc = std::sin(kPi * x) / (kPi * x);
      }
      const double window =
          0.5 + 0.5 * std::cos(kPi * (static_cast<double>(i) - center) / taps);
      acc += static_cast<double>(clip.samples[i]) * sinc * cutoff * window;
    }
    out.samples[j] = static_cast<float>(acc);
  }
  return out;
}

AudioClip LoadWavFile(const std::string& path, int target_rate) {
  const std::string bytes = ReadFileBytes(path);
  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 ||
      bytes.compare(8, 4, "WAVE") != 0) {
    throw BfError(ErrorKind::kDecode, "not a RIFF/WAVE file: " + path);
  }

  std::vector<RiffChunk> chunks;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    RiffChunk c;
    c.id = bytes.substr(pos, 4);
    c.size = ReadU32At(bytes, pos + 4);
    c.offset = pos + 8;
    if (c.offset + c.size > bytes.size()) {
      // Tolerate a data chunk whose declared size overruns the file.
      c.size = bytes.size() - c.offset;
    }
    chunks.push_back(c);
    pos = c.offset + c.size + (c.size & 1);  // chunks are word-aligned
  }

  const RiffChunk* fmt = nullptr;
  const RiffChunk* data = nullptr;
  for (const auto& c : chunks) {
    if (c.id == "fmt ") fmt = &c;
    if (c.id == "data") data = &c;
  }
  if (fmt == nullptr || fmt->size < 16) {
    throw BfError(ErrorKind::kDecode, "missing fmt chunk: " + path);
  }
  if (data == nullptr) {
    throw BfError(ErrorKind::kDecode, "missing data chunk: " + path);
  }

  uint16_t format = ReadU16At(bytes, fmt->offset);
  const uint16_t channels = ReadU16At(bytes, fmt->offset + 2);
  const uint32_t sample_rate = ReadU32At(bytes, fmt->offset + 4);
  const uint16_t bits = ReadU16At(bytes, fmt->offset + 14);
  if (format == 0xFFFE && fmt->size >= 40) {
    // WAVE_FORMAT_EXTENSIBLE: the real format tag leads the SubFormat GUID.
    format = ReadU16At(bytes, fmt->offset + 24);
  }
  if (channels == 0 || sample_rate == 0) {
    throw BfError(ErrorKind::kDecode, "bad fmt chunk: " + path);
  }

  const size_t bytes_per_sample = bits / 8;
  if (bytes_per_sample == 0) {
    throw BfError(ErrorKind::kDecode, "bad bit depth: " + path);
  }
  const size_t frame_bytes = bytes_per_sample * channels;
  const size_t n_frames = data->size / frame_bytes;

  AudioClip clip;
  clip.sample_rate = static_cast<int>(sample_rate);
  clip.source_id = path;
  clip.samples.resize(n_frames);

  const char* p = bytes.data() + data->offset;
  for (size_t f = 0; f < n_frames; ++f) {
    double acc = 0.0;
    for (unsigned ch = 0; ch < channels; ++ch) {
      const char* sp = p + f * frame_bytes + ch * bytes_per_sample;
      double v;
      if (format == 1 && bits == 8) {
        v = (static_cast<double>(static_cast<unsigned char>(sp[0])) - 128.0) / 128.0;
      } else if (format == 1 && bits == 16) {
        int16_t raw;
        std::memcpy(&raw, sp, 2);
        v = static_cast<double>(raw) / 32768.0;
      } else if (format == 1 && bits == 24) {
        int32_t raw = (static_cast<unsigned char>(sp[0])) |
                      (static_cast<unsigned char>(sp[1]) << 8) |
                      (static_cast<unsigned char>(sp[2]) << 16);
        if (raw & 0x800000) raw |= ~0xFFFFFF;
        v = static_cast<double>(raw) / 8388608.0;
      } else if (format == 3 && bits == 32) {
        float raw;
        std::memcpy(&raw, sp, 4);
        v = static_cast<double>(raw);
      } else {
        throw BfError(ErrorKind::kDecode,
                      "unsupported WAV encoding (format=" + std::to_string(format) +
                          ", bits=" + std::to_string(bits) + "): " + path);
      }
      acc += v;
    }
    clip.samples[f] = static_cast<float>(acc / channels);
  }

  if (target_rate > 0 && clip.sample_rate != target_rate) {
    clip = Resample(clip, target_rate);
  }
  NormalizeAmplitude(&clip);
  return clip;
}

void WriteWavFile(const std::string& path, const AudioClip& clip,
                  WavSampleFormat format) {
  if (clip.sample_rate <= 0) {
    throw BfError(ErrorKind::kInvalidArgument, "clip has no sample rate");
  }
  const uint16_t fmt_tag = format == WavSampleFormat::kInt16 ? 1 : 3;
  const uint16_t bits = format == WavSampleFormat::kInt16 ? 16 : 32;
  const uint32_t byte_rate = clip.sample_rate * bits / 8;
  const uint32_t data_size =
      static_cast<uint32_t>(clip.samples.size() * bits / 8);

  std::string out;
  out.reserve(44 + data_size);
  out.append("RIFF");
  AppendU32(&out, 36 + data_size);
  out.append("WAVE");
  out.append("fmt ");
  AppendU32(&out, 16);
  out.push_back(static_cast<char>(fmt_tag));
  out.push_back(0);
  out.push_back(1);  // mono
  out.push_back(0);
  AppendU32(&out, static_cast<uint32_t>(clip.sample_rate));
  AppendU32(&out, byte_rate);
  out.push_back(static_cast<char>(bits / 8));
  out.push_back(0);
  out.push_back(static_cast<char>(bits));
  out.push_back(0);
  out.append("data");
  AppendU32(&out, data_size);

  if (format == WavSampleFormat::kInt16) {
    for (float s : clip.samples) {
      const float clamped = std::clamp(s, -1.0f, 1.0f);
      const int16_t raw = static_cast<int16_t>(std::lrint(clamped * 32767.0));
      out.push_back(static_cast<char>(raw & 0xff));
      out.push_back(static_cast<char>((raw >> 8) & 0xff));
    }
  } else {
    AppendF32Array(&out, clip.samples.data(), clip.samples.size());
  }
  WriteFileAtomic(path, out);
}

}  // namespace beatforge
