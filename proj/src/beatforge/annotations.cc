// beatforge/annotations.cc

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

#include "beatforge/annotations.h"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "beatforge/common.h"
#include "beatforge/io_util.h"

namespace beatforge {

void BeatAnnotation::Validate(const std::string& what) const {
  if (events.size() < 2) {
    throw BfError(ErrorKind::kInput,
                  what + ": need at least two events for tempo to be defined");
  }
  for (size_t i = 0; i < events.size(); ++i) {
    if (events[i].bar_position < 1) {
      throw BfError(ErrorKind::kInput, what + ": bar_position must be >= 1");
    }
    if (i > 0 && events[i].time <= events[i - 1].time) {
      throw BfError(ErrorKind::kInput, what + ": times must strictly increase");
    }
  }
}

std::vector<double> BeatAnnotation::BeatTimes() const {
  std::vector<double> times;
  times.reserve(events.size());
  for (const auto& e : events) times.push_back(e.time);
  return times;
}

std::vector<double> BeatAnnotation::DownbeatTimes() const {
  std::vector<double> times;
  for (const auto& e : events) {
    if (e.bar_position == 1) times.push_back(e.time);
  }
  return times;
}

BeatAnnotation ReadBeatsFile(const std::string& path) {
  const std::string bytes = ReadFileBytes(path);
  BeatAnnotation annotation;
  std::istringstream stream(bytes);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    char* end = nullptr;
    const double time = std::strtod(line.c_str(), &end);
    if (end == line.c_str()) {
      throw BfError(ErrorKind::kInput,
                    path + ":" + std::to_string(line_no) + ": bad event line");
    }
    const long position = std::strtol(end, nullptr, 10);
    BeatEvent event;
    event.time = time;
    event.bar_position = position > 0 ? static_cast<int>(position) : 1;
    annotation.events.push_back(event);
  }
  annotation.Validate(path);
  return annotation;
}

std::string FormatBeatsFile(const std::vector<BeatEvent>& events) {
  std::string out;
  char buf[64];
  for (const auto& e : events) {
    std::snprintf(buf, sizeof(buf), "%.6f\t%d\n", e.time, e.bar_position);
    out += buf;
  }
  return out;
}

void WriteBeatsFile(const std::vector<BeatEvent>& events, const std::string& path) {
  WriteFileAtomic(path, FormatBeatsFile(events));
}

}  // namespace beatforge
