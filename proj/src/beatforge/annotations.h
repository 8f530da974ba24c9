// beatforge/annotations.h

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

#ifndef BEATFORGE_ANNOTATIONS_H_
#define BEATFORGE_ANNOTATIONS_H_

#include <string>
#include <vector>

namespace beatforge {

// A time-stamped beat event; bar_position 1 marks the downbeat.
struct BeatEvent {
  double time = 0.0;
  int bar_position = 1;
};

struct BeatAnnotation {
  std::vector<BeatEvent> events;

  // Strictly increasing times, positions >= 1, at least two events.
  void Validate(const std::string& what) const;
  std::vector<double> BeatTimes() const;
  std::vector<double> DownbeatTimes() const;
};

// Interchange text format: one event per line, "time<TAB>bar_position",
// seconds printed with 6 decimals.
BeatAnnotation ReadBeatsFile(const std::string& path);
std::string FormatBeatsFile(const std::vector<BeatEvent>& events);
void WriteBeatsFile(const std::vector<BeatEvent>& events, const std::string& path);

}  // namespace beatforge

#endif  // BEATFORGE_ANNOTATIONS_H_
