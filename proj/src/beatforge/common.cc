// beatforge/common.cc

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

#include "beatforge/common.h"

#include <cstdlib>
#include <cstring>

namespace beatforge {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kShape: return "ShapeError";
    case ErrorKind::kLabel: return "LabelError";
    case ErrorKind::kConfig: return "ConfigError";
    case ErrorKind::kIo: return "IoError";
    case ErrorKind::kDecode: return "DecodeError";
    case ErrorKind::kMissingStem: return "MissingStem";
    case ErrorKind::kStemMismatch: return "StemMismatch";
    case ErrorKind::kIncompatibleCheckpoint: return "IncompatibleCheckpoint";
    case ErrorKind::kTrainingDiverged: return "TrainingDiverged";
    case ErrorKind::kNoFeasiblePath: return "NoFeasiblePath";
    case ErrorKind::kIncompleteCorpus: return "IncompleteCorpus";
    case ErrorKind::kInput: return "InputError";
  }
  return "Unknown";
}

LogLevel CurrentLogLevel() {
  static LogLevel level = [] {
    const char* env = std::getenv("BEATFORGE_LOG");
    if (env == nullptr) return LogLevel::kWarn;
    if (std::strcmp(env, "error") == 0) return LogLevel::kError;
    if (std::strcmp(env, "warn") == 0) return LogLevel::kWarn;
    if (std::strcmp(env, "info") == 0) return LogLevel::kInfo;
    if (std::strcmp(env, "debug") == 0) return LogLevel::kDebug;
    return LogLevel::kWarn;
  }();
  return level;
}

void LogMessage(LogLevel level, const std::string& message) {
  if (level > CurrentLogLevel()) return;
  static const char* names[] = {"E", "W", "I", "D"};
  std::fprintf(stderr, "beatforge %s: %s\n", names[static_cast<int>(level)],
               message.c_str());
}

}  // namespace beatforge
