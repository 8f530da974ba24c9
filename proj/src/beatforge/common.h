// beatforge/common.h

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

#ifndef BEATFORGE_COMMON_H_
#define BEATFORGE_COMMON_H_

#include <cstdio>
#include <stdexcept>
#include <string>

namespace beatforge {

// Failure categories surfaced across the library and mapped 1:1 onto the
// C API status codes.
enum class ErrorKind {
  kInvalidArgument,
  kEmptyInput,
  kShape,
  kLabel,
  kConfig,
  kIo,
  kDecode,
  kMissingStem,
  kStemMismatch,
  kIncompatibleCheckpoint,
  kTrainingDiverged,
  kNoFeasiblePath,
  kIncompleteCorpus,
  kInput,
};

const char* ErrorKindName(ErrorKind kind);

class BfError : public std::runtime_error {
 public:
  BfError(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Verbosity comes from the BEATFORGE_LOG environment variable
// (error|warn|info|debug); default is warn. Messages go to stderr.
LogLevel CurrentLogLevel();
void LogMessage(LogLevel level, const std::string& message);

#define BF_LOG_INFO(msg) ::beatforge::LogMessage(::beatforge::LogLevel::kInfo, (msg))
#define BF_LOG_WARN(msg) ::beatforge::LogMessage(::beatforge::LogLevel::kWarn, (msg))
#define BF_LOG_DEBUG(msg) ::beatforge::LogMessage(::beatforge::LogLevel::kDebug, (msg))

}  // namespace beatforge

#endif  // BEATFORGE_COMMON_H_
