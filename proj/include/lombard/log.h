// Copyright 2026 The Lombard Flavor Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOMBARD_LOG_H_
#define LOMBARD_LOG_H_

#include <functional>
#include <string>

#include "absl/strings/string_view.h"

namespace lombard {

enum class LogLevel { kDebug = 0, kInfo = 1, kWarning = 2, kError = 3 };

using LogSink = std::function<void(LogLevel, absl::string_view)>;

// Replaces the process-wide sink. The default sink writes
// "[level] message" lines to stderr. Passing nullptr restores it.
void SetLogSink(LogSink sink);
void SetMinLogLevel(LogLevel level);

void Log(LogLevel level, absl::string_view message);

inline void LogWarning(absl::string_view message) {
  Log(LogLevel::kWarning, message);
}
inline void LogInfo(absl::string_view message) {
  Log(LogLevel::kInfo, message);
}

}  // namespace lombard

#endif  // LOMBARD_LOG_H_
