// Copyright 2026 The LayerCoT Authors.
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

#ifndef LAYERCOT_CORE_ERROR_H_
#define LAYERCOT_CORE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace layercot {

// Failure categories raised by the engine, agents, knowledge and simulator.
// The service maps these onto HTTP status codes.
enum class ErrorCode {
  kInvalidArgument,
  kPlannerUnavailable,
  kEmptyPlan,
  kNoPlan,
  kBackend,
  kEmptyResponse,
  kWrongLayer,
  kSessionClosed,
  kNotReady,
  kUnboundPlaceholder,
  kBudgetExhausted,
  kParse,
  kConsistency,
  kBadParameter,
  kNotFound,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  // Parse errors carry the 1-based line that failed.
  Error(ErrorCode code, const std::string &message, int line)
      : std::runtime_error(message), code_(code), line_(line) {}

  ErrorCode code() const { return code_; }
  int line() const { return line_; }

 private:
  ErrorCode code_;
  int line_ = 0;
};

}  // namespace layercot

#endif  // LAYERCOT_CORE_ERROR_H_
