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

#ifndef LAYERCOT_CORE_QUALITY_H_
#define LAYERCOT_CORE_QUALITY_H_

#include <span>

#include "layercot/core/types.h"

namespace layercot::core {

// Explanation quality of a trace: the fraction of emitted claims that ended
// up verified, either Supported by the latest verdict on their attempt or
// approved by a reviewer. Claims from every attempt count, including ones
// later refined away. 0 when the trace emits no claims.
double Quality(std::span<const TraceEvent> events);

}  // namespace layercot::core

#endif  // LAYERCOT_CORE_QUALITY_H_
