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

// Extraction of checkable claims from free-text reasoning. A claim line is
//
//   CLAIM: <subject> | <predicate> | <object>
//
// anchored at the start of a line (surrounding whitespace ignored). Fields
// are trimmed and may not be empty. Every other line is plain narrative.

#ifndef LAYERCOT_AGENTS_CLAIM_PARSER_H_
#define LAYERCOT_AGENTS_CLAIM_PARSER_H_

#include <string>
#include <string_view>
#include <vector>

#include "layercot/core/types.h"

namespace layercot::agents {

inline constexpr std::string_view kClaimPrefix = "CLAIM:";

struct ClaimParse {
  std::vector<core::Claim> claims;
  // One entry per malformed CLAIM line, e.g. "line 3: expected 3 fields".
  std::vector<std::string> warnings;
};

// Total function. Claims get sequential ids c1, c2, ... in line order;
// malformed CLAIM lines are skipped and reported in warnings.
ClaimParse ParseClaims(std::string_view narrative);

// The line ParseClaims reads back as `triple`.
std::string FormatClaimLine(const core::Triple &triple);

}  // namespace layercot::agents

#endif  // LAYERCOT_AGENTS_CLAIM_PARSER_H_
