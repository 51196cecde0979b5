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

#include "layercot/agents/claim-parser.h"

#include "layercot/core/strings.h"

namespace layercot::agents {

ClaimParse ParseClaims(std::string_view narrative) {
  ClaimParse result;
  int line_number = 0;
  for (std::string_view raw : SplitLines(narrative)) {
    ++line_number;
    std::string_view line = Trim(raw);
    if (!line.starts_with(kClaimPrefix)) continue;

    std::vector<std::string_view> fields =
        SplitAndTrim(line.substr(kClaimPrefix.size()), '|');
    if (fields.size() != 3) {
      result.warnings.push_back("line " + std::to_string(line_number) +
                                ": CLAIM has " + std::to_string(fields.size()) +
                                " fields, expected 3");
      continue;
    }
    if (fields[0].empty() || fields[1].empty() || fields[2].empty()) {
      result.warnings.push_back("line " + std::to_string(line_number) +
                                ": CLAIM has an empty field");
      continue;
    }

    core::Triple triple{std::string(fields[0]), std::string(fields[1]),
                        std::string(fields[2])};
    core::Claim claim;
    claim.id = "c" + std::to_string(result.claims.size() + 1);
    claim.statement =
        triple.subject + " | " + triple.predicate + " | " + triple.object;
    claim.assertion = std::move(triple);
    result.claims.push_back(std::move(claim));
  }
  return result;
}

std::string FormatClaimLine(const core::Triple &triple) {
  return std::string(kClaimPrefix) + " " + triple.subject + " | " +
         triple.predicate + " | " + triple.object;
}

}  // namespace layercot::agents
