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

#ifndef LAYERCOT_KNOWLEDGE_FACT_STORE_H_
#define LAYERCOT_KNOWLEDGE_FACT_STORE_H_

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "layercot/core/types.h"

namespace layercot::knowledge {

// A polarity-tagged triple. polarity=false states that the triple explicitly
// does not hold.
struct Fact {
  std::string subject;
  std::string predicate;
  std::string object;
  bool polarity = true;

  bool operator==(const Fact &other) const = default;
};

// "subject | predicate | object | true", the fact file line form.
std::string FormatFact(const Fact &fact);

// Result of matching an assertion against the store. fact is the fact that
// decided the status, absent for Unknown.
struct Match {
  core::ClaimStatus status = core::ClaimStatus::kUnknown;
  std::optional<Fact> fact;
};

// Immutable set of facts plus the predicates that are functional (a subject
// holds at most one true object for them). Safe to share across threads
// once constructed.
//
// Fact file grammar, one item per line:
//
//   @functional <predicate>
//   <subject> | <predicate> | <object> | <true|false>
//
// '#' starts a comment running to end of line. Blank lines are skipped and
// fields are trimmed.
class FactStore {
 public:
  FactStore() = default;

  // Parses a fact document. Throws Error(kParse) with the offending line
  // number, or Error(kConsistency) for conflicting polarity or a violated
  // functional predicate.
  static FactStore Parse(std::string_view document);
  static FactStore LoadFile(const std::filesystem::path &path);

  // Exact match (case-sensitive, fields trimmed):
  //   Supported     if a true fact with the same triple exists;
  //   Contradicted  if a false fact with the same triple exists, or the
  //                 predicate is functional and a true fact gives the same
  //                 (subject, predicate) a different object;
  //   Unknown       otherwise, including assertions with empty fields.
  Match Find(const core::Triple &assertion) const;
  core::ClaimStatus Lookup(const core::Triple &assertion) const {
    return Find(assertion).status;
  }

  bool IsFunctional(std::string_view predicate) const;

  const std::vector<Fact> &facts() const { return facts_; }
  const std::set<std::string, std::less<>> &functional_predicates() const {
    return functional_;
  }
  size_t size() const { return facts_.size(); }
  bool empty() const { return facts_.empty(); }

 private:
  static std::string Key(std::string_view subject, std::string_view predicate);

  std::vector<Fact> facts_;
  std::set<std::string, std::less<>> functional_;
  // (subject, predicate) -> indices into facts_.
  std::unordered_map<std::string, std::vector<size_t>> index_;
};

// Operation-style aliases.
inline FactStore LoadStore(std::string_view document) {
  return FactStore::Parse(document);
}
inline core::ClaimStatus Lookup(const FactStore &store,
                                const core::Triple &assertion) {
  return store.Lookup(assertion);
}

}  // namespace layercot::knowledge

#endif  // LAYERCOT_KNOWLEDGE_FACT_STORE_H_
