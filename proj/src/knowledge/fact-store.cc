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

#include "layercot/knowledge/fact-store.h"

#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "layercot/core/error.h"
#include "layercot/core/strings.h"

namespace layercot::knowledge {

using core::ClaimStatus;

std::string FormatFact(const Fact &fact) {
  return fact.subject + " | " + fact.predicate + " | " + fact.object + " | " +
         (fact.polarity ? "true" : "false");
}

std::string FactStore::Key(std::string_view subject,
                           std::string_view predicate) {
  std::string key(subject);
  key.push_back('\x1f');
  key.append(predicate);
  return key;
}

FactStore FactStore::Parse(std::string_view document) {
  FactStore store;
  // (s, p, o) -> (polarity, line) for conflict detection.
  std::map<std::tuple<std::string, std::string, std::string>,
           std::pair<bool, int>>
      seen;
  std::map<std::string, int> functional_lines;

  int line_number = 0;
  for (std::string_view raw : SplitLines(document)) {
    ++line_number;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;

    if (line.front() == '@') {
      constexpr std::string_view kFunctional = "@functional";
      if (!line.starts_with(kFunctional) ||
          (line.size() > kFunctional.size() &&
           !IsSpace(line[kFunctional.size()]))) {
        throw Error(ErrorCode::kParse,
                    "line " + std::to_string(line_number) +
                        ": unknown directive '" + std::string(line) + "'",
                    line_number);
      }
      std::string_view predicate = Trim(line.substr(kFunctional.size()));
      if (predicate.empty() || predicate.find('|') != std::string_view::npos ||
          predicate.find_first_of(" \t") != std::string_view::npos) {
        throw Error(ErrorCode::kParse,
                    "line " + std::to_string(line_number) +
                        ": @functional takes exactly one predicate name",
                    line_number);
      }
      store.functional_.emplace(predicate);
      functional_lines.emplace(std::string(predicate), line_number);
      continue;
    }

    std::vector<std::string_view> fields = SplitAndTrim(line, '|');
    if (fields.size() != 4) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_number) + ": expected 4 '|'" +
                      " separated fields, found " +
                      std::to_string(fields.size()),
                  line_number);
    }
    for (int i = 0; i < 3; ++i) {
      if (fields[i].empty()) {
        throw Error(ErrorCode::kParse,
                    "line " + std::to_string(line_number) + ": empty field",
                    line_number);
      }
    }
    bool polarity;
    if (fields[3] == "true") {
      polarity = true;
    } else if (fields[3] == "false") {
      polarity = false;
    } else {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_number) +
                      ": polarity must be 'true' or 'false', got '" +
                      std::string(fields[3]) + "'",
                  line_number);
    }

    Fact fact{std::string(fields[0]), std::string(fields[1]),
              std::string(fields[2]), polarity};
    auto key = std::make_tuple(fact.subject, fact.predicate, fact.object);
    auto [it, inserted] = seen.emplace(key, std::make_pair(polarity, line_number));
    if (!inserted) {
      if (it->second.first != polarity) {
        throw Error(ErrorCode::kConsistency,
                    "line " + std::to_string(line_number) + ": '" +
                        FormatFact(fact) + "' conflicts with line " +
                        std::to_string(it->second.second),
                    line_number);
      }
      continue;  // exact duplicate
    }
    store.index_[Key(fact.subject, fact.predicate)].push_back(
        store.facts_.size());
    store.facts_.push_back(std::move(fact));
  }

  // Functional predicates admit one true object per subject.
  for (const auto &[key, indices] : store.index_) {
    const Fact &first = store.facts_[indices.front()];
    if (!store.IsFunctional(first.predicate)) continue;
    const Fact *holder = nullptr;
    for (size_t i : indices) {
      const Fact &fact = store.facts_[i];
      if (!fact.polarity) continue;
      if (holder != nullptr && holder->object != fact.object) {
        throw Error(ErrorCode::kConsistency,
                    "functional predicate '" + fact.predicate +
                        "' has two true objects for subject '" + fact.subject +
                        "': '" + holder->object + "' and '" + fact.object +
                        "'");
      }
      holder = &fact;
    }
  }
  return store;
}

FactStore FactStore::LoadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open fact file " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

bool FactStore::IsFunctional(std::string_view predicate) const {
  return functional_.find(predicate) != functional_.end();
}

Match FactStore::Find(const core::Triple &assertion) const {
  std::string_view subject = Trim(assertion.subject);
  std::string_view predicate = Trim(assertion.predicate);
  std::string_view object = Trim(assertion.object);
  if (subject.empty() || predicate.empty() || object.empty()) return {};

  auto it = index_.find(Key(subject, predicate));
  if (it == index_.end()) return {};

  const Fact *conflicting = nullptr;
  for (size_t i : it->second) {
    const Fact &fact = facts_[i];
    if (fact.object == object) {
      return {fact.polarity ? ClaimStatus::kSupported
                            : ClaimStatus::kContradicted,
              fact};
    }
    if (fact.polarity && conflicting == nullptr) conflicting = &fact;
  }
  if (conflicting != nullptr && IsFunctional(predicate)) {
    return {ClaimStatus::kContradicted, *conflicting};
  }
  return {};
}

}  // namespace layercot::knowledge
