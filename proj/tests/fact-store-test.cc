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

#include <random>

#include "gtest/gtest.h"
#include "layercot/core/error.h"
#include "layercot/knowledge/verifier.h"
#include "test-util.h"

namespace layercot::knowledge {
namespace {

using core::ClaimStatus;
using core::Triple;

TEST(FactStoreTest, ParsesFactsCommentsAndFunctionalDeclarations) {
  auto store = FactStore::Parse(
      "# header comment\n"
      "\n"
      "@functional patent_status\n"
      "  company_x | patent_status | pending | true   # trailing comment\n"
      "company_x|sector|solar|false\n");
  ASSERT_EQ(store.size(), 2u);
  EXPECT_EQ(store.facts()[0], (Fact{"company_x", "patent_status", "pending", true}));
  EXPECT_EQ(store.facts()[1], (Fact{"company_x", "sector", "solar", false}));
  EXPECT_TRUE(store.IsFunctional("patent_status"));
  EXPECT_FALSE(store.IsFunctional("sector"));
}

TEST(FactStoreTest, EmptyDocumentIsEmptyStore) {
  EXPECT_TRUE(FactStore::Parse("").empty());
  EXPECT_TRUE(FactStore::Parse("# only a comment\n\n").empty());
}

TEST(FactStoreTest, ParseErrorsCarryTheLine) {
  auto expect_parse_error = [](std::string_view doc, int line) {
    try {
      FactStore::Parse(doc);
      FAIL() << "expected a parse error for: " << doc;
    } catch (const Error &e) {
      EXPECT_EQ(e.code(), ErrorCode::kParse) << e.what();
      EXPECT_EQ(e.line(), line) << e.what();
    }
  };
  expect_parse_error("a | b | c | true\na | b | c\n", 2);
  expect_parse_error("a | b | c | maybe\n", 1);
  expect_parse_error("\n\na |  | c | true\n", 3);
  expect_parse_error("@functional\n", 1);
  expect_parse_error("@functional two words\n", 1);
}

TEST(FactStoreTest, ConflictingPolarityIsAConsistencyError) {
  try {
    FactStore::Parse("a | b | c | true\na | b | c | false\n");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kConsistency);
  }
}

TEST(FactStoreTest, FunctionalPredicateWithTwoTrueObjectsIsInconsistent) {
  try {
    FactStore::Parse("@functional p\ns | p | x | true\ns | p | y | true\n");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kConsistency);
  }
  // Declaring the predicate after the facts is checked too.
  EXPECT_THROW(FactStore::Parse("s | p | x | true\ns | p | y | true\n@functional p\n"),
               Error);
}

TEST(FactStoreTest, DuplicateFactsAreIgnored) {
  auto store = FactStore::Parse("a | b | c | true\na | b | c | true\n");
  EXPECT_EQ(store.size(), 1u);
}

TEST(FactStoreTest, MedicalFixtureHoldsHighStrepRate) {
  auto store = FactStore::LoadFile(testing::ScenariosDir() / "medical.facts");
  EXPECT_EQ(store.Lookup({"local_region", "strep_rate", "high"}),
            ClaimStatus::kSupported);
}

TEST(FactStoreTest, LookupStatuses) {
  auto store = FactStore::Parse(
      "@functional patent_status\n"
      "company_x | patent_status | pending | true\n"
      "company_x | listed_on | nasdaq | false\n"
      "company_x | product | panels | true\n");
  EXPECT_EQ(Lookup(store, {"company_x", "patent_status", "granted"}),
            ClaimStatus::kContradicted);
  EXPECT_EQ(Lookup(store, {"company_x", "patent_status", "pending"}),
            ClaimStatus::kSupported);
  EXPECT_EQ(Lookup(store, {"company_x", "listed_on", "nasdaq"}),
            ClaimStatus::kContradicted);
  // Non-functional predicates allow other objects.
  EXPECT_EQ(Lookup(store, {"company_x", "product", "inverters"}),
            ClaimStatus::kUnknown);
  EXPECT_EQ(Lookup(store, {"company_y", "patent_status", "granted"}),
            ClaimStatus::kUnknown);
  EXPECT_EQ(Lookup(store, {"", "patent_status", "granted"}), ClaimStatus::kUnknown);
  // Fields are trimmed, case is significant.
  EXPECT_EQ(Lookup(store, {" company_x ", "patent_status ", " pending"}),
            ClaimStatus::kSupported);
  EXPECT_EQ(Lookup(store, {"Company_X", "patent_status", "pending"}),
            ClaimStatus::kUnknown);
}

TEST(FactStoreTest, FindReportsTheDecidingFact) {
  auto store = FactStore::Parse(
      "@functional patent_status\ncompany_x | patent_status | pending | true\n");
  auto match = store.Find({"company_x", "patent_status", "granted"});
  ASSERT_TRUE(match.fact);
  EXPECT_EQ(FormatFact(*match.fact), "company_x | patent_status | pending | true");
  EXPECT_FALSE(store.Find({"x", "y", "z"}).fact);
}

// Linear-scan reference implementation of the lookup rules.
ClaimStatus NaiveLookup(const std::vector<Fact> &facts,
                        const std::set<std::string> &functional, const Triple &t) {
  if (t.subject.empty() || t.predicate.empty() || t.object.empty()) {
    return ClaimStatus::kUnknown;
  }
  for (const auto &f : facts) {
    if (f.subject == t.subject && f.predicate == t.predicate && f.object == t.object) {
      return f.polarity ? ClaimStatus::kSupported : ClaimStatus::kContradicted;
    }
  }
  if (functional.count(t.predicate)) {
    for (const auto &f : facts) {
      if (f.polarity && f.subject == t.subject && f.predicate == t.predicate) {
        return ClaimStatus::kContradicted;
      }
    }
  }
  return ClaimStatus::kUnknown;
}

TEST(FactStoreTest, LookupAgreesWithLinearScanOnRandomStores) {
  std::mt19937_64 rng(7);
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  for (int round = 0; round < 200; ++round) {
    std::vector<Fact> facts;
    std::set<std::string> functional;
    std::string doc;
    if (pick(2)) {
      functional.insert("p0");
      doc += "@functional p0\n";
    }
    std::set<std::string> seen_triples;
    std::set<std::string> functional_subjects;
    for (int i = 0; i < 30; ++i) {
      Fact f{fmt::format("s{}", pick(5)), fmt::format("p{}", pick(3)),
             fmt::format("o{}", pick(4)), pick(3) != 0};
      const std::string key = f.subject + "|" + f.predicate + "|" + f.object;
      if (!seen_triples.insert(key).second) continue;
      if (functional.count(f.predicate) && f.polarity &&
          !functional_subjects.insert(f.subject).second) {
        continue;
      }
      facts.push_back(f);
      doc += FormatFact(f) + "\n";
    }
    auto store = FactStore::Parse(doc);
    for (int s = 0; s < 6; ++s) {
      for (int p = 0; p < 4; ++p) {
        for (int o = 0; o < 5; ++o) {
          Triple t{fmt::format("s{}", s), fmt::format("p{}", p), fmt::format("o{}", o)};
          ASSERT_EQ(store.Lookup(t), NaiveLookup(facts, functional, t))
              << t.subject << " " << t.predicate << " " << t.object << "\n"
              << doc;
        }
      }
    }
  }
}

TEST(VerifierTest, DecideAggregateTable) {
  using core::Aggregate;
  EXPECT_EQ(DecideAggregate(false, true, true), Aggregate::kAccepted);
  EXPECT_EQ(DecideAggregate(false, false, true), Aggregate::kAccepted);
  EXPECT_EQ(DecideAggregate(true, true, true), Aggregate::kNeedsRefinement);
  EXPECT_EQ(DecideAggregate(true, false, true), Aggregate::kRejected);
  EXPECT_EQ(DecideAggregate(false, false, false), Aggregate::kRejected);
}

TEST(VerifierTest, VerifyPartialCoversEveryClaimWithEvidence) {
  auto store = FactStore::Parse(
      "@functional patent_status\n"
      "company_x | patent_status | pending | true\n"
      "company_x | sector | solar | true\n");
  core::PartialReasoning partial;
  partial.layer_index = 0;
  partial.attempt = 1;
  partial.claims = {
      {"c1", "company_x | sector | solar", Triple{"company_x", "sector", "solar"}, {}},
      {"c2", "company_x | patent_status | granted",
       Triple{"company_x", "patent_status", "granted"}, {}},
      {"c3", "free text", std::nullopt, {}},
  };
  core::EngineConfig config;
  auto verdict = VerifyPartial(store, partial, config);
  ASSERT_EQ(verdict.per_claim.size(), 3u);
  EXPECT_EQ(verdict.per_claim[0].status, ClaimStatus::kSupported);
  EXPECT_EQ(verdict.per_claim[1].status, ClaimStatus::kContradicted);
  EXPECT_EQ(verdict.per_claim[2].status, ClaimStatus::kUnknown);
  EXPECT_EQ(verdict.aggregate, core::Aggregate::kNeedsRefinement);
  EXPECT_EQ(verdict.evidence[0].text, "fact: company_x | sector | solar | true");
  EXPECT_EQ(verdict.evidence[1].text,
            "functional conflict: company_x | patent_status | pending | true");
  EXPECT_EQ(verdict.evidence[2].text, kNoMatchingFact);

  // Out of budget the same contradiction is a rejection.
  partial.attempt = config.max_refinements + 1;
  EXPECT_EQ(VerifyPartial(store, partial, config).aggregate,
            core::Aggregate::kRejected);
}

TEST(VerifierTest, NoClaimsIsAccepted) {
  core::PartialReasoning partial;
  auto verdict = VerifyPartial(FactStore(), partial, core::EngineConfig{});
  EXPECT_TRUE(verdict.per_claim.empty());
  EXPECT_EQ(verdict.aggregate, core::Aggregate::kAccepted);
}

}  // namespace
}  // namespace layercot::knowledge
