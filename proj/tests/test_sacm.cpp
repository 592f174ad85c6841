#include <gtest/gtest.h>

#include <random>

#include "argus/sacm.hpp"

using namespace argus;

namespace {

Element claim(const std::string& gid) {
  Element e;
  e.kind = ElemKind::Claim;
  e.gid = gid;
  return e;
}

Element artifact(const std::string& gid) {
  Element e;
  e.kind = ElemKind::Artifact;
  e.gid = gid;
  return e;
}

Element inference(const std::string& gid, std::vector<std::string> src,
                  std::vector<std::string> tgt) {
  Element e;
  e.kind = ElemKind::Inference;
  e.gid = gid;
  for (auto& s : src) e.src.push_back({s, {}});
  for (auto& t : tgt) e.tgt.push_back({t, {}});
  return e;
}

}  // namespace

TEST(SacmTest, AddElementBasics) {
  AssuranceModel m;
  m.add_element(claim("C1"));
  EXPECT_EQ(m.elements().size(), 1u);
  EXPECT_TRUE(m.dependents("C1").empty());

  m.add_element(claim("C2"));
  m.add_element(inference("I1", {"C1"}, {"C2"}));
  EXPECT_TRUE(m.reverse_deps().at("C1").count("I1"));
  EXPECT_TRUE(m.reverse_deps().at("C2").count("I1"));

  EXPECT_THROW(m.add_element(claim("C1")), DuplicateGid);
}

TEST(SacmTest, ReverseDepsIncludeUnresolvedMentions) {
  AssuranceModel m;
  m.add_element(inference("I1", {"Nowhere"}, {"AlsoNowhere"}));
  EXPECT_TRUE(m.reverse_deps().at("Nowhere").count("I1"));
}

TEST(SacmTest, LookupKindChecks) {
  AssuranceModel m;
  m.add_element(claim("C1"));
  m.add_element(artifact("Claim_A"));
  EXPECT_EQ(m.lookup("C1", AntiquotationKind::Claim).gid, "C1");
  EXPECT_THROW(m.lookup("Claim_A", AntiquotationKind::Claim), KindMismatch);
  EXPECT_THROW(m.lookup("Claim_B", AntiquotationKind::Claim), Unresolved);
}

// lookup(gid, k) succeeds iff gid is bound and the element kind matches.
TEST(SacmTest, LookupDecisionTable) {
  AssuranceModel m;
  m.add_element(claim("C"));
  m.add_element(artifact("A"));
  Element req;
  req.kind = ElemKind::Requirement;
  req.gid = "R";
  m.add_element(req);
  struct Row {
    const char* gid;
    AntiquotationKind k;
    bool ok;
  } rows[] = {
      {"C", AntiquotationKind::Claim, true},
      {"C", AntiquotationKind::Artifact, false},
      {"A", AntiquotationKind::Artifact, true},
      {"A", AntiquotationKind::Requirement, false},
      {"R", AntiquotationKind::Requirement, true},
      {"R", AntiquotationKind::Resource, false},
      {"C", AntiquotationKind::Obligation, false},  // formal kinds never match elements
  };
  for (const auto& r : rows) {
    if (r.ok) {
      EXPECT_NO_THROW(m.lookup(r.gid, r.k));
    } else {
      EXPECT_THROW(m.lookup(r.gid, r.k), Error);
    }
  }
}

TEST(SacmTest, DependentsChain) {
  AssuranceModel m;
  m.add_element(claim("C1"));
  m.add_element(inference("I1", {"C1"}, {"C1x"}));
  // Rel_A references I1 (an assertion), forming a two-step chain
  m.add_element(inference("Rel_A", {"I1"}, {"C1x"}));
  m.add_element(claim("C1x"));
  auto deps = m.dependents("C1");
  EXPECT_EQ(deps, (std::set<std::string>{"I1", "Rel_A"}));
  EXPECT_TRUE(m.dependents("Rel_A").empty());
  EXPECT_TRUE(m.dependents("unknown_gid").empty());
}

// reverseDeps is exactly the inverse of the reference relation, for models
// built by any add_element sequence.
TEST(SacmTest, ReverseDepsMatchesRecomputationProperty) {
  std::mt19937 rng(7);
  for (int round = 0; round < 50; ++round) {
    AssuranceModel m;
    int n = 2 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) m.add_element(claim("C" + std::to_string(i)));
    int rels = static_cast<int>(rng() % 8);
    for (int i = 0; i < rels; ++i) {
      auto pick = [&] { return "C" + std::to_string(rng() % (n + 2)); };  // may dangle
      m.add_element(inference("I" + std::to_string(i), {pick(), pick()}, {pick()}));
    }
    EXPECT_EQ(m.recompute_reverse_deps(), m.reverse_deps());
  }
}

// Adding a reference never shrinks any dependents set.
TEST(SacmTest, DependentsMonotoneProperty) {
  std::mt19937 rng(99);
  for (int round = 0; round < 30; ++round) {
    AssuranceModel m;
    int n = 3 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) m.add_element(claim("C" + std::to_string(i)));
    std::map<std::string, std::set<std::string>> before;
    for (int i = 0; i < n; ++i) before["C" + std::to_string(i)] = m.dependents("C" + std::to_string(i));
    m.add_element(inference("I_new", {"C0"}, {"C" + std::to_string(n - 1)}));
    for (auto& [gid, deps] : before) {
      auto after = m.dependents(gid);
      for (const auto& d : deps) EXPECT_TRUE(after.count(d));
    }
  }
}

TEST(SacmTest, GidSyntax) {
  EXPECT_TRUE(valid_gid("C1"));
  EXPECT_TRUE(valid_gid("_x9"));
  EXPECT_FALSE(valid_gid(""));
  EXPECT_FALSE(valid_gid("9x"));
  EXPECT_FALSE(valid_gid("a-b"));
}

TEST(SacmTest, MultiLangStringFlattens) {
  MultiLangString m;
  m.segments.push_back({false, "see ", AntiquotationKind::Claim, "", {}});
  m.segments.push_back({true, "", AntiquotationKind::Claim, "C2", {}});
  m.segments.push_back({false, " here", AntiquotationKind::Claim, "", {}});
  EXPECT_EQ(m.flat(), "see @{Claim C2} here");
}
