#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "argus/bridge.hpp"
#include "argus/driver.hpp"

using namespace argus;

namespace {

std::string corpus(const std::string& name) { return std::string(ARGUS_CORPUS_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in.good()) << path;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Loaded {
  AssuranceModel model;
  std::vector<GclModule> gcls;
};

Loaded load_corpus(const TokeneerOptions& opt = {}) {
  Loaded out;
  auto [raws, parseDiags] = parse_ial(read_file(corpus("tis_sfrs.ial")), "tis_sfrs.ial");
  EXPECT_TRUE(parseDiags.empty());
  out.gcls.push_back(build_tokeneer(opt));
  auto [model, diags] = resolve(raws, GclIndex::from(out.gcls));
  EXPECT_TRUE(diags.empty()) << format_diagnostic(diags.front());
  out.model = std::move(model);
  return out;
}

}  // namespace

TEST(BridgeTest, BindDiscoversObligationRefs) {
  auto c = load_corpus();
  auto [bindings, diags] = argus::bind(c.model, c.gcls);
  EXPECT_TRUE(diags.empty());
  bool found = false;
  for (const auto& b : bindings)
    if (b.artifactGid == "FSFR1_Proof" && b.obligationGid == "FSFR1_thm") found = true;
  EXPECT_TRUE(found);
}

TEST(BridgeTest, InformalArtifactBindsNothing) {
  AssuranceModel m;
  Element a;
  a.kind = ElemKind::Artifact;
  a.gid = "Doc";
  MlsSegment seg;
  seg.text = "prose only";
  a.content.segments.push_back(seg);
  m.add_element(a);
  auto [bindings, diags] = argus::bind(m, {});
  EXPECT_TRUE(bindings.empty());
  EXPECT_TRUE(diags.empty());
}

TEST(BridgeTest, UndeclaredObligationIsE101) {
  AssuranceModel m;
  Element a;
  a.kind = ElemKind::Artifact;
  a.gid = "P";
  MlsSegment seg;
  seg.isRef = true;
  seg.kind = AntiquotationKind::Obligation;
  seg.target = "Nope_thm";
  a.content.segments.push_back(seg);
  m.add_element(a);
  auto [bindings, diags] = argus::bind(m, {});
  EXPECT_TRUE(bindings.empty());
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].code, "E101");
}

TEST(BridgeTest, EmptyBindingSetYieldsEmptyReport) {
  auto rep = run_all({}, {});
  EXPECT_TRUE(rep.results.empty());
  EXPECT_EQ(rep.pass, 0);
  EXPECT_EQ(rep.fail, 0);
  EXPECT_EQ(rep.error, 0);
}

TEST(BridgeTest, CorpusObligationsAllPass) {
  auto c = load_corpus();
  auto [bindings, diags] = argus::bind(c.model, c.gcls);
  auto rep = run_all(bindings, c.gcls);
  EXPECT_GE(rep.pass, 1);
  EXPECT_EQ(rep.fail, 0);
  EXPECT_EQ(rep.error, 0);
  // deterministic gid ordering
  for (size_t i = 1; i < rep.results.size(); ++i)
    EXPECT_LT(rep.results[i - 1].gid, rep.results[i].gid);
}

TEST(BridgeTest, MutatedCorpusFailsFsfr1WithCounterexample) {
  TokeneerOptions opt;
  opt.omitInv2 = true;
  auto c = load_corpus(opt);
  auto [bindings, diags] = argus::bind(c.model, c.gcls);
  auto rep = run_all(bindings, c.gcls);
  EXPECT_GE(rep.fail, 1);
  bool sawCex = false;
  for (const auto& r : rep.results)
    if (r.gid == "FSFR1_thm") {
      EXPECT_EQ(r.status, ObligationResult::Status::Fail);
      sawCex = r.verdict.cex.has_value();
    }
  EXPECT_TRUE(sawCex);
}

TEST(BridgeTest, AttachVerdictsConjoins) {
  std::vector<ObligationBinding> bindings = {{"A", "o1"}, {"A", "o2"}, {"B", "o1"}};
  VerificationReport rep;
  ObligationResult r1;
  r1.gid = "o1";
  r1.status = ObligationResult::Status::Pass;
  ObligationResult r2;
  r2.gid = "o2";
  r2.status = ObligationResult::Status::Fail;
  rep.results = {r1, r2};
  auto v = attach_verdicts(bindings, rep);
  EXPECT_FALSE(v.at("A").pass());  // one failing obligation poisons the artifact
  EXPECT_TRUE(v.at("B").pass());
}

TEST(BridgeTest, VerdictsFeedClaimStatus) {
  auto c = load_corpus();
  auto [bindings, diags] = argus::bind(c.model, c.gcls);
  auto rep = run_all(bindings, c.gcls);
  auto verdicts = attach_verdicts(bindings, rep);
  auto st = claim_status(c.model, verdicts);
  EXPECT_EQ(st.at("FSFR1_Verified"), ClaimStatus::Supported);
  EXPECT_EQ(st.at("FSFR1_V1"), ClaimStatus::Assumed);
  EXPECT_EQ(st.at("SFR1_Formalisation"), ClaimStatus::Supported);
  EXPECT_EQ(st.at("TISOp_Correct"), ClaimStatus::Cited);
}

// End-to-end cascading: between the pristine and the mutated corpus, exactly
// the support ancestors of the failed obligation's claims change status.
TEST(BridgeTest, MutationChangesExactlyTheAncestors) {
  auto statuses = [&](const TokeneerOptions& opt) {
    auto c = load_corpus(opt);
    auto [bindings, diags] = argus::bind(c.model, c.gcls);
    auto rep = run_all(bindings, c.gcls);
    return claim_status(c.model, attach_verdicts(bindings, rep));
  };
  auto pristine = statuses({});
  TokeneerOptions opt;
  opt.omitInv2 = true;
  auto mutated = statuses(opt);
  std::set<std::string> changed;
  for (const auto& [gid, st] : pristine)
    if (mutated.at(gid) != st) changed.insert(gid);
  EXPECT_EQ(changed, (std::set<std::string>{"FSFR1_Verified", "SFR1_Formalisation"}));
  EXPECT_EQ(mutated.at("FSFR1_Verified"), ClaimStatus::Unsupported);
  EXPECT_EQ(mutated.at("SFR1_Formalisation"), ClaimStatus::Unsupported);
}

TEST(BridgeTest, ReportJsonShape) {
  auto c = load_corpus();
  auto [bindings, diags] = argus::bind(c.model, c.gcls);
  auto rep = run_all(bindings, c.gcls);
  auto j = report_json(rep);
  ASSERT_TRUE(j.contains("obligations"));
  ASSERT_TRUE(j.contains("summary"));
  EXPECT_EQ(j["summary"]["fail"], 0);
  for (const auto& ob : j["obligations"]) {
    EXPECT_TRUE(ob.contains("gid"));
    EXPECT_TRUE(ob.contains("status"));
    EXPECT_TRUE(ob.contains("method"));
    EXPECT_TRUE(ob.contains("millis"));
  }
}

TEST(BridgeTest, StateSpaceErrorSurfacesAsErrorResult) {
  // a module whose schema is too large for the requested bound
  GclModule m;
  m.name = "big";
  m.schema = Schema({SchemaNode::leaf("a", FiniteType::bounded_int(0, 255)),
                     SchemaNode::leaf("b", FiniteType::bounded_int(0, 255))});
  Obligation ob;
  ob.gid = "too_big";
  ob.kind = Obligation::Kind::Equiv;
  ob.prog = mk_skip();
  ob.prog2 = mk_skip();
  m.obligations.push_back(ob);
  auto r = check_obligation(m, m.obligations[0], 1000);
  EXPECT_EQ(r.status, ObligationResult::Status::Error);
  EXPECT_FALSE(r.error.empty());
}
