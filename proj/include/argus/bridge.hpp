#pragma once

#include <chrono>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "argus/tokeneer.hpp"
#include "argus/validator.hpp"

namespace argus {

// Link from an evidential artifact to a formal obligation, discovered from
// @{Obligation g} references in the artifact's description.
struct ObligationBinding {
  std::string artifactGid;
  std::string obligationGid;
};

inline std::pair<std::vector<ObligationBinding>, std::vector<Diagnostic>> bind(
    const AssuranceModel& model, const std::vector<GclModule>& gcls) {
  std::vector<ObligationBinding> out;
  std::vector<Diagnostic> diags;
  auto declared = [&](const std::string& g) {
    for (const auto& m : gcls)
      if (m.find_obligation(g)) return true;
    return false;
  };
  for (const auto& e : model.elements()) {
    if (!is_artifact_element(e.kind)) continue;
    for (const auto& seg : e.content.segments) {
      if (!seg.isRef || seg.kind != AntiquotationKind::Obligation) continue;
      if (!declared(seg.target)) {
        diags.push_back(make_error("E101", seg.span,
                                   "unresolved reference '" + seg.target + "'", e.gid));
        continue;
      }
      out.push_back({e.gid, seg.target});
    }
  }
  return {std::move(out), std::move(diags)};
}

struct ObligationResult {
  enum class Status { Pass, Fail, Error };
  std::string gid;
  Status status = Status::Pass;
  Verdict verdict;
  std::string error;
  long long millis = 0;
  const GclModule* module = nullptr;
};

struct VerificationReport {
  std::vector<ObligationResult> results;  // sorted by gid
  int pass = 0, fail = 0, error = 0;
};

// Expands embedded wp/wlp terms against the module's programs.
inline ExprPtr expand_wp_terms(const GclModule& m, const ExprPtr& e, WpCtx& ctx) {
  if (!e->has_wp) return e;
  if (e->op == EOp::WpApp) {
    const auto* pd = m.find_prog(e->name);
    if (!pd) throw Error("Internal", "unknown program in wp term: " + e->name);
    auto inner = expand_wp_terms(m, e->a, ctx);
    return e->iswlp ? wlp(m.schema, pd->prog, inner, ctx) : wp(m.schema, pd->prog, inner, ctx);
  }
  auto go = [&](const ExprPtr& x) { return expand_wp_terms(m, x, ctx); };
  switch (e->op) {
    case EOp::Eq: return mk_eq(go(e->a), go(e->b));
    case EOp::Lt: return mk_lt(go(e->a), go(e->b));
    case EOp::Leq: return mk_leq(go(e->a), go(e->b));
    case EOp::Plus: return mk_plus(go(e->a), go(e->b));
    case EOp::And: return mk_and(go(e->a), go(e->b));
    case EOp::Or: return mk_or(go(e->a), go(e->b));
    case EOp::Not: return mk_not(go(e->a));
    case EOp::Implies: return mk_implies(go(e->a), go(e->b));
    case EOp::InSet: return mk_in_set(go(e->a), e->setords);
    case EOp::Some: return mk_some(go(e->a));
    case EOp::The: return mk_the(go(e->a));
    case EOp::Exists: return mk_exists(e->name, e->btype, go(e->a));
    case EOp::Forall: return mk_forall(e->name, e->btype, go(e->a));
    case EOp::Member: return mk_member(go(e->a), go(e->b));
    default: return e;
  }
}

inline ObligationResult check_obligation(const GclModule& m, const Obligation& ob,
                                         std::uint64_t bound) {
  ObligationResult r;
  r.gid = ob.gid;
  r.module = &m;
  auto t0 = std::chrono::steady_clock::now();
  try {
    WpCtx ctx;
    ctx.bound = bound;
    Verdict v;
    switch (ob.kind) {
      case Obligation::Kind::Hoare: {
        auto pre = expand_wp_terms(m, ob.pre, ctx);
        auto post = expand_wp_terms(m, ob.post, ctx);
        v = hoare(m.schema, pre, ob.prog, post, bound);
        break;
      }
      case Obligation::Kind::Valid: {
        auto goal = expand_wp_terms(m, ob.goal, ctx);
        v = valid(m.schema, goal, bound, ctx.fallback);
        break;
      }
      case Obligation::Kind::NMods: v = nmods(m.schema, ob.prog, ob.vars, bound); break;
      case Obligation::Kind::Equiv: v = equiv(m.schema, ob.prog, ob.prog2, bound); break;
    }
    if (ctx.fallback) v.method = Verdict::Method::SemanticFallback;
    r.verdict = v;
    r.status = v.pass() ? ObligationResult::Status::Pass : ObligationResult::Status::Fail;
  } catch (const StateSpaceTooLarge& e) {
    r.status = ObligationResult::Status::Error;
    r.error = e.what();
    r.verdict.method = Verdict::Method::SemanticFallback;
  }
  auto t1 = std::chrono::steady_clock::now();
  r.millis = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  return r;
}

inline VerificationReport run_obligation_set(const std::set<std::string>& gids,
                                             const std::vector<GclModule>& gcls,
                                             std::uint64_t bound = kDefaultStateBound) {
  VerificationReport rep;
  for (const auto& g : gids) {  // std::set iterates in gid order
    for (const auto& m : gcls) {
      if (const auto* ob = m.find_obligation(g)) {
        rep.results.push_back(check_obligation(m, *ob, bound));
        break;
      }
    }
  }
  for (const auto& r : rep.results) {
    if (r.status == ObligationResult::Status::Pass) ++rep.pass;
    else if (r.status == ObligationResult::Status::Fail) ++rep.fail;
    else ++rep.error;
  }
  return rep;
}

// Checks each bound obligation once; report ordered by gid.
inline VerificationReport run_all(const std::vector<ObligationBinding>& bindings,
                                  const std::vector<GclModule>& gcls,
                                  std::uint64_t bound = kDefaultStateBound) {
  std::set<std::string> gids;
  for (const auto& b : bindings) gids.insert(b.obligationGid);
  return run_obligation_set(gids, gcls, bound);
}

// Artifact-level verdicts: the conjunction of the artifact's bound
// obligations' outcomes.
inline std::map<std::string, Verdict> attach_verdicts(const std::vector<ObligationBinding>& bindings,
                                                      const VerificationReport& report) {
  std::map<std::string, ObligationResult::Status> byGid;
  for (const auto& r : report.results) byGid[r.gid] = r.status;
  std::map<std::string, Verdict> out;
  for (const auto& b : bindings) {
    auto it = byGid.find(b.obligationGid);
    bool pass = it != byGid.end() && it->second == ObligationResult::Status::Pass;
    auto& v = out.emplace(b.artifactGid, Verdict{}).first->second;
    if (!pass) v.status = Verdict::Status::Fail;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report serialization.

inline nlohmann::json state_json(const Schema& sch, const State& s) {
  nlohmann::json j = nlohmann::json::object();
  for (std::uint32_t i = 0; i < sch.leaf_count(); ++i)
    j[sch.leaf(i).path.str()] = sch.leaf(i).type->value_name(s[i]);
  return j;
}

inline nlohmann::json report_json(const VerificationReport& rep) {
  nlohmann::json obs = nlohmann::json::array();
  for (const auto& r : rep.results) {
    nlohmann::json j;
    j["gid"] = r.gid;
    j["status"] = r.status == ObligationResult::Status::Pass   ? "pass"
                  : r.status == ObligationResult::Status::Fail ? "fail"
                                                               : "error";
    j["method"] =
        r.verdict.method == Verdict::Method::Structural ? "structural" : "semantic-fallback";
    j["millis"] = r.millis;
    if (r.status == ObligationResult::Status::Error) j["error"] = r.error;
    if (r.verdict.cex && r.module) {
      nlohmann::json cex;
      cex["initial"] = state_json(r.module->schema, *r.verdict.cex);
      if (r.verdict.cexFinal) cex["final"] = state_json(r.module->schema, *r.verdict.cexFinal);
      j["counterexample"] = cex;
    }
    obs.push_back(std::move(j));
  }
  nlohmann::json j;
  j["obligations"] = std::move(obs);
  j["summary"] = {{"pass", rep.pass}, {"fail", rep.fail}, {"error", rep.error}};
  return j;
}

inline std::string report_text(const VerificationReport& rep) {
  std::string out;
  for (const auto& r : rep.results) {
    const char* st = r.status == ObligationResult::Status::Pass   ? "pass"
                     : r.status == ObligationResult::Status::Fail ? "fail"
                                                                  : "error";
    const char* method =
        r.verdict.method == Verdict::Method::Structural ? "structural" : "semantic-fallback";
    out += r.gid + "  " + st + "  " + method + "  " + std::to_string(r.millis) + "ms\n";
    if (r.status == ObligationResult::Status::Error) out += "  " + r.error + "\n";
    if (r.verdict.cex && r.module) {
      out += "  counterexample: " + r.module->schema.state_str(*r.verdict.cex) + "\n";
      if (r.verdict.cexFinal)
        out += "  reaching:       " + r.module->schema.state_str(*r.verdict.cexFinal) + "\n";
    }
  }
  out += "summary: " + std::to_string(rep.pass) + " passed, " + std::to_string(rep.fail) +
         " failed, " + std::to_string(rep.error) + " errors\n";
  return out;
}

}  // namespace argus
