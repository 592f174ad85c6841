#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "argus/gcl.hpp"
#include "argus/ial.hpp"
#include "argus/sacm.hpp"
#include "argus/wlp.hpp"

namespace argus {

// Names exported by the loaded .gcl modules; targets for the formal
// antiquotation kinds.
struct GclIndex {
  std::set<std::string> obligations, programs, predicates;

  static GclIndex from(const std::vector<GclModule>& ms) {
    GclIndex ix;
    for (const auto& m : ms) {
      for (const auto& o : m.obligations) ix.obligations.insert(o.gid);
      for (const auto& p : m.progs) ix.programs.insert(p.name);
      for (const auto& p : m.preds) ix.predicates.insert(p.name);
    }
    return ix;
  }
};

// Builds the model and checks every reference. Elements with unresolved
// references are still added (the cascade needs their dependents); duplicate
// gids keep the first definition.
inline std::pair<AssuranceModel, std::vector<Diagnostic>> resolve(
    const std::vector<RawElement>& raws, const GclIndex& gcl = {}) {
  AssuranceModel model;
  std::vector<Diagnostic> diags;
  for (const auto& r : raws) {
    if (model.find(r.gid)) {
      diags.push_back(
          make_error("E103", r.span, "duplicate gid '" + r.gid + "'", r.gid));
      continue;
    }
    model.add_element(r);
  }
  for (const auto& e : model.elements()) {
    auto checkRef = [&](const GidRef& r) {
      if (!model.find(r.gid))
        diags.push_back(
            make_error("E101", r.span, "unresolved reference '" + r.gid + "'", e.gid));
    };
    for (const auto& r : e.src) checkRef(r);
    for (const auto& r : e.tgt) checkRef(r);
    for (const auto& r : e.metaClaims) checkRef(r);
    auto checkSegs = [&](const MultiLangString& m) {
      for (const auto& seg : m.segments) {
        if (!seg.isRef) continue;
        switch (seg.kind) {
          case AntiquotationKind::Obligation:
            if (!gcl.obligations.count(seg.target))
              diags.push_back(make_error("E101", seg.span,
                                         "unresolved reference '" + seg.target + "'", e.gid));
            break;
          case AntiquotationKind::Program:
            if (!gcl.programs.count(seg.target))
              diags.push_back(make_error("E101", seg.span,
                                         "unresolved reference '" + seg.target + "'", e.gid));
            break;
          case AntiquotationKind::Predicate:
            if (!gcl.predicates.count(seg.target))
              diags.push_back(make_error("E101", seg.span,
                                         "unresolved reference '" + seg.target + "'", e.gid));
            break;
          default:
            try {
              model.lookup(seg.target, seg.kind);
            } catch (const Unresolved&) {
              diags.push_back(make_error("E101", seg.span,
                                         "unresolved reference '" + seg.target + "'", e.gid));
            } catch (const KindMismatch& k) {
              diags.push_back(make_error("E102", seg.span, k.what(), e.gid));
            }
        }
      }
    };
    checkSegs(e.content);
    if (e.reasoning) checkSegs(*e.reasoning);
  }
  sort_diagnostics(diags);
  return {std::move(model), std::move(diags)};
}

// SACM/OCL endpoint constraints plus the undeveloped-claim warning.
inline std::vector<Diagnostic> check_constraints(const AssuranceModel& model) {
  std::vector<Diagnostic> diags;
  std::set<std::string> hasIncoming;
  for (const auto& e : model.elements()) {
    if (is_relationship(e.kind))
      for (const auto& r : e.tgt) hasIncoming.insert(r.gid);
  }
  for (const auto& e : model.elements()) {
    auto endpoint = [&](const GidRef& r, bool ok, const std::string& msg) {
      const Element* t = model.find(r.gid);
      if (!t) return;  // E101 already reported
      if (!ok) diags.push_back(make_error("E201", r.span, msg, e.gid));
    };
    auto target = [&](const GidRef& r) -> const Element* { return model.find(r.gid); };
    switch (e.kind) {
      case ElemKind::Inference:
        for (const auto& r : e.src)
          if (auto* t = target(r))
            endpoint(r, is_assertion(t->kind),
                     "inference source '" + r.gid + "' must be an assertion");
        for (const auto& r : e.tgt)
          if (auto* t = target(r))
            endpoint(r, is_assertion(t->kind),
                     "inference target '" + r.gid + "' must be an assertion");
        break;
      case ElemKind::Evidence:
        for (const auto& r : e.src)
          if (auto* t = target(r))
            endpoint(r, is_artifact_element(t->kind),
                     "evidence source '" + r.gid + "' must be an evidential artifact");
        for (const auto& r : e.tgt)
          if (auto* t = target(r))
            endpoint(r, is_assertion(t->kind),
                     "evidence target '" + r.gid + "' must be an assertion");
        break;
      case ElemKind::Context:
        for (const auto& r : e.src)
          if (auto* t = target(r))
            endpoint(r, is_artifact_element(t->kind) || is_assertion(t->kind),
                     "context source '" + r.gid + "' must be an artifact or assertion");
        for (const auto& r : e.tgt)
          if (auto* t = target(r))
            endpoint(r, is_assertion(t->kind),
                     "context target '" + r.gid + "' must be an assertion");
        break;
      case ElemKind::ArtifactRelation:
        for (const auto& r : e.src)
          if (auto* t = target(r))
            endpoint(r, is_artifact_element(t->kind),
                     "artifact relation source '" + r.gid + "' must be an artifact element");
        for (const auto& r : e.tgt)
          if (auto* t = target(r))
            endpoint(r, is_artifact_element(t->kind),
                     "artifact relation target '" + r.gid + "' must be an artifact element");
        break;
      case ElemKind::Claim:
        for (const auto& r : e.metaClaims)
          if (auto* t = target(r))
            endpoint(r, is_assertion(t->kind),
                     "meta-claim '" + r.gid + "' must be an assertion");
        if (e.declaration == AssertionDeclaration::Asserted && !hasIncoming.count(e.gid))
          diags.push_back(make_warning("W501", e.span,
                                       "claim '" + e.gid + "' is asserted but undeveloped",
                                       e.gid));
        break;
      default: break;
    }
  }
  sort_diagnostics(diags);
  return diags;
}

// Cascading: every dependent of a failed element gets one E301, attributed to
// the first failing root (in source order) that reaches it.
inline std::vector<Diagnostic> cascade(const AssuranceModel& model,
                                       const std::vector<Diagnostic>& base) {
  std::set<std::string> primary;
  for (const auto& d : base)
    if (d.severity == Severity::Error && d.subject) primary.insert(*d.subject);

  std::vector<Diagnostic> out = base;
  std::set<std::string> cascaded;
  for (const auto& e : model.elements()) {
    if (!primary.count(e.gid)) continue;
    for (const auto& dep : model.dependents(e.gid)) {
      if (primary.count(dep) || cascaded.count(dep)) continue;
      const Element* d = model.find(dep);
      if (!d) continue;
      cascaded.insert(dep);
      Diagnostic diag = make_error("E301", d->span,
                                   "invalidated by an error in a referenced element", dep);
      diag.causedBy = e.gid;
      out.push_back(std::move(diag));
    }
  }
  sort_diagnostics(out);
  return out;
}

// ---------------------------------------------------------------------------
// Claim support status.

enum class ClaimStatus { Supported, Unsupported, Assumed, Axiomatic, Defeated, NeedsSupport, Cited };

inline const char* claim_status_name(ClaimStatus s) {
  switch (s) {
    case ClaimStatus::Supported: return "Supported";
    case ClaimStatus::Unsupported: return "Unsupported";
    case ClaimStatus::Assumed: return "Assumed";
    case ClaimStatus::Axiomatic: return "Axiomatic";
    case ClaimStatus::Defeated: return "Defeated";
    case ClaimStatus::NeedsSupport: return "NeedsSupport";
    case ClaimStatus::Cited: return "Cited";
  }
  return "?";
}

class CyclicSupport : public Error {
 public:
  explicit CyclicSupport(std::vector<std::string> cycle)
      : Error("CyclicSupport", "support cycle: " + join(cycle)), gids(std::move(cycle)) {}
  std::vector<std::string> gids;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? " -> " : "") + v[i];
    return s;
  }
};

// Least fixed point over the acyclic support graph. `artifactVerdicts` maps
// artifact gids to the conjunction of their bound obligations' outcomes;
// artifacts without an entry are informal evidence.
inline std::map<std::string, ClaimStatus> claim_status(
    const AssuranceModel& model, const std::map<std::string, Verdict>& artifactVerdicts) {
  auto contributing = [](const Element& r) {
    switch (r.declaration) {
      case AssertionDeclaration::Asserted:
      case AssertionDeclaration::Axiomatic:
      case AssertionDeclaration::Assumed: return true;
      default: return false;
    }
  };

  // claim -> claim support edges (via inference sources) for ordering
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& e : model.elements()) {
    if (e.kind != ElemKind::Inference) continue;
    for (const auto& s : e.src) {
      const Element* se = model.find(s.gid);
      if (!se || se->kind != ElemKind::Claim) continue;
      for (const auto& t : e.tgt) {
        const Element* te = model.find(t.gid);
        if (te && te->kind == ElemKind::Claim) succ[s.gid].push_back(t.gid);
      }
    }
  }

  // cycle detection
  std::map<std::string, int> mark;  // 0 unseen, 1 active, 2 done
  std::vector<std::string> stack;
  std::function<void(const std::string&)> dfs = [&](const std::string& v) {
    mark[v] = 1;
    stack.push_back(v);
    for (const auto& w : succ[v]) {
      if (mark[w] == 1) {
        auto it = std::find(stack.begin(), stack.end(), w);
        throw CyclicSupport(std::vector<std::string>(it, stack.end()));
      }
      if (mark[w] == 0) dfs(w);
    }
    stack.pop_back();
    mark[v] = 2;
  };
  for (const auto& e : model.elements())
    if (e.kind == ElemKind::Claim && mark[e.gid] == 0) dfs(e.gid);

  std::map<std::string, ClaimStatus> status;

  std::function<ClaimStatus(const Element&)> compute = [&](const Element& c) -> ClaimStatus {
    auto it = status.find(c.gid);
    if (it != status.end()) return it->second;
    switch (c.declaration) {
      case AssertionDeclaration::Defeated: return status[c.gid] = ClaimStatus::Defeated;
      case AssertionDeclaration::Axiomatic: return status[c.gid] = ClaimStatus::Axiomatic;
      case AssertionDeclaration::Assumed: return status[c.gid] = ClaimStatus::Assumed;
      case AssertionDeclaration::AsCited: return status[c.gid] = ClaimStatus::Cited;
      default: break;
    }
    auto srcGood = [&](const Element& rel, const GidRef& sref) {
      const Element* s = model.find(sref.gid);
      if (!s) return false;
      if (s->kind == ElemKind::Claim) {
        auto st = compute(*s);
        return st == ClaimStatus::Supported || st == ClaimStatus::Axiomatic ||
               st == ClaimStatus::Assumed;
      }
      if (is_artifact_element(s->kind)) {
        auto v = artifactVerdicts.find(s->gid);
        if (v != artifactVerdicts.end()) return v->second.pass();
        return rel.declaration == AssertionDeclaration::Axiomatic ||
               rel.declaration == AssertionDeclaration::Assumed;
      }
      return false;
    };
    bool defeated = false, supported = false;
    for (const auto& r : model.elements()) {
      if (r.kind != ElemKind::Inference && r.kind != ElemKind::Evidence) continue;
      if (!contributing(r)) continue;
      bool targets = false;
      for (const auto& t : r.tgt) targets = targets || t.gid == c.gid;
      if (!targets) continue;
      bool allGood = !r.src.empty();
      for (const auto& s : r.src) allGood = allGood && srcGood(r, s);
      if (!allGood) continue;
      (r.isCounter ? defeated : supported) = true;
    }
    if (defeated) return status[c.gid] = ClaimStatus::Defeated;
    if (supported) return status[c.gid] = ClaimStatus::Supported;
    return status[c.gid] = c.declaration == AssertionDeclaration::NeedsSupport
                               ? ClaimStatus::NeedsSupport
                               : ClaimStatus::Unsupported;
  };

  for (const auto& e : model.elements())
    if (e.kind == ElemKind::Claim) compute(e);
  return status;
}

}  // namespace argus
