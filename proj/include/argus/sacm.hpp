#pragma once

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "argus/diag.hpp"

namespace argus {

// gid: [A-Za-z_][A-Za-z0-9_]*
inline bool valid_gid(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

enum class AntiquotationKind {
  Claim,
  Artifact,
  Requirement,
  Resource,
  Activity,
  Event,
  Participant,
  Technique,
  Obligation,
  Program,
  Predicate,
};

inline const char* antiquotation_kind_name(AntiquotationKind k) {
  switch (k) {
    case AntiquotationKind::Claim: return "Claim";
    case AntiquotationKind::Artifact: return "Artifact";
    case AntiquotationKind::Requirement: return "Requirement";
    case AntiquotationKind::Resource: return "Resource";
    case AntiquotationKind::Activity: return "Activity";
    case AntiquotationKind::Event: return "Event";
    case AntiquotationKind::Participant: return "Participant";
    case AntiquotationKind::Technique: return "Technique";
    case AntiquotationKind::Obligation: return "Obligation";
    case AntiquotationKind::Program: return "Program";
    case AntiquotationKind::Predicate: return "Predicate";
  }
  return "?";
}

inline std::optional<AntiquotationKind> antiquotation_kind_from(const std::string& s) {
  static const std::pair<const char*, AntiquotationKind> table[] = {
      {"Claim", AntiquotationKind::Claim},
      {"Artifact", AntiquotationKind::Artifact},
      {"Requirement", AntiquotationKind::Requirement},
      {"Resource", AntiquotationKind::Resource},
      {"Activity", AntiquotationKind::Activity},
      {"Event", AntiquotationKind::Event},
      {"Participant", AntiquotationKind::Participant},
      {"Technique", AntiquotationKind::Technique},
      {"Obligation", AntiquotationKind::Obligation},
      {"Program", AntiquotationKind::Program},
      {"Predicate", AntiquotationKind::Predicate},
  };
  for (auto& [n, k] : table)
    if (s == n) return k;
  return std::nullopt;
}

enum class AssertionDeclaration { Asserted, Axiomatic, Defeated, Assumed, NeedsSupport, AsCited };

inline const char* declaration_keyword(AssertionDeclaration d) {
  switch (d) {
    case AssertionDeclaration::Asserted: return "asserted";
    case AssertionDeclaration::Axiomatic: return "axiomatic";
    case AssertionDeclaration::Defeated: return "defeated";
    case AssertionDeclaration::Assumed: return "assumed";
    case AssertionDeclaration::NeedsSupport: return "needsSupport";
    case AssertionDeclaration::AsCited: return "asCited";
  }
  return "?";
}

inline std::optional<AssertionDeclaration> declaration_from(const std::string& s) {
  static const std::pair<const char*, AssertionDeclaration> table[] = {
      {"asserted", AssertionDeclaration::Asserted},
      {"axiomatic", AssertionDeclaration::Axiomatic},
      {"defeated", AssertionDeclaration::Defeated},
      {"assumed", AssertionDeclaration::Assumed},
      {"needsSupport", AssertionDeclaration::NeedsSupport},
      {"asCited", AssertionDeclaration::AsCited},
  };
  for (auto& [n, k] : table)
    if (s == n) return k;
  return std::nullopt;
}

// Description text: literal segments interleaved with kind-checked
// references.
struct MlsSegment {
  bool isRef = false;
  std::string text;         // literal segment
  AntiquotationKind kind = AntiquotationKind::Claim;
  std::string target;       // referenced gid
  SourceSpan span;
};

struct MultiLangString {
  std::vector<MlsSegment> segments;

  std::string flat() const {
    std::string s;
    for (const auto& seg : segments) {
      if (seg.isRef)
        s += "@{" + std::string(antiquotation_kind_name(seg.kind)) + " " + seg.target + "}";
      else
        s += seg.text;
    }
    return s;
  }
};

enum class ElemKind {
  Claim,
  Inference,
  Context,
  Evidence,
  Artifact,
  Requirement,
  Resource,
  Activity,
  Event,
  Participant,
  Technique,
  ArtifactRelation,
};

inline const char* elem_kind_name(ElemKind k) {
  switch (k) {
    case ElemKind::Claim: return "Claim";
    case ElemKind::Inference: return "Inference";
    case ElemKind::Context: return "Context";
    case ElemKind::Evidence: return "Evidence";
    case ElemKind::Artifact: return "Artifact";
    case ElemKind::Requirement: return "Requirement";
    case ElemKind::Resource: return "Resource";
    case ElemKind::Activity: return "Activity";
    case ElemKind::Event: return "Event";
    case ElemKind::Participant: return "Participant";
    case ElemKind::Technique: return "Technique";
    case ElemKind::ArtifactRelation: return "ArtifactRelation";
  }
  return "?";
}

inline bool is_relationship(ElemKind k) {
  return k == ElemKind::Inference || k == ElemKind::Context || k == ElemKind::Evidence;
}
inline bool is_artifact_element(ElemKind k) {
  switch (k) {
    case ElemKind::Artifact:
    case ElemKind::Requirement:
    case ElemKind::Resource:
    case ElemKind::Activity:
    case ElemKind::Event:
    case ElemKind::Participant:
    case ElemKind::Technique:
    case ElemKind::ArtifactRelation: return true;
    default: return false;
  }
}
// Claims and relationships are both assertions.
inline bool is_assertion(ElemKind k) { return k == ElemKind::Claim || is_relationship(k); }

struct GidRef {
  std::string gid;
  SourceSpan span;
};

// One SACM element, as parsed. Identity is the gid; which optional fields are
// meaningful depends on the kind.
struct Element {
  ElemKind kind = ElemKind::Claim;
  std::string gid;
  SourceSpan span;

  AssertionDeclaration declaration = AssertionDeclaration::Asserted;
  bool isAbstract = false;
  bool isCitation = false;
  bool isCounter = false;
  std::vector<GidRef> metaClaims;
  std::vector<GidRef> src, tgt;

  std::optional<std::string> version, date, location, startTime, endTime, occurrence;

  MultiLangString content;
  std::optional<MultiLangString> reasoning;  // argumentation strategy text

  // All gids this element mentions (src, tgt, metaClaims, description refs).
  std::vector<GidRef> mentioned() const {
    std::vector<GidRef> out;
    for (const auto& r : src) out.push_back(r);
    for (const auto& r : tgt) out.push_back(r);
    for (const auto& r : metaClaims) out.push_back(r);
    for (const auto& seg : content.segments)
      if (seg.isRef) out.push_back({seg.target, seg.span});
    if (reasoning)
      for (const auto& seg : reasoning->segments)
        if (seg.isRef) out.push_back({seg.target, seg.span});
    return out;
  }
};

using RawElement = Element;  // parser output: references still unresolved

class DuplicateGid : public Error {
 public:
  explicit DuplicateGid(const std::string& gid)
      : Error("DuplicateGid", "duplicate gid: " + gid), gid(gid) {}
  std::string gid;
};
class Unresolved : public Error {
 public:
  explicit Unresolved(const std::string& gid)
      : Error("Unresolved", "unresolved reference: " + gid), gid(gid) {}
  std::string gid;
};
class KindMismatch : public Error {
 public:
  KindMismatch(const std::string& gid, AntiquotationKind expected, const std::string& actual)
      : Error("KindMismatch", "reference " + gid + " expects " +
                                  antiquotation_kind_name(expected) + " but the element is " +
                                  actual),
        gid(gid),
        expected(expected),
        actual(actual) {}
  std::string gid;
  AntiquotationKind expected;
  std::string actual;
};

// Indexed element store with reverse-dependency tracking. reverseDeps maps a
// gid to the elements that mention it, including mentions of gids that never
// resolve (needed for cascading).
class AssuranceModel {
 public:
  const std::vector<Element>& elements() const { return elements_; }

  const Element* find(const std::string& gid) const {
    auto it = index_.find(gid);
    if (it == index_.end()) return nullptr;
    return &elements_[it->second];
  }

  void add_element(Element e) {
    if (index_.count(e.gid)) throw DuplicateGid(e.gid);
    index_[e.gid] = elements_.size();
    for (const auto& r : e.mentioned()) reverseDeps_[r.gid].insert(e.gid);
    if (!reverseDeps_.count(e.gid)) reverseDeps_[e.gid];  // ensure key exists
    elements_.push_back(std::move(e));
  }

  // Element of the given antiquotation kind, or Unresolved/KindMismatch.
  const Element& lookup(const std::string& gid, AntiquotationKind expected) const {
    const Element* e = find(gid);
    if (!e) throw Unresolved(gid);
    bool ok = false;
    switch (expected) {
      case AntiquotationKind::Claim: ok = e->kind == ElemKind::Claim; break;
      case AntiquotationKind::Artifact: ok = e->kind == ElemKind::Artifact; break;
      case AntiquotationKind::Requirement: ok = e->kind == ElemKind::Requirement; break;
      case AntiquotationKind::Resource: ok = e->kind == ElemKind::Resource; break;
      case AntiquotationKind::Activity: ok = e->kind == ElemKind::Activity; break;
      case AntiquotationKind::Event: ok = e->kind == ElemKind::Event; break;
      case AntiquotationKind::Participant: ok = e->kind == ElemKind::Participant; break;
      case AntiquotationKind::Technique: ok = e->kind == ElemKind::Technique; break;
      // formal-artifact kinds never resolve to model elements
      case AntiquotationKind::Obligation:
      case AntiquotationKind::Program:
      case AntiquotationKind::Predicate: ok = false; break;
    }
    if (!ok) throw KindMismatch(gid, expected, elem_kind_name(e->kind));
    return *e;
  }

  // Transitive closure of reverseDeps from gid, excluding gid itself.
  std::set<std::string> dependents(const std::string& gid) const {
    std::set<std::string> seen;
    std::vector<std::string> work{gid};
    while (!work.empty()) {
      auto cur = work.back();
      work.pop_back();
      auto it = reverseDeps_.find(cur);
      if (it == reverseDeps_.end()) continue;
      for (const auto& d : it->second)
        if (seen.insert(d).second) work.push_back(d);
    }
    seen.erase(gid);
    return seen;
  }

  const std::unordered_map<std::string, std::set<std::string>>& reverse_deps() const {
    return reverseDeps_;
  }

  // Recomputes the reference relation from element fields; used by the
  // consistency property tests.
  std::unordered_map<std::string, std::set<std::string>> recompute_reverse_deps() const {
    std::unordered_map<std::string, std::set<std::string>> out;
    for (const auto& e : elements_) {
      out[e.gid];
      for (const auto& r : e.mentioned()) out[r.gid].insert(e.gid);
    }
    return out;
  }

 private:
  std::vector<Element> elements_;
  std::unordered_map<std::string, size_t> index_;
  std::unordered_map<std::string, std::set<std::string>> reverseDeps_;
};

}  // namespace argus
