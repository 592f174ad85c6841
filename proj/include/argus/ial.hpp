#pragma once

#include <optional>
#include <string>
#include <vector>

#include "argus/sacm.hpp"

namespace argus {

namespace ial_detail {

enum class TokKind { Keyword, Ident, Description, Str, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;   // keyword or identifier
  std::string value;  // description / string contents
  SourceSpan span;
  SourceSpan valueSpan;  // where a description's interior starts
};

inline const char* kKeywords[] = {
    "Claim",    "Inference",   "Context",   "Evidence",     "Artifact",  "Requirement",
    "Resource", "Activity",    "Event",     "Participant",  "Technique", "ArtifactRelation",
    "module",   "src",         "tgt",       "metaClaims",   "isAbstract", "isCitation",
    "version",  "date",        "location",  "startTime",    "endTime",   "occurrence",
    "asserted", "axiomatic",   "assumed",   "defeated",     "needsSupport", "asCited",
    "isCounter", "reasoning",
};

inline bool is_keyword(const std::string& s) {
  for (auto* k : kKeywords)
    if (s == k) return true;
  return false;
}

inline bool is_element_keyword(const std::string& s) {
  static const char* kws[] = {"Claim",    "Inference", "Context",     "Evidence",
                              "Artifact", "Requirement", "Resource",  "Activity",
                              "Event",    "Participant", "Technique", "ArtifactRelation"};
  for (auto* k : kws)
    if (s == k) return true;
  return false;
}

}  // namespace ial_detail

// Tokens cover all non-whitespace input; triple-quoted descriptions are
// single tokens.
inline std::vector<ial_detail::Token> tokenize(const std::string& text, const std::string& file,
                                               std::vector<Diagnostic>* diagsOut = nullptr) {
  using namespace ial_detail;
  std::vector<Token> out;
  std::vector<Diagnostic> diags;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(c);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(text[i]);
      continue;
    }
    SourceSpan sp{file, line, col, 1};
    if (text.compare(i, 3, "\"\"\"") == 0) {
      advance(c);
      advance(text[i]);
      advance(text[i]);
      SourceSpan inner{file, line, col, 1};
      std::string body;
      bool closed = false;
      while (i < text.size()) {
        if (text.compare(i, 3, "\"\"\"") == 0) {
          advance(text[i]);
          advance(text[i]);
          advance(text[i]);
          closed = true;
          break;
        }
        body.push_back(text[i]);
        advance(text[i]);
      }
      if (!closed) {
        diags.push_back(make_error("E001", sp, "unterminated description"));
        break;
      }
      Token t;
      t.kind = TokKind::Description;
      t.value = std::move(body);
      t.span = sp;
      t.valueSpan = inner;
      out.push_back(std::move(t));
      continue;
    }
    if (c == '"') {
      advance(c);
      std::string body;
      bool closed = false;
      while (i < text.size() && text[i] != '\n') {
        if (text[i] == '"') {
          advance(text[i]);
          closed = true;
          break;
        }
        body.push_back(text[i]);
        advance(text[i]);
      }
      if (!closed) {
        diags.push_back(make_error("E001", sp, "unterminated string"));
        continue;
      }
      Token t;
      t.kind = TokKind::Str;
      t.value = std::move(body);
      t.span = sp;
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string w;
      SourceSpan wsp = sp;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        w.push_back(text[i]);
        advance(text[i]);
      }
      wsp.length = static_cast<int>(w.size());
      Token t;
      t.kind = is_keyword(w) ? TokKind::Keyword : TokKind::Ident;
      t.text = std::move(w);
      t.span = wsp;
      out.push_back(std::move(t));
      continue;
    }
    diags.push_back(make_error("E001", sp, std::string("illegal character '") + c + "'"));
    advance(c);
  }
  ial_detail::Token end;
  end.kind = TokKind::End;
  end.span = SourceSpan{file, line, col, 1};
  out.push_back(std::move(end));
  if (diagsOut) *diagsOut = std::move(diags);
  return out;
}

// Splits description text on @{Kind gid} antiquotations; literal text is
// preserved byte-exactly.
inline MultiLangString parse_description(const std::string& text, const SourceSpan& origin,
                                         std::vector<Diagnostic>& diags) {
  MultiLangString mls;
  int line = origin.line, col = origin.col;
  std::string cur;
  size_t i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  auto flush = [&] {
    if (!cur.empty()) {
      MlsSegment seg;
      seg.text = cur;
      mls.segments.push_back(std::move(seg));
      cur.clear();
    }
  };
  while (i < text.size()) {
    if (text[i] == '@' && i + 1 < text.size() && text[i + 1] == '{') {
      SourceSpan refSpan{origin.file, line, col, 2};
      flush();
      advance('@');
      advance('{');
      std::string inner;
      bool closed = false;
      while (i < text.size()) {
        if (text[i] == '}') {
          advance('}');
          closed = true;
          break;
        }
        if (text[i] == '\n') break;
        inner.push_back(text[i]);
        advance(text[i]);
      }
      refSpan.length = static_cast<int>(inner.size()) + 3;
      if (!closed) {
        diags.push_back(make_error("E001", refSpan, "malformed antiquotation"));
        continue;
      }
      // inner: Kind <ws> gid
      size_t sp = inner.find_first_of(" \t");
      std::string kindName = sp == std::string::npos ? inner : inner.substr(0, sp);
      std::string target;
      if (sp != std::string::npos) {
        size_t g = inner.find_first_not_of(" \t", sp);
        if (g != std::string::npos) target = inner.substr(g);
      }
      while (!target.empty() && (target.back() == ' ' || target.back() == '\t')) target.pop_back();
      auto kind = antiquotation_kind_from(kindName);
      if (!kind) {
        diags.push_back(make_error("E001", refSpan, "unknown antiquotation kind '" + kindName + "'"));
        continue;
      }
      if (!valid_gid(target)) {
        diags.push_back(make_error("E001", refSpan, "malformed antiquotation"));
        continue;
      }
      MlsSegment seg;
      seg.isRef = true;
      seg.kind = *kind;
      seg.target = target;
      seg.span = refSpan;
      mls.segments.push_back(std::move(seg));
      continue;
    }
    cur.push_back(text[i]);
    advance(text[i]);
  }
  flush();
  return mls;
}

inline MultiLangString parse_description(const std::string& text,
                                         std::vector<Diagnostic>& diags) {
  return parse_description(text, SourceSpan{"<description>", 1, 1, 1}, diags);
}

// ---------------------------------------------------------------------------
// Element parser with per-element recovery: an error skips to the next
// top-level element keyword, so later elements still parse.

class IalParser {
 public:
  IalParser(const std::string& text, std::string file) : file_(std::move(file)) {
    toks_ = tokenize(text, file_, &lexDiags_);
  }

  std::pair<std::vector<RawElement>, std::vector<Diagnostic>> parse() {
    std::vector<RawElement> elems;
    diags_ = lexDiags_;
    if (at_kw("module")) {
      take();
      if (at(ial_detail::TokKind::Ident)) {
        moduleName_ = take().text;
      } else {
        diags_.push_back(make_error("E001", cur().span, "expected module name"));
      }
    } else if (!at(ial_detail::TokKind::End)) {
      diags_.push_back(make_error("E001", cur().span, "expected 'module'"));
    }
    while (!at(ial_detail::TokKind::End)) {
      if (cur().kind == ial_detail::TokKind::Keyword &&
          ial_detail::is_element_keyword(cur().text)) {
        try {
          elems.push_back(parse_element());
        } catch (gcl_fail& f) {
          diags_.push_back(f.d);
          recover();
        }
      } else {
        diags_.push_back(make_error("E001", cur().span,
                                    "expected an element keyword, found '" +
                                        (cur().text.empty() ? "?" : cur().text) + "'"));
        take();
        recover();
      }
    }
    sort_diagnostics(diags_);
    return {std::move(elems), std::move(diags_)};
  }

  const std::string& module_name() const { return moduleName_; }

 private:
  struct gcl_fail {
    Diagnostic d;
  };

  const ial_detail::Token& cur() const { return toks_[pos_]; }
  ial_detail::Token take() { return toks_[pos_++]; }
  bool at(ial_detail::TokKind k) const { return cur().kind == k; }
  bool at_kw(const char* w) const {
    return cur().kind == ial_detail::TokKind::Keyword && cur().text == w;
  }

  [[noreturn]] void fail(const std::string& msg, std::optional<SourceSpan> sp = std::nullopt) {
    throw gcl_fail{make_error("E001", sp.value_or(cur().span), msg)};
  }

  void recover() {
    while (!at(ial_detail::TokKind::End)) {
      if (cur().kind == ial_detail::TokKind::Keyword &&
          ial_detail::is_element_keyword(cur().text))
        return;
      take();
    }
  }

  std::string expect_gid() {
    if (!at(ial_detail::TokKind::Ident)) fail("expected an identifier");
    return take().text;
  }

  std::string expect_str(const char* what) {
    if (!at(ial_detail::TokKind::Str)) fail(std::string("expected a string after '") + what + "'");
    return take().value;
  }

  RawElement parse_element() {
    auto kwTok = take();
    const std::string& kw = kwTok.text;
    RawElement e;
    e.span = kwTok.span;
    if (kw == "Claim") e.kind = ElemKind::Claim;
    else if (kw == "Inference") e.kind = ElemKind::Inference;
    else if (kw == "Context") e.kind = ElemKind::Context;
    else if (kw == "Evidence") e.kind = ElemKind::Evidence;
    else if (kw == "Artifact") e.kind = ElemKind::Artifact;
    else if (kw == "Requirement") e.kind = ElemKind::Requirement;
    else if (kw == "Resource") e.kind = ElemKind::Resource;
    else if (kw == "Activity") e.kind = ElemKind::Activity;
    else if (kw == "Event") e.kind = ElemKind::Event;
    else if (kw == "Participant") e.kind = ElemKind::Participant;
    else if (kw == "Technique") e.kind = ElemKind::Technique;
    else e.kind = ElemKind::ArtifactRelation;

    e.gid = expect_gid();

    bool sawDecl = false, sawSrc = false, sawTgt = false;
    bool isRel = is_relationship(e.kind);
    bool takesSrcTgt = isRel || e.kind == ElemKind::ArtifactRelation;

    while (!at(ial_detail::TokKind::Description)) {
      if (at(ial_detail::TokKind::End)) fail("expected description");
      if (!at(ial_detail::TokKind::Keyword)) fail("expected a clause keyword or description");
      auto t = cur();
      const std::string& w = t.text;
      if (auto d = declaration_from(w)) {
        take();
        if (sawDecl) fail("duplicate assertion declaration", t.span);
        e.declaration = *d;
        sawDecl = true;
        continue;
      }
      if (w == "isAbstract" || w == "isCitation") {
        take();
        if (e.kind != ElemKind::Claim) fail("'" + w + "' is only valid on Claim", t.span);
        (w == "isAbstract" ? e.isAbstract : e.isCitation) = true;
        continue;
      }
      if (w == "isCounter") {
        take();
        if (e.kind != ElemKind::Inference && e.kind != ElemKind::Evidence)
          fail("'isCounter' is only valid on Inference and Evidence", t.span);
        e.isCounter = true;
        continue;
      }
      if (w == "metaClaims") {
        take();
        if (e.kind != ElemKind::Claim) fail("'metaClaims' is only valid on Claim", t.span);
        while (at(ial_detail::TokKind::Ident)) {
          auto g = take();
          e.metaClaims.push_back({g.text, g.span});
        }
        continue;
      }
      if (w == "src") {
        take();
        if (!takesSrcTgt) fail("'src' is not valid here", t.span);
        if (sawTgt) fail("'src' must precede 'tgt'", t.span);
        sawSrc = true;
        while (at(ial_detail::TokKind::Ident)) {
          auto g = take();
          e.src.push_back({g.text, g.span});
        }
        if (e.src.empty()) fail("expected at least one source identifier", t.span);
        continue;
      }
      if (w == "tgt") {
        take();
        if (!takesSrcTgt) fail("'tgt' is not valid here", t.span);
        sawTgt = true;
        while (at(ial_detail::TokKind::Ident)) {
          auto g = take();
          e.tgt.push_back({g.text, g.span});
        }
        if (e.tgt.empty()) fail("expected at least one target identifier", t.span);
        continue;
      }
      if (w == "version" || w == "date") {
        take();
        if (e.kind != ElemKind::Artifact && e.kind != ElemKind::Requirement)
          fail("'" + w + "' is only valid on Artifact and Requirement", t.span);
        (w == "version" ? e.version : e.date) = expect_str(w.c_str());
        continue;
      }
      if (w == "location") {
        take();
        if (e.kind != ElemKind::Resource) fail("'location' is only valid on Resource", t.span);
        e.location = expect_str("location");
        if (e.location->empty()) fail("resource location must be nonempty", t.span);
        continue;
      }
      if (w == "startTime" || w == "endTime") {
        take();
        if (e.kind != ElemKind::Activity)
          fail("'" + w + "' is only valid on Activity", t.span);
        (w == "startTime" ? e.startTime : e.endTime) = expect_str(w.c_str());
        continue;
      }
      if (w == "occurrence") {
        take();
        if (e.kind != ElemKind::Event) fail("'occurrence' is only valid on Event", t.span);
        e.occurrence = expect_str("occurrence");
        continue;
      }
      if (w == "reasoning") {
        take();
        if (!isRel) fail("'reasoning' is only valid on relationships", t.span);
        if (!at(ial_detail::TokKind::Description)) fail("expected description after 'reasoning'");
        auto d = take();
        e.reasoning = parse_description(d.value, d.valueSpan, diags_);
        continue;
      }
      // an element keyword here means the description (and possibly more) is
      // missing
      if (ial_detail::is_element_keyword(w)) break;
      fail("unexpected '" + w + "'", t.span);
    }

    // structural completeness
    if (isRel) {
      if (!sawDecl) fail("expected an assertion declaration");
      if (!sawSrc) fail("expected 'src'");
      if (!sawTgt) fail("expected 'tgt'");
    }
    if (e.kind == ElemKind::ArtifactRelation && (!sawSrc || !sawTgt))
      fail(!sawSrc ? "expected 'src'" : "expected 'tgt'");
    if (e.kind == ElemKind::Resource && !e.location) fail("expected 'location'");
    if (!at(ial_detail::TokKind::Description)) fail("expected description");
    auto d = take();
    e.content = parse_description(d.value, d.valueSpan, diags_);
    return e;
  }

  std::string file_;
  std::string moduleName_;
  std::vector<ial_detail::Token> toks_;
  std::vector<Diagnostic> lexDiags_;
  std::vector<Diagnostic> diags_;
  size_t pos_ = 0;
};

inline std::pair<std::vector<RawElement>, std::vector<Diagnostic>> parse_ial(
    const std::string& text, const std::string& file, std::string* moduleName = nullptr) {
  IalParser p(text, file);
  auto r = p.parse();
  if (moduleName) *moduleName = p.module_name();
  return r;
}

// ---------------------------------------------------------------------------
// Printer; reparsing yields a structurally equal element.

inline std::string mls_str(const MultiLangString& m) { return "\"\"\"" + m.flat() + "\"\"\""; }

inline std::string element_str(const Element& e) {
  std::string s = elem_kind_name(e.kind);
  s += " " + e.gid;
  if (e.isAbstract) s += " isAbstract";
  if (e.isCitation) s += " isCitation";
  if (!e.metaClaims.empty()) {
    s += " metaClaims";
    for (const auto& r : e.metaClaims) s += " " + r.gid;
  }
  if (is_relationship(e.kind) || e.declaration != AssertionDeclaration::Asserted)
    s += std::string(" ") + declaration_keyword(e.declaration);
  if (e.isCounter) s += " isCounter";
  if (e.version) s += " version \"" + *e.version + "\"";
  if (e.date) s += " date \"" + *e.date + "\"";
  if (e.location) s += " location \"" + *e.location + "\"";
  if (e.startTime) s += " startTime \"" + *e.startTime + "\"";
  if (e.endTime) s += " endTime \"" + *e.endTime + "\"";
  if (e.occurrence) s += " occurrence \"" + *e.occurrence + "\"";
  if (!e.src.empty()) {
    s += " src";
    for (const auto& r : e.src) s += " " + r.gid;
  }
  if (!e.tgt.empty()) {
    s += " tgt";
    for (const auto& r : e.tgt) s += " " + r.gid;
  }
  if (e.reasoning) s += " reasoning " + mls_str(*e.reasoning);
  s += " " + mls_str(e.content);
  return s;
}

inline bool mls_eq(const MultiLangString& a, const MultiLangString& b) {
  if (a.segments.size() != b.segments.size()) return false;
  for (size_t i = 0; i < a.segments.size(); ++i) {
    const auto& x = a.segments[i];
    const auto& y = b.segments[i];
    if (x.isRef != y.isRef || x.text != y.text || x.kind != y.kind || x.target != y.target)
      return false;
  }
  return true;
}

// Structural equality, ignoring source locations.
inline bool element_eq(const Element& a, const Element& b) {
  auto refs_eq = [](const std::vector<GidRef>& x, const std::vector<GidRef>& y) {
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
      if (x[i].gid != y[i].gid) return false;
    return true;
  };
  if (a.kind != b.kind || a.gid != b.gid || a.declaration != b.declaration ||
      a.isAbstract != b.isAbstract || a.isCitation != b.isCitation || a.isCounter != b.isCounter)
    return false;
  if (!refs_eq(a.metaClaims, b.metaClaims) || !refs_eq(a.src, b.src) || !refs_eq(a.tgt, b.tgt))
    return false;
  if (a.version != b.version || a.date != b.date || a.location != b.location ||
      a.startTime != b.startTime || a.endTime != b.endTime || a.occurrence != b.occurrence)
    return false;
  if (a.reasoning.has_value() != b.reasoning.has_value()) return false;
  if (a.reasoning && !mls_eq(*a.reasoning, *b.reasoning)) return false;
  return mls_eq(a.content, b.content);
}

}  // namespace argus
