#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "argus/prog.hpp"
#include "argus/wlp.hpp"

namespace argus {

// A named verification goal. Hoare obligations keep the target program's
// name for printing; valid goals may embed wp/wlp terms, expanded by the
// checker before evaluation.
struct Obligation {
  enum class Kind { Hoare, Valid, NMods, Equiv };

  std::string gid;
  Kind kind = Kind::Valid;
  SourceSpan span;

  ExprPtr pre, post;     // hoare
  std::string progName;  // hoare
  ExprPtr goal;          // valid
  ProgPtr prog, prog2;   // nmods target / equiv pair
  std::vector<Path> vars;  // nmods
};

// One parsed .gcl module. Predicates and program definitions carry the
// namespace scope they were typed against (empty scope = root schema);
// frame interiors reference definitions of the matching scope.
struct GclModule {
  struct PredDef {
    std::string name;
    Path scope;
    ExprPtr expr;
  };
  struct ProgDef {
    std::string name;
    Path scope;
    ProgPtr prog;
  };

  std::string name;
  Schema schema;
  std::vector<PredDef> preds;
  std::vector<ProgDef> progs;
  std::vector<Obligation> obligations;
  // interleaved pred/prog declaration order ('p' = pred, 'd' = def), kept so
  // printing preserves definition-before-use; not part of module equality
  std::vector<std::pair<char, size_t>> declSeq;

  const PredDef* find_pred(const std::string& n) const {
    for (const auto& p : preds)
      if (p.name == n) return &p;
    return nullptr;
  }
  const ProgDef* find_prog(const std::string& n) const {
    for (const auto& p : progs)
      if (p.name == n) return &p;
    return nullptr;
  }
  const Obligation* find_obligation(const std::string& n) const {
    for (const auto& o : obligations)
      if (o.gid == n) return &o;
    return nullptr;
  }
};

inline bool obligation_eq(const Obligation& a, const Obligation& b) {
  return a.gid == b.gid && a.kind == b.kind && expr_eq(a.pre, b.pre) && expr_eq(a.post, b.post) &&
         a.progName == b.progName && expr_eq(a.goal, b.goal) && prog_eq(a.prog, b.prog) &&
         prog_eq(a.prog2, b.prog2) && a.vars == b.vars;
}

inline bool module_eq(const GclModule& a, const GclModule& b) {
  if (a.name != b.name || !(a.schema == b.schema)) return false;
  if (a.preds.size() != b.preds.size() || a.progs.size() != b.progs.size() ||
      a.obligations.size() != b.obligations.size())
    return false;
  for (size_t i = 0; i < a.preds.size(); ++i) {
    if (a.preds[i].name != b.preds[i].name || a.preds[i].scope != b.preds[i].scope ||
        !expr_eq(a.preds[i].expr, b.preds[i].expr))
      return false;
  }
  for (size_t i = 0; i < a.progs.size(); ++i) {
    if (a.progs[i].name != b.progs[i].name || a.progs[i].scope != b.progs[i].scope ||
        !prog_eq(a.progs[i].prog, b.progs[i].prog))
      return false;
  }
  for (size_t i = 0; i < a.obligations.size(); ++i)
    if (!obligation_eq(a.obligations[i], b.obligations[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Lexer

namespace gcl_detail {

enum class Tok {
  Ident,
  Int,
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  ChoiceBox,  // []
  Comma,
  Semi,
  Colon,
  Dot,
  DotDot,
  Assign,  // :=
  Arrow,   // ->
  Eq,
  Neq,
  Lt,
  Leq,
  Gt,
  Geq,
  Iff,  // <=>
  ImpliesSym,
  Plus,
  Minus,
  Bang,
  AndSym,
  OrSym,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long ival = 0;
  SourceSpan span;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

inline std::vector<Token> lex(const std::string& text, const std::string& file,
                              std::vector<Diagnostic>& diags) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto span = [&](int len) { return SourceSpan{file, line, col, len}; };
  auto push = [&](Tok k, std::string t, int len) {
    Token tok;
    tok.kind = k;
    tok.text = std::move(t);
    tok.span = span(len);
    out.push_back(std::move(tok));
    col += len;
    i += static_cast<size_t>(len);
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') {
        ++i;
        ++col;
      }
      continue;
    }
    if (ident_start(c)) {
      size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string w = text.substr(i, j - i);
      push(Tok::Ident, w, static_cast<int>(j - i));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      Token tok;
      tok.kind = Tok::Int;
      tok.text = text.substr(i, j - i);
      tok.ival = std::stol(tok.text);
      tok.span = span(static_cast<int>(j - i));
      out.push_back(std::move(tok));
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    auto two = text.substr(i, 2);
    auto three = text.substr(i, 3);
    if (three == "<=>") { push(Tok::Iff, three, 3); continue; }
    if (two == ":=") { push(Tok::Assign, two, 2); continue; }
    if (two == "->") { push(Tok::Arrow, two, 2); continue; }
    if (two == "[]") { push(Tok::ChoiceBox, two, 2); continue; }
    if (two == "..") { push(Tok::DotDot, two, 2); continue; }
    if (two == "!=") { push(Tok::Neq, two, 2); continue; }
    if (two == "<=") { push(Tok::Leq, two, 2); continue; }
    if (two == ">=") { push(Tok::Geq, two, 2); continue; }
    if (two == "=>") { push(Tok::ImpliesSym, two, 2); continue; }
    if (two == "/\\") { push(Tok::AndSym, two, 2); continue; }
    if (two == "\\/") { push(Tok::OrSym, two, 2); continue; }
    switch (c) {
      case '{': push(Tok::LBrace, "{", 1); break;
      case '}': push(Tok::RBrace, "}", 1); break;
      case '(': push(Tok::LParen, "(", 1); break;
      case ')': push(Tok::RParen, ")", 1); break;
      case '[': push(Tok::LBracket, "[", 1); break;
      case ']': push(Tok::RBracket, "]", 1); break;
      case ',': push(Tok::Comma, ",", 1); break;
      case ';': push(Tok::Semi, ";", 1); break;
      case ':': push(Tok::Colon, ":", 1); break;
      case '.': push(Tok::Dot, ".", 1); break;
      case '=': push(Tok::Eq, "=", 1); break;
      case '<': push(Tok::Lt, "<", 1); break;
      case '>': push(Tok::Gt, ">", 1); break;
      case '+': push(Tok::Plus, "+", 1); break;
      case '-': push(Tok::Minus, "-", 1); break;
      case '!': push(Tok::Bang, "!", 1); break;
      default:
        diags.push_back(make_error("E001", span(1),
                                   std::string("illegal character '") + c + "'"));
        ++col;
        ++i;
        break;
    }
  }
  Token end;
  end.kind = Tok::End;
  end.span = span(1);
  out.push_back(end);
  return out;
}

struct ParseFail {
  Diagnostic diag;
};

}  // namespace gcl_detail

// ---------------------------------------------------------------------------
// Parser

class GclParser {
 public:
  GclParser(std::string text, std::string file) : file_(std::move(file)) {
    toks_ = gcl_detail::lex(text, file_, diags_);
  }

  std::pair<GclModule, std::vector<Diagnostic>> parse() {
    GclModule m;
    try {
      expect_kw("gclmodule");
      m.name = expect_ident("module name");
      expect(gcl_detail::Tok::LBrace, "'{'");
      mod_ = &m;
      while (!at(gcl_detail::Tok::RBrace) && !at(gcl_detail::Tok::End)) {
        try {
          parse_decl(m);
        } catch (gcl_detail::ParseFail& f) {
          diags_.push_back(f.diag);
          recover();
        }
      }
      expect(gcl_detail::Tok::RBrace, "'}'");
    } catch (gcl_detail::ParseFail& f) {
      diags_.push_back(f.diag);
    }
    sort_diagnostics(diags_);
    return {std::move(m), std::move(diags_)};
  }

 private:
  using Tok = gcl_detail::Tok;
  using Token = gcl_detail::Token;

  // --- token plumbing -------------------------------------------------------

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(size_t k = 1) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_kw(const char* w) const { return cur().kind == Tok::Ident && cur().text == w; }
  Token take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg, std::optional<SourceSpan> sp = std::nullopt,
                         const char* code = "E001") {
    gcl_detail::ParseFail f;
    f.diag = make_error(code, sp.value_or(cur().span), msg);
    throw f;
  }

  void expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    take();
  }
  void expect_kw(const char* w) {
    if (!at_kw(w)) fail(std::string("expected '") + w + "'");
    take();
  }
  std::string expect_ident(const char* what) {
    if (!at(Tok::Ident)) fail(std::string("expected ") + what);
    auto t = take();
    if (t.text == "new") fail("'new' is reserved", t.span);
    return t.text;
  }

  void recover() {
    static const char* kDeclKw[] = {"state", "pred", "def", "obligation"};
    while (!at(Tok::End) && !at(Tok::RBrace)) {
      if (cur().kind == Tok::Ident)
        for (auto* k : kDeclKw)
          if (cur().text == k) return;
      take();
    }
  }

  // --- declarations ---------------------------------------------------------

  void parse_decl(GclModule& m) {
    if (at_kw("state")) {
      take();
      if (haveSchema_) fail("duplicate state block");
      std::vector<SchemaNode> roots = parse_ns_body();
      try {
        m.schema = Schema(std::move(roots));
      } catch (const Error& e) {
        fail(e.what(), std::nullopt, "E102");
      }
      haveSchema_ = true;
      return;
    }
    if (at_kw("pred")) {
      auto kw = take();
      if (!haveSchema_) fail("state block must precede declarations", kw.span);
      auto name = expect_ident("predicate name");
      check_fresh_name(name, kw.span);
      expect(Tok::Assign, "':='");
      auto [scope, expr] = parse_scoped_expr();
      if (!expr->type->is_boolean()) fail("predicate must be boolean", kw.span, "E102");
      m.declSeq.emplace_back('p', m.preds.size());
      m.preds.push_back({name, scope, expr});
      return;
    }
    if (at_kw("def")) {
      auto kw = take();
      if (!haveSchema_) fail("state block must precede declarations", kw.span);
      auto name = expect_ident("program name");
      check_fresh_name(name, kw.span);
      expect(Tok::Assign, "':='");
      auto [scope, prog] = parse_scoped_prog();
      m.declSeq.emplace_back('d', m.progs.size());
      m.progs.push_back({name, scope, prog});
      return;
    }
    if (at_kw("obligation")) {
      auto kw = take();
      if (!haveSchema_) fail("state block must precede declarations", kw.span);
      Obligation ob;
      ob.gid = expect_ident("obligation name");
      ob.span = kw.span;
      if (mod_->find_obligation(ob.gid)) fail("duplicate name: " + ob.gid, kw.span, "E103");
      expect(Tok::Colon, "':'");
      parse_obkind(ob);
      m.obligations.push_back(std::move(ob));
      return;
    }
    fail("expected 'state', 'pred', 'def' or 'obligation'");
  }

  void check_fresh_name(const std::string& n, const SourceSpan& sp) {
    if (mod_->find_pred(n) || mod_->find_prog(n))
      fail("duplicate name: " + n, sp, "E103");
  }

  std::vector<SchemaNode> parse_ns_body() {
    expect(Tok::LBrace, "'{'");
    std::vector<SchemaNode> nodes;
    while (!at(Tok::RBrace)) {
      if (at_kw("ns")) {
        take();
        auto name = expect_ident("namespace name");
        auto kids = parse_ns_body();
        nodes.push_back(SchemaNode::ns(name, std::move(kids)));
      } else {
        auto name = expect_ident("variable name");
        expect(Tok::Colon, "':'");
        auto ty = parse_type();
        expect(Tok::Semi, "';'");
        nodes.push_back(SchemaNode::leaf(name, ty));
      }
    }
    take();  // }
    return nodes;
  }

  FTypePtr parse_type() {
    if (at_kw("bool")) {
      take();
      return FiniteType::boolean();
    }
    if (at_kw("int")) {
      take();
      expect(Tok::LBracket, "'['");
      long lo = parse_int_lit();
      expect(Tok::DotDot, "'..'");
      long hi = parse_int_lit();
      expect(Tok::RBracket, "']'");
      if (lo > hi) fail("empty int range", std::nullopt, "E102");
      return FiniteType::bounded_int(lo, hi);
    }
    if (at_kw("enum")) {
      take();
      return FiniteType::enumeration(parse_name_list());
    }
    if (at_kw("option")) {
      take();
      return FiniteType::optional(parse_type());
    }
    if (at_kw("set")) {
      take();
      return FiniteType::set_of(parse_name_list());
    }
    fail("expected a type");
  }

  long parse_int_lit() {
    bool neg = false;
    if (at(Tok::Minus)) {
      take();
      neg = true;
    }
    if (!at(Tok::Int)) fail("expected an integer");
    long v = take().ival;
    return neg ? -v : v;
  }

  std::vector<std::string> parse_name_list() {
    expect(Tok::LParen, "'('");
    std::vector<std::string> names;
    names.push_back(expect_ident("name"));
    while (at(Tok::Comma)) {
      take();
      names.push_back(expect_ident("name"));
    }
    expect(Tok::RParen, "')'");
    return names;
  }

  // --- scope handling -------------------------------------------------------
  //
  // A definition is typed against the innermost namespace that accommodates
  // it: the deepest namespaces are tried first and the root schema last; the
  // first scope under which the body parses wins. When nothing parses, the
  // root attempt's error is reported.

  std::vector<Path> all_scopes() const {
    std::vector<Path> scopes;
    std::function<void(const std::vector<SchemaNode>&, Path)> walk =
        [&](const std::vector<SchemaNode>& nodes, Path prefix) {
          for (const auto& n : nodes) {
            if (n.is_leaf()) continue;
            Path p = prefix;
            p.segs.push_back(n.name);
            scopes.push_back(p);
            walk(n.children, p);
          }
        };
    walk(mod_->schema.roots(), Path{});
    std::reverse(scopes.begin(), scopes.end());
    scopes.emplace_back();  // root
    return scopes;
  }

  Schema scope_schema(const Path& scope) const {
    return scope.empty() ? mod_->schema : mod_->schema.subschema(scope);
  }

  std::pair<Path, ExprPtr> parse_scoped_expr() {
    size_t start = pos_;
    std::optional<gcl_detail::ParseFail> lastErr;
    for (const auto& scope : all_scopes()) {
      pos_ = start;
      try {
        Schema sch = scope_schema(scope);
        return {scope, parse_expr(sch, scope, /*allowWp=*/scope.empty())};
      } catch (gcl_detail::ParseFail& f) {
        lastErr = f;  // the final attempt is the root scope
      }
    }
    throw *lastErr;
  }

  std::pair<Path, ProgPtr> parse_scoped_prog() {
    size_t start = pos_;
    std::optional<gcl_detail::ParseFail> lastErr;
    for (const auto& scope : all_scopes()) {
      pos_ = start;
      try {
        Schema sch = scope_schema(scope);
        return {scope, parse_prog(sch, scope)};
      } catch (gcl_detail::ParseFail& f) {
        lastErr = f;
      }
    }
    throw *lastErr;
  }

  // --- obligations ----------------------------------------------------------

  void parse_obkind(Obligation& ob) {
    const Schema& root = mod_->schema;
    if (at_kw("hoare")) {
      take();
      ob.kind = Obligation::Kind::Hoare;
      expect(Tok::LBrace, "'{'");
      ob.pre = parse_root_expr();
      expect(Tok::RBrace, "'}'");
      auto t = cur();
      ob.progName = expect_ident("program name");
      const auto* pd = mod_->find_prog(ob.progName);
      if (!pd) fail("unknown program: " + ob.progName, t.span, "E101");
      if (!pd->scope.empty()) fail("program is not in root scope: " + ob.progName, t.span, "E102");
      ob.prog = pd->prog;
      expect(Tok::LBrace, "'{'");
      ob.post = parse_root_expr();
      expect(Tok::RBrace, "'}'");
      return;
    }
    if (at_kw("valid")) {
      take();
      ob.kind = Obligation::Kind::Valid;
      ob.goal = parse_root_expr(/*allowWp=*/true);
      return;
    }
    if (at_kw("nmods")) {
      take();
      ob.kind = Obligation::Kind::NMods;
      expect(Tok::LParen, "'('");
      ob.prog = parse_prog(root, Path{});
      expect(Tok::RParen, "')'");
      expect(Tok::LBrace, "'{'");
      while (true) {
        auto t = cur();
        Path p = parse_path();
        if (!root.find_leaf(p) && !root.is_namespace(p))
          fail("no such variable or namespace: " + p.str(), t.span, "E101");
        ob.vars.push_back(p);
        if (!at(Tok::Comma)) break;
        take();
      }
      expect(Tok::RBrace, "'}'");
      return;
    }
    if (at_kw("equiv")) {
      take();
      ob.kind = Obligation::Kind::Equiv;
      expect(Tok::LParen, "'('");
      ob.prog = parse_prog(root, Path{});
      expect(Tok::RParen, "')'");
      expect(Tok::LParen, "'('");
      ob.prog2 = parse_prog(root, Path{});
      expect(Tok::RParen, "')'");
      return;
    }
    fail("expected 'hoare', 'valid', 'nmods' or 'equiv'");
  }

  ExprPtr parse_root_expr(bool allowWp = false) {
    return parse_expr(mod_->schema, Path{}, allowWp);
  }

  // --- expressions ----------------------------------------------------------
  //
  // Literals whose type is not locally determined (enum constructors, ints,
  // None, Some, set displays) stay pending until an operand with a concrete
  // type fixes them.

  struct PExpr {
    ExprPtr e;  // resolved, or
    std::function<ExprPtr(const FTypePtr&)> make;
    SourceSpan span;
    bool resolved() const { return e != nullptr; }
  };

  PExpr presolved(ExprPtr e, SourceSpan sp) { return PExpr{std::move(e), nullptr, sp}; }

  ExprPtr resolve_now(PExpr& p, const FTypePtr& want) {
    ExprPtr e;
    if (p.resolved()) {
      e = p.e;
    } else {
      try {
        e = p.make(want);
      } catch (const Error& err) {
        fail(err.what(), p.span, "E102");
      }
    }
    if (want && !same_type(e->type, want))
      fail("expected " + want->name() + ", found " + e->type->name(), p.span, "E102");
    return e;
  }

  std::pair<ExprPtr, ExprPtr> unify(PExpr& a, PExpr& b, const char* what) {
    if (!a.resolved() && !b.resolved())
      fail(std::string("cannot infer operand types of ") + what, a.span, "E102");
    if (a.resolved()) {
      auto rb = resolve_now(b, a.e->type);
      return {a.e, rb};
    }
    auto ra = resolve_now(a, b.e->type);
    return {ra, b.e};
  }

  struct Binder {
    std::string name;
    FTypePtr type;
  };

  ExprPtr parse_expr(const Schema& sch, const Path& scope, bool allowWp) {
    std::vector<Binder> env;
    auto p = parse_iff(sch, scope, allowWp, env);
    return resolve_now(p, bool_type());
  }

  PExpr parse_iff(const Schema& sch, const Path& scope, bool allowWp, std::vector<Binder>& env) {
    auto a = parse_imp(sch, scope, allowWp, env);
    while (at(Tok::Iff)) {
      auto t = take();
      auto b = parse_imp(sch, scope, allowWp, env);
      auto ra = resolve_now(a, bool_type());
      auto rb = resolve_now(b, bool_type());
      a = presolved(wrap(t.span, [&] { return mk_eq(ra, rb); }), t.span);
    }
    return a;
  }

  PExpr parse_imp(const Schema& sch, const Path& scope, bool allowWp, std::vector<Binder>& env) {
    auto a = parse_or(sch, scope, allowWp, env);
    if (at(Tok::ImpliesSym)) {
      auto t = take();
      auto b = parse_imp(sch, scope, allowWp, env);  // right-assoc
      auto ra = resolve_now(a, bool_type());
      auto rb = resolve_now(b, bool_type());
      return presolved(wrap(t.span, [&] { return mk_implies(ra, rb); }), t.span);
    }
    return a;
  }

  PExpr parse_or(const Schema& sch, const Path& scope, bool allowWp, std::vector<Binder>& env) {
    auto a = parse_and(sch, scope, allowWp, env);
    while (at(Tok::OrSym)) {
      auto t = take();
      auto b = parse_and(sch, scope, allowWp, env);
      auto ra = resolve_now(a, bool_type());
      auto rb = resolve_now(b, bool_type());
      a = presolved(wrap(t.span, [&] { return mk_or(ra, rb); }), t.span);
    }
    return a;
  }

  PExpr parse_and(const Schema& sch, const Path& scope, bool allowWp, std::vector<Binder>& env) {
    auto a = parse_not(sch, scope, allowWp, env);
    while (at(Tok::AndSym)) {
      auto t = take();
      auto b = parse_not(sch, scope, allowWp, env);
      auto ra = resolve_now(a, bool_type());
      auto rb = resolve_now(b, bool_type());
      a = presolved(wrap(t.span, [&] { return mk_and(ra, rb); }), t.span);
    }
    return a;
  }

  PExpr parse_not(const Schema& sch, const Path& scope, bool allowWp, std::vector<Binder>& env) {
    if (at(Tok::Bang)) {
      auto t = take();
      auto a = parse_not(sch, scope, allowWp, env);
      auto ra = resolve_now(a, bool_type());
      return presolved(wrap(t.span, [&] { return mk_not(ra); }), t.span);
    }
    return parse_cmp(sch, scope, allowWp, env);
  }

  PExpr parse_cmp(const Schema& sch, const Path& scope, bool allowWp, std::vector<Binder>& env) {
    auto a = parse_sum(sch, scope, allowWp, env);
    if (at(Tok::Eq) || at(Tok::Neq) || at(Tok::Lt) || at(Tok::Leq) || at(Tok::Gt) || at(Tok::Geq)) {
      auto t = take();
      auto b = parse_sum(sch, scope, allowWp, env);
      auto [ra, rb] = unify(a, b, t.text.c_str());
      return presolved(wrap(t.span,
                            [&]() -> ExprPtr {
                              switch (t.kind) {
                                case Tok::Eq: return mk_eq(ra, rb);
                                case Tok::Neq: return mk_neq(ra, rb);
                                case Tok::Lt: return mk_lt(ra, rb);
                                case Tok::Leq: return mk_leq(ra, rb);
                                case Tok::Gt: return mk_lt(rb, ra);
                                default: return mk_leq(rb, ra);
                              }
                            }),
                       t.span);
    }
    if (at_kw("in")) {
      auto t = take();
      if (at(Tok::LBrace)) {
        // membership in a literal set of the subject's type
        take();
        if (!a.resolved()) fail("cannot infer type of 'in' subject", a.span, "E102");
        std::vector<std::uint32_t> ords;
        if (!at(Tok::RBrace)) {
          while (true) {
            auto el = parse_atom(sch, scope, /*allowWp=*/false, env);
            auto sp = el.span;
            auto lit = resolve_now(el, a.e->type);
            if (lit->op != EOp::Lit) fail("set members must be literal values", sp, "E102");
            ords.push_back(lit->ord);
            if (!at(Tok::Comma)) break;
            take();
          }
        }
        expect(Tok::RBrace, "'}'");
        auto ra = a.e;
        return presolved(wrap(t.span, [&] { return mk_in_set(ra, ords); }), t.span);
      }
      auto b = parse_sum(sch, scope, allowWp, env);
      if (!b.resolved()) fail("cannot infer type of set expression", b.span, "E102");
      if (!b.e->type->is_set()) fail("'in' needs a set on the right", b.span, "E102");
      auto elemTy = FiniteType::enumeration(b.e->type->ctors);
      auto ra = resolve_now(a, elemTy);
      auto rb = b.e;
      return presolved(wrap(t.span, [&] { return mk_member(ra, rb); }), t.span);
    }
    return a;
  }

  PExpr parse_sum(const Schema& sch, const Path& scope, bool allowWp, std::vector<Binder>& env) {
    auto a = parse_atom(sch, scope, allowWp, env);
    while (at(Tok::Plus)) {
      auto t = take();
      auto b = parse_atom(sch, scope, allowWp, env);
      auto [ra, rb] = unify(a, b, "+");
      a = presolved(wrap(t.span, [&] { return mk_plus(ra, rb); }), t.span);
    }
    return a;
  }

  template <class F>
  ExprPtr wrap(const SourceSpan& sp, F f) {
    try {
      return f();
    } catch (const Error& e) {
      fail(e.what(), sp, "E102");
    }
  }

  PExpr parse_atom(const Schema& sch, const Path& scope, bool allowWp, std::vector<Binder>& env) {
    auto t = cur();
    if (at(Tok::LParen)) {
      take();
      auto e = parse_iff(sch, scope, allowWp, env);
      expect(Tok::RParen, "')'");
      return e;
    }
    if (at(Tok::Int) || at(Tok::Minus)) {
      long v = parse_int_lit();
      return PExpr{nullptr,
                   [v](const FTypePtr& want) -> ExprPtr {
                     if (!want || !want->is_int())
                       throw Error("TypeMismatch", "integer literal needs an int context");
                     return mk_lit(want, want->ord_of_int(v));
                   },
                   t.span};
    }
    if (at(Tok::LBrace)) {
      // set display; element names resolve against the expected set type
      take();
      std::vector<std::string> names;
      if (!at(Tok::RBrace)) {
        while (true) {
          names.push_back(expect_ident("set element"));
          if (!at(Tok::Comma)) break;
          take();
        }
      }
      expect(Tok::RBrace, "'}'");
      return PExpr{nullptr,
                   [names](const FTypePtr& want) -> ExprPtr {
                     if (!want || !want->is_set())
                       throw Error("TypeMismatch", "set display needs a set context");
                     std::uint32_t mask = 0;
                     for (const auto& n : names) {
                       int ix = want->ctor_index(n);
                       if (ix < 0) throw Error("TypeMismatch", "not a set element: " + n);
                       mask |= 1u << ix;
                     }
                     return mk_lit(want, mask);
                   },
                   t.span};
    }
    if (at(Tok::Ident)) {
      const std::string& w = t.text;
      static const char* kReserved[] = {"gclmodule", "state",  "ns",    "pred",  "def",
                                        "obligation", "hoare", "valid", "nmods", "equiv",
                                        "skip",       "abort", "frame", "havoc", "where",
                                        "in",         "bool",  "int",   "enum",  "option",
                                        "set"};
      for (auto* r : kReserved)
        if (w == r) fail("expected an expression");
      if (w == "true" || w == "false") {
        take();
        return presolved(mk_bool(w == "true"), t.span);
      }
      if (w == "None") {
        take();
        return PExpr{nullptr,
                     [](const FTypePtr& want) -> ExprPtr {
                       if (!want || !want->is_optional())
                         throw Error("TypeMismatch", "None needs an option context");
                       return mk_lit(want, 0);
                     },
                     t.span};
      }
      if (w == "Some") {
        take();
        expect(Tok::LParen, "'('");
        auto inner = parse_iff(sch, scope, allowWp, env);
        expect(Tok::RParen, "')'");
        if (inner.resolved()) {
          auto ie = inner.e;
          return presolved(wrap(t.span, [&] { return mk_some(ie); }), t.span);
        }
        auto mk = inner.make;
        return PExpr{nullptr,
                     [mk](const FTypePtr& want) -> ExprPtr {
                       if (!want || !want->is_optional())
                         throw Error("TypeMismatch", "Some needs an option context");
                       return mk_some(mk(want->inner));
                     },
                     t.span};
      }
      if (w == "the") {
        take();
        expect(Tok::LParen, "'('");
        auto inner = parse_iff(sch, scope, allowWp, env);
        expect(Tok::RParen, "')'");
        if (!inner.resolved()) fail("cannot infer type of 'the' argument", t.span, "E102");
        auto ie = inner.e;
        return presolved(wrap(t.span, [&] { return mk_the(ie); }), t.span);
      }
      if (w == "exists" || w == "forall") {
        take();
        auto name = expect_ident("binder name");
        expect(Tok::Colon, "':'");
        auto ty = parse_type();
        expect(Tok::Dot, "'.'");
        env.push_back({name, ty});
        auto body = parse_iff(sch, scope, allowWp, env);
        env.pop_back();
        auto rb = resolve_now(body, bool_type());
        bool ex = (w == "exists");
        return presolved(
            wrap(t.span, [&] { return ex ? mk_exists(name, ty, rb) : mk_forall(name, ty, rb); }),
            t.span);
      }
      if ((w == "wp" || w == "wlp") && peek().kind == Tok::LParen) {
        if (!allowWp) fail("wp/wlp terms are only allowed in 'valid' goals", t.span);
        take();
        take();  // (
        auto pt = cur();
        auto pname = expect_ident("program name");
        const auto* pd = mod_->find_prog(pname);
        if (!pd) fail("unknown program: " + pname, pt.span, "E101");
        if (!pd->scope.empty()) fail("program is not in root scope: " + pname, pt.span, "E102");
        expect(Tok::Comma, "','");
        auto inner = parse_iff(sch, scope, allowWp, env);
        expect(Tok::RParen, "')'");
        auto ri = resolve_now(inner, bool_type());
        return presolved(mk_wp_app(pname, ri, w == "wlp"), t.span);
      }
      if (w == "new") {
        take();
        for (auto it = env.rbegin(); it != env.rend(); ++it)
          if (it->name == "new") return presolved(mk_bound("new", it->type), t.span);
        fail("'new' is only bound inside a havoc constraint", t.span);
      }
      // binder?
      for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->name == w) {
          take();
          return presolved(mk_bound(w, it->type), t.span);
        }
      // predicate reference?
      if (const auto* pd = mod_->find_pred(w)) {
        take();
        return presolved(inline_pred(*pd, scope, t.span), t.span);
      }
      // schema path?
      if (peek().kind == Tok::Dot || sch.find_leaf(Path::parse(w))) {
        auto before = pos_;
        Path p = parse_path();
        if (sch.find_leaf(p)) {
          return presolved(mk_var(sch, p), t.span);
        }
        pos_ = before;
        if (peek().kind == Tok::Dot) fail("no such variable: " + p.str(), t.span, "E101");
      }
      // otherwise: a constructor literal, pending on type context
      take();
      std::string name = w;
      return PExpr{nullptr,
                   [name](const FTypePtr& want) -> ExprPtr {
                     if (!want)
                       throw Error("TypeMismatch", "cannot infer type of '" + name + "'");
                     if (want->kind == FiniteType::Kind::Enumeration) {
                       int ix = want->ctor_index(name);
                       if (ix < 0)
                         throw Error("TypeMismatch",
                                     "'" + name + "' is not a value of " + want->name());
                       return mk_lit(want, static_cast<std::uint32_t>(ix));
                     }
                     throw Error("TypeMismatch", "unknown name: " + name);
                   },
                   t.span};
    }
    fail("expected an expression");
  }

  // Inlines a predicate reference, coercing it up when used from an outer
  // scope.
  ExprPtr inline_pred(const GclModule::PredDef& pd, const Path& scope, const SourceSpan& sp) {
    if (pd.scope == scope) return pd.expr;
    if (scope.is_prefix_of(pd.scope)) {
      // referenced from an enclosing scope: grow the predicate's state space
      Path rel(std::vector<std::string>(pd.scope.segs.begin() + static_cast<long>(scope.segs.size()),
                                        pd.scope.segs.end()));
      Schema outer = scope.empty() ? mod_->schema : mod_->schema.subschema(scope);
      auto range = outer.ns_range(rel);
      if (!range) fail("internal scope error for predicate " + pd.name, sp, "E102");
      return coerce_up(pd.expr, rel, range->first);
    }
    fail("predicate " + pd.name + " is scoped to " +
             (pd.scope.empty() ? std::string("the root") : pd.scope.str()) +
             " and cannot be used here",
         sp, "E102");
  }

  Path parse_path() {
    std::vector<std::string> segs;
    segs.push_back(expect_ident("a name"));
    while (at(Tok::Dot)) {
      take();
      segs.push_back(expect_ident("a name"));
    }
    return Path(std::move(segs));
  }

  // --- programs --------------------------------------------------------------

  ProgPtr parse_prog(const Schema& sch, const Path& scope) {
    auto a = parse_prog_seq(sch, scope);
    while (at(Tok::ChoiceBox)) {
      take();
      auto b = parse_prog_seq(sch, scope);
      a = mk_choice(a, b);
    }
    return a;
  }

  ProgPtr parse_prog_seq(const Schema& sch, const Path& scope) {
    auto a = parse_prog_unit(sch, scope);
    while (at(Tok::Semi)) {
      take();
      auto b = parse_prog_unit(sch, scope);
      a = mk_seq(a, b);
    }
    return a;
  }

  ProgPtr parse_prog_unit(const Schema& sch, const Path& scope) {
    auto t = cur();
    if (at_kw("skip")) {
      take();
      return mk_skip();
    }
    if (at_kw("abort")) {
      take();
      return mk_abort();
    }
    if (at(Tok::LParen)) {
      // either a parenthesized program or the parenthesized guard of a
      // guarded command; the arrow after the expression decides
      size_t save = pos_;
      try {
        std::vector<Binder> env;
        auto g = parse_iff(sch, scope, /*allowWp=*/false, env);
        if (at(Tok::Arrow)) {
          auto rg = resolve_now(g, bool_type());
          take();
          auto body = parse_prog_unit(sch, scope);
          return mk_guard(rg, body);
        }
      } catch (gcl_detail::ParseFail&) {
      }
      pos_ = save;
      take();
      auto p = parse_prog(sch, scope);
      expect(Tok::RParen, "')'");
      return p;
    }
    if (at_kw("frame")) {
      take();
      auto pt = cur();
      Path ns = parse_path();
      if (!sch.is_namespace(ns)) fail("frame needs a namespace: " + ns.str(), pt.span, "E101");
      expect_kw("in");
      expect(Tok::LParen, "'('");
      Path innerScope = scope;
      for (auto& s : ns.segs) innerScope.segs.push_back(s);
      Schema innerSch = sch.subschema(ns);
      auto body = parse_prog(innerSch, innerScope);
      expect(Tok::RParen, "')'");
      return wrap_prog(t.span, [&] { return mk_frame(sch, ns, body); });
    }
    if (at_kw("havoc")) {
      take();
      auto pt = cur();
      Path target = parse_path();
      auto leaf = sch.find_leaf(target);
      if (!leaf) fail("no such variable: " + target.str(), pt.span, "E101");
      expect_kw("where");
      std::vector<Binder> env;
      env.push_back({"new", sch.leaf(*leaf).type});
      auto c = parse_iff(sch, scope, /*allowWp=*/false, env);
      auto rc = resolve_now(c, bool_type());
      return wrap_prog(t.span, [&] { return mk_havoc(sch, target, rc); });
    }
    // Assignment, named program, or guarded command. Try in that order with
    // backtracking; a guard is recognized by the arrow after its expression.
    if (at(Tok::Ident)) {
      size_t save = pos_;
      Path p = parse_path();
      if (at(Tok::Assign)) {
        take();
        if (!sch.find_leaf(p)) fail("no such variable: " + p.str(), t.span, "E101");
        std::vector<Binder> env;
        auto v = parse_iff(sch, scope, false, env);
        auto rv = resolve_now(v, sch.leaf(*sch.find_leaf(p)).type);
        return wrap_prog(t.span, [&] { return mk_assign(sch, p, rv); });
      }
      bool simpleName = p.segs.size() == 1;
      if (simpleName && !at(Tok::Arrow)) {
        if (const auto* pd = mod_->find_prog(p.segs[0])) {
          bool refOk = pd->scope == scope;
          // a name followed by expression syntax is a guard, not a reference
          bool looksLikeRef = at(Tok::Semi) || at(Tok::ChoiceBox) || at(Tok::RParen) ||
                              at(Tok::RBrace) || at(Tok::End) || at_kw("pred") || at_kw("def") ||
                              at_kw("obligation") || at_kw("state");
          if (refOk && looksLikeRef) return pd->prog;
          if (!refOk && looksLikeRef)
            fail("program " + pd->name + " is scoped elsewhere and cannot be used here", t.span,
                 "E102");
        }
      }
      pos_ = save;
    }
    // guarded command
    {
      std::vector<Binder> env;
      auto g = parse_iff(sch, scope, false, env);
      auto rg = resolve_now(g, bool_type());
      if (!at(Tok::Arrow)) fail("expected '->' after guard expression");
      take();
      auto body = parse_prog_unit(sch, scope);
      return mk_guard(rg, body);
    }
  }

  template <class F>
  ProgPtr wrap_prog(const SourceSpan& sp, F f) {
    try {
      return f();
    } catch (const Error& e) {
      fail(e.what(), sp, "E102");
    }
  }

  std::string file_;
  std::vector<gcl_detail::Token> toks_;
  std::vector<Diagnostic> diags_;
  size_t pos_ = 0;
  bool haveSchema_ = false;
  GclModule* mod_ = nullptr;
};

inline std::pair<GclModule, std::vector<Diagnostic>> parse_gcl(const std::string& text,
                                                               const std::string& file) {
  GclParser p(text, file);
  return p.parse();
}

// ---------------------------------------------------------------------------
// Printing. Definitions print fully inlined (references were resolved at
// parse time); reparsing yields a structurally equal module.

inline std::string schema_node_str(const SchemaNode& n, int indent) {
  std::string pad(static_cast<size_t>(indent), ' ');
  if (n.is_leaf()) return pad + n.name + " : " + n.type->name() + ";\n";
  std::string s = pad + "ns " + n.name + " {\n";
  for (const auto& c : n.children) s += schema_node_str(c, indent + 2);
  return s + pad + "}\n";
}

inline std::string module_str(const GclModule& m) {
  std::string s = "gclmodule " + m.name + " {\n  state {\n";
  for (const auto& r : m.schema.roots()) s += schema_node_str(r, 4);
  s += "  }\n";
  auto printPred = [&](const GclModule::PredDef& p) {
    s += "  pred " + p.name + " := " + expr_str(p.expr, 0) + "\n";
  };
  auto printProg = [&](const GclModule::ProgDef& p) {
    s += "  def " + p.name + " := " + prog_str(p.prog, 0) + "\n";
  };
  if (m.declSeq.size() == m.preds.size() + m.progs.size()) {
    for (const auto& [kind, ix] : m.declSeq)
      kind == 'p' ? printPred(m.preds[ix]) : printProg(m.progs[ix]);
  } else {
    for (const auto& p : m.preds) printPred(p);
    for (const auto& p : m.progs) printProg(p);
  }
  for (const auto& o : m.obligations) {
    s += "  obligation " + o.gid + " : ";
    switch (o.kind) {
      case Obligation::Kind::Hoare:
        s += "hoare {" + expr_str(o.pre, 0) + "} " + o.progName + " {" + expr_str(o.post, 0) + "}";
        break;
      case Obligation::Kind::Valid: s += "valid " + expr_str(o.goal, 0); break;
      case Obligation::Kind::NMods: {
        s += "nmods (" + prog_str(o.prog, 0) + ") {";
        for (size_t i = 0; i < o.vars.size(); ++i) s += (i ? ", " : "") + o.vars[i].str();
        s += "}";
        break;
      }
      case Obligation::Kind::Equiv:
        s += "equiv (" + prog_str(o.prog, 0) + ") (" + prog_str(o.prog2, 0) + ")";
        break;
    }
    s += "\n";
  }
  return s + "}\n";
}

}  // namespace argus
