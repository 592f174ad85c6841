#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "argus/schema.hpp"

namespace argus {

enum class EOp : std::uint8_t {
  Lit,
  Var,
  Bound,
  Eq,
  Lt,
  Leq,
  Plus,
  And,
  Or,
  Not,
  Implies,
  InSet,
  Some,
  The,
  Exists,
  Forall,
  Member,
  WpApp,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable typed expression over a schema's leaves. Leaf references are
// ordinal indices relative to the schema the expression was built against
// (frame interiors use the inner schema's indices).
struct Expr {
  EOp op = EOp::Lit;
  FTypePtr type;  // result type

  std::uint32_t ord = 0;   // Lit
  std::uint32_t leaf = 0;  // Var
  Path path;               // Var (for printing)
  std::string name;        // Bound / quantifier binder / WpApp program
  FTypePtr btype;          // quantifier binder type
  bool iswlp = false;      // WpApp selects wlp instead of wp

  ExprPtr a, b;                        // operands; quantifier body in a
  std::vector<std::uint32_t> setords;  // InSet literal ordinals, sorted

  std::vector<std::uint32_t> free;  // sorted leaf indices
  std::size_t hash = 0;
  bool has_wp = false;
};

inline const FTypePtr& bool_type() {
  static FTypePtr t = FiniteType::boolean();
  return t;
}

namespace detail {

inline std::vector<std::uint32_t> merge_free(const std::vector<std::uint32_t>& x,
                                             const std::vector<std::uint32_t>& y) {
  std::vector<std::uint32_t> out;
  out.reserve(x.size() + y.size());
  std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

inline std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

inline void finish(const std::shared_ptr<Expr>& e) {
  std::size_t h = static_cast<std::size_t>(e->op) * 1099511628211ull;
  h = mix(h, e->ord);
  h = mix(h, e->leaf);
  h = mix(h, std::hash<std::string>{}(e->name));
  h = mix(h, e->iswlp ? 7 : 3);
  for (auto o : e->setords) h = mix(h, o);
  if (e->op == EOp::Lit && e->type) h = mix(h, type_hash(*e->type));
  if (e->a) {
    h = mix(h, e->a->hash);
    e->free = e->a->free;
    e->has_wp = e->a->has_wp;
  }
  if (e->b) {
    h = mix(h, e->b->hash);
    e->free = merge_free(e->free, e->b->free);
    e->has_wp = e->has_wp || e->b->has_wp;
  }
  if (e->op == EOp::Var) e->free = {e->leaf};
  if (e->op == EOp::WpApp) e->has_wp = true;
  e->hash = h;
}

}  // namespace detail

inline bool expr_eq(const ExprPtr& x, const ExprPtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->hash != y->hash || x->op != y->op) return false;
  switch (x->op) {
    case EOp::Lit: return x->ord == y->ord && same_type(x->type, y->type);
    case EOp::Var: return x->leaf == y->leaf;
    case EOp::Bound: return x->name == y->name;
    default: break;
  }
  if (x->name != y->name || x->iswlp != y->iswlp || x->setords != y->setords) return false;
  if (x->op == EOp::Exists || x->op == EOp::Forall)
    if (!same_type(x->btype, y->btype)) return false;
  return expr_eq(x->a, y->a) && expr_eq(x->b, y->b);
}

inline bool mentions(const ExprPtr& e, std::uint32_t leaf) {
  return std::binary_search(e->free.begin(), e->free.end(), leaf);
}

// ---------------------------------------------------------------------------
// Constructors. Each applies local constant folding so engine output stays
// small; all folds are semantics-preserving and covered by the fold-soundness
// property tests.

inline ExprPtr mk_lit(FTypePtr t, std::uint32_t ord) {
  auto e = std::make_shared<Expr>();
  e->op = EOp::Lit;
  e->type = std::move(t);
  e->ord = ord;
  detail::finish(e);
  return e;
}

inline ExprPtr mk_true() {
  static ExprPtr t = mk_lit(bool_type(), 1);
  return t;
}
inline ExprPtr mk_false() {
  static ExprPtr f = mk_lit(bool_type(), 0);
  return f;
}
inline ExprPtr mk_bool(bool v) { return v ? mk_true() : mk_false(); }

inline bool is_lit(const ExprPtr& e) { return e->op == EOp::Lit; }
inline bool is_true(const ExprPtr& e) { return e->op == EOp::Lit && e->ord == 1 && e->type->is_boolean(); }
inline bool is_false(const ExprPtr& e) { return e->op == EOp::Lit && e->ord == 0 && e->type->is_boolean(); }

inline ExprPtr mk_var(const Schema& schema, const Path& p) {
  auto idx = schema.find_leaf(p);
  if (!idx) throw Error("UnknownPath", "no such variable: " + p.str());
  auto e = std::make_shared<Expr>();
  e->op = EOp::Var;
  e->leaf = *idx;
  e->path = p;
  e->type = schema.leaf(*idx).type;
  detail::finish(e);
  return e;
}

inline ExprPtr mk_bound(std::string name, FTypePtr t) {
  auto e = std::make_shared<Expr>();
  e->op = EOp::Bound;
  e->name = std::move(name);
  e->type = std::move(t);
  detail::finish(e);
  return e;
}

namespace detail {
inline void require_bool(const ExprPtr& e, const char* who) {
  if (!e->type->is_boolean()) throw Error("TypeMismatch", std::string(who) + ": expected bool operand");
}
inline void require_same(const ExprPtr& x, const ExprPtr& y, const char* who) {
  if (!same_type(x->type, y->type))
    throw Error("TypeMismatch", std::string(who) + ": operand types differ (" + x->type->name() +
                                    " vs " + y->type->name() + ")");
}
inline ExprPtr node(EOp op, FTypePtr t, ExprPtr a, ExprPtr b = nullptr) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->type = std::move(t);
  e->a = std::move(a);
  e->b = std::move(b);
  finish(e);
  return e;
}
}  // namespace detail

// Flattens an And-chain into a conjunct list.
inline void conjuncts_of(const ExprPtr& e, std::vector<ExprPtr>& out) {
  if (e->op == EOp::And) {
    conjuncts_of(e->a, out);
    conjuncts_of(e->b, out);
  } else if (!is_true(e)) {
    out.push_back(e);
  }
}

struct ExprHash {
  std::size_t operator()(const ExprPtr& e) const { return e->hash; }
};
struct ExprEq {
  bool operator()(const ExprPtr& x, const ExprPtr& y) const { return expr_eq(x, y); }
};
using ConjSet = std::unordered_set<ExprPtr, ExprHash, ExprEq>;

// Syntactic entailment: does the conjunct set S trivially imply g?
// Sound (never claims entailment that does not hold), far from complete.
inline bool entails(const ConjSet& S, const ExprPtr& g) {
  if (is_true(g)) return true;
  if (S.count(g)) return true;
  switch (g->op) {
    case EOp::And: return entails(S, g->a) && entails(S, g->b);
    case EOp::Or: return entails(S, g->a) || entails(S, g->b);
    case EOp::Implies: {
      ConjSet S2 = S;
      std::vector<ExprPtr> cs;
      conjuncts_of(g->a, cs);
      for (auto& c : cs) S2.insert(c);
      return entails(S2, g->b);
    }
    default: return false;
  }
}

inline ExprPtr mk_not(ExprPtr a) {
  detail::require_bool(a, "not");
  if (is_lit(a)) return mk_bool(a->ord == 0);
  if (a->op == EOp::Not) return a->a;
  return detail::node(EOp::Not, bool_type(), std::move(a));
}

inline ExprPtr mk_and(ExprPtr a, ExprPtr b) {
  detail::require_bool(a, "and");
  detail::require_bool(b, "and");
  if (is_true(a)) return b;
  if (is_true(b)) return a;
  if (is_false(a) || is_false(b)) return mk_false();
  if (expr_eq(a, b)) return a;
  return detail::node(EOp::And, bool_type(), std::move(a), std::move(b));
}

inline ExprPtr mk_or(ExprPtr a, ExprPtr b) {
  detail::require_bool(a, "or");
  detail::require_bool(b, "or");
  if (is_false(a)) return b;
  if (is_false(b)) return a;
  if (is_true(a) || is_true(b)) return mk_true();
  if (expr_eq(a, b)) return a;
  return detail::node(EOp::Or, bool_type(), std::move(a), std::move(b));
}

inline ExprPtr mk_implies(ExprPtr a, ExprPtr b) {
  detail::require_bool(a, "implies");
  detail::require_bool(b, "implies");
  if (is_true(a)) return b;
  if (is_false(a)) return mk_true();
  if (is_true(b)) return mk_true();
  if (expr_eq(a, b)) return mk_true();
  if (is_false(b)) return mk_not(std::move(a));
  if (!a->has_wp && !b->has_wp) {
    ConjSet S;
    std::vector<ExprPtr> cs;
    conjuncts_of(a, cs);
    for (auto& c : cs) S.insert(c);
    if (entails(S, b)) return mk_true();
  }
  return detail::node(EOp::Implies, bool_type(), std::move(a), std::move(b));
}

inline ExprPtr mk_eq(ExprPtr a, ExprPtr b) {
  detail::require_same(a, b, "=");
  if (is_lit(a) && is_lit(b)) return mk_bool(a->ord == b->ord);
  if (expr_eq(a, b)) return mk_true();
  return detail::node(EOp::Eq, bool_type(), std::move(a), std::move(b));
}

inline ExprPtr mk_neq(ExprPtr a, ExprPtr b) { return mk_not(mk_eq(std::move(a), std::move(b))); }

inline ExprPtr mk_lt(ExprPtr a, ExprPtr b) {
  detail::require_same(a, b, "<");
  if (!a->type->is_int()) throw Error("TypeMismatch", "<: expected int operands");
  if (is_lit(a) && is_lit(b)) return mk_bool(a->ord < b->ord);
  // domain bounds: nothing is below lo, nothing above hi
  if (is_lit(b) && b->ord == 0) return mk_false();
  if (is_lit(a) && a->type->int_value(a->ord) == a->type->hi) return mk_false();
  if (expr_eq(a, b)) return mk_false();
  return detail::node(EOp::Lt, bool_type(), std::move(a), std::move(b));
}

inline ExprPtr mk_leq(ExprPtr a, ExprPtr b) {
  detail::require_same(a, b, "<=");
  if (!a->type->is_int()) throw Error("TypeMismatch", "<=: expected int operands");
  if (is_lit(a) && is_lit(b)) return mk_bool(a->ord <= b->ord);
  if (is_lit(a) && a->ord == 0) return mk_true();
  if (is_lit(b) && b->type->int_value(b->ord) == b->type->hi) return mk_true();
  if (expr_eq(a, b)) return mk_true();
  return detail::node(EOp::Leq, bool_type(), std::move(a), std::move(b));
}

// Saturating addition: results clamp at the type bounds.
inline ExprPtr mk_plus(ExprPtr a, ExprPtr b) {
  detail::require_same(a, b, "+");
  if (!a->type->is_int()) throw Error("TypeMismatch", "+: expected int operands");
  FTypePtr t = a->type;
  if (is_lit(a) && is_lit(b)) {
    long v = t->int_value(a->ord) + t->int_value(b->ord);
    v = std::max(t->lo, std::min(t->hi, v));
    return mk_lit(t, t->ord_of_int(v));
  }
  return detail::node(EOp::Plus, t, std::move(a), std::move(b));
}

inline ExprPtr mk_in_set(ExprPtr a, std::vector<std::uint32_t> ords) {
  std::sort(ords.begin(), ords.end());
  ords.erase(std::unique(ords.begin(), ords.end()), ords.end());
  if (ords.empty()) return mk_false();
  if (ords.size() == a->type->cardinality()) return mk_true();
  if (is_lit(a)) return mk_bool(std::binary_search(ords.begin(), ords.end(), a->ord));
  auto e = std::make_shared<Expr>();
  e->op = EOp::InSet;
  e->type = bool_type();
  e->a = std::move(a);
  e->setords = std::move(ords);
  detail::finish(e);
  return e;
}

inline ExprPtr mk_some(ExprPtr a) {
  FTypePtr t = FiniteType::optional(a->type);
  if (is_lit(a)) return mk_lit(t, a->ord + 1);
  return detail::node(EOp::Some, t, std::move(a));
}

// the(None) yields the first value of the inner type; every corpus use guards
// definedness first, so the arbitrary value is never observable there.
inline ExprPtr mk_the(ExprPtr a) {
  if (!a->type->is_optional()) throw Error("TypeMismatch", "the: expected option operand");
  FTypePtr inner = a->type->inner;
  if (is_lit(a)) return mk_lit(inner, a->ord == 0 ? 0 : a->ord - 1);
  if (a->op == EOp::Some) return a->a;
  return detail::node(EOp::The, inner, std::move(a));
}

inline ExprPtr mk_member(ExprPtr elem, ExprPtr set) {
  if (!set->type->is_set()) throw Error("TypeMismatch", "in: expected a set on the right");
  if (elem->type->kind != FiniteType::Kind::Enumeration || elem->type->ctors != set->type->ctors)
    throw Error("TypeMismatch", "in: element type does not match set elements");
  if (is_lit(set)) {
    if (set->ord == 0) return mk_false();
    if (set->ord + 1 == set->type->cardinality()) return mk_true();
    if (is_lit(elem)) return mk_bool((set->ord >> elem->ord) & 1u);
  }
  return detail::node(EOp::Member, bool_type(), std::move(elem), std::move(set));
}

inline ExprPtr mk_wp_app(std::string prog, ExprPtr inner, bool iswlp) {
  detail::require_bool(inner, "wp");
  auto e = std::make_shared<Expr>();
  e->op = EOp::WpApp;
  e->type = bool_type();
  e->name = std::move(prog);
  e->iswlp = iswlp;
  e->a = std::move(inner);
  detail::finish(e);
  return e;
}

// ---------------------------------------------------------------------------
// Evaluation. Total over well-typed expressions; WpApp must be expanded first.

struct Env {
  std::vector<std::pair<std::string, std::uint32_t>> binds;
  std::uint32_t lookup(const std::string& n) const {
    for (auto it = binds.rbegin(); it != binds.rend(); ++it)
      if (it->first == n) return it->second;
    throw Error("UnboundName", "unbound name in expression: " + n);
  }
};

inline std::uint32_t eval(const ExprPtr& e, const State& s, Env& env) {
  switch (e->op) {
    case EOp::Lit: return e->ord;
    case EOp::Var: return s.at(e->leaf);
    case EOp::Bound: return env.lookup(e->name);
    case EOp::Eq: return eval(e->a, s, env) == eval(e->b, s, env) ? 1 : 0;
    case EOp::Lt: return eval(e->a, s, env) < eval(e->b, s, env) ? 1 : 0;
    case EOp::Leq: return eval(e->a, s, env) <= eval(e->b, s, env) ? 1 : 0;
    case EOp::Plus: {
      long v = e->type->int_value(eval(e->a, s, env)) + e->type->int_value(eval(e->b, s, env));
      v = std::max(e->type->lo, std::min(e->type->hi, v));
      return e->type->ord_of_int(v);
    }
    case EOp::And: return eval(e->a, s, env) && eval(e->b, s, env) ? 1 : 0;
    case EOp::Or: return eval(e->a, s, env) || eval(e->b, s, env) ? 1 : 0;
    case EOp::Not: return eval(e->a, s, env) ? 0 : 1;
    case EOp::Implies: return !eval(e->a, s, env) || eval(e->b, s, env) ? 1 : 0;
    case EOp::InSet: {
      auto v = eval(e->a, s, env);
      return std::binary_search(e->setords.begin(), e->setords.end(), v) ? 1 : 0;
    }
    case EOp::Some: return eval(e->a, s, env) + 1;
    case EOp::The: {
      auto v = eval(e->a, s, env);
      return v == 0 ? 0 : v - 1;
    }
    case EOp::Exists: {
      auto n = e->btype->cardinality();
      for (std::uint32_t v = 0; v < n; ++v) {
        env.binds.emplace_back(e->name, v);
        bool ok = eval(e->a, s, env) != 0;
        env.binds.pop_back();
        if (ok) return 1;
      }
      return 0;
    }
    case EOp::Forall: {
      auto n = e->btype->cardinality();
      for (std::uint32_t v = 0; v < n; ++v) {
        env.binds.emplace_back(e->name, v);
        bool ok = eval(e->a, s, env) != 0;
        env.binds.pop_back();
        if (!ok) return 0;
      }
      return 1;
    }
    case EOp::Member: {
      auto i = eval(e->a, s, env);
      auto m = eval(e->b, s, env);
      return (m >> i) & 1u;
    }
    case EOp::WpApp: throw Error("UnexpandedWp", "wp/wlp term evaluated before expansion");
  }
  throw Error("Internal", "eval: bad expression node");
}

inline std::uint32_t eval(const ExprPtr& e, const State& s) {
  Env env;
  return eval(e, s, env);
}

// Collects the type of every free leaf (from the Var nodes mentioning it).
inline void leaf_types_of(const ExprPtr& e, std::map<std::uint32_t, FTypePtr>& out) {
  if (e->op == EOp::Var) out.emplace(e->leaf, e->type);
  if (e->a) leaf_types_of(e->a, out);
  if (e->b) leaf_types_of(e->b, out);
}

namespace detail {
inline bool has_free_bound_rec(const Expr& e, std::vector<const std::string*>& scope) {
  switch (e.op) {
    case EOp::Bound:
      for (auto* n : scope)
        if (*n == e.name) return false;
      return true;
    case EOp::Exists:
    case EOp::Forall: {
      scope.push_back(&e.name);
      bool r = has_free_bound_rec(*e.a, scope);
      scope.pop_back();
      return r;
    }
    default:
      if (e.a && has_free_bound_rec(*e.a, scope)) return true;
      if (e.b && has_free_bound_rec(*e.b, scope)) return true;
      return false;
  }
}
}  // namespace detail

// Does the expression reference a bound variable it does not itself bind?
inline bool has_free_bound(const ExprPtr& e) {
  std::vector<const std::string*> scope;
  return detail::has_free_bound_rec(*e, scope);
}

// Exact bounded constant detection: evaluates `e` over every assignment of
// its free leaves (when that footprint is small) and reports a constant
// truth value if there is one. Open terms (free bound variables) are never
// probed.
inline std::optional<bool> const_probe(const ExprPtr& e, std::uint64_t maxStates = 4096) {
  if (!e->type->is_boolean() || e->has_wp) return std::nullopt;
  if (has_free_bound(e)) return std::nullopt;
  if (is_true(e)) return true;
  if (is_false(e)) return false;
  std::map<std::uint32_t, FTypePtr> lt;
  leaf_types_of(e, lt);
  std::uint64_t prod = 1;
  std::uint32_t maxleaf = 0;
  for (auto& [l, t] : lt) {
    prod *= t->cardinality();
    if (prod > maxStates) return std::nullopt;
    maxleaf = std::max(maxleaf, l);
  }
  State s(maxleaf + 1, 0);
  std::vector<std::pair<std::uint32_t, FTypePtr>> ls(lt.begin(), lt.end());
  bool sawTrue = false, sawFalse = false;
  std::uint64_t total = prod;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    for (auto& [l, t] : ls) {
      auto c = t->cardinality();
      s[l] = static_cast<std::uint32_t>(rest % c);
      rest /= c;
    }
    if (eval(e, s)) sawTrue = true;
    else sawFalse = true;
    if (sawTrue && sawFalse) return std::nullopt;
  }
  return sawTrue;
}

// Does `name` occur free as a bound-variable reference in e?
inline bool mentions_bound(const ExprPtr& e, const std::string& name) {
  switch (e->op) {
    case EOp::Bound: return e->name == name;
    case EOp::Exists:
    case EOp::Forall:
      if (e->name == name) return false;  // shadowed
      return mentions_bound(e->a, name);
    default:
      if (e->a && mentions_bound(e->a, name)) return true;
      if (e->b && mentions_bound(e->b, name)) return true;
      return false;
  }
}

// Miniscoping keeps quantifiers from the havoc laws tight around the parts
// that actually use the bound value, so the independent conjuncts stay
// visible to folding.
inline ExprPtr mk_exists(std::string name, FTypePtr ty, ExprPtr body, bool probe = true) {
  detail::require_bool(body, "exists");
  if (is_lit(body)) return body;  // domains are nonempty
  if (!mentions_bound(body, name)) return body;
  if (body->op == EOp::And) {
    std::vector<ExprPtr> cs;
    conjuncts_of(body, cs);
    ExprPtr dep = mk_true(), indep = mk_true();
    for (auto& c : cs) {
      if (mentions_bound(c, name)) dep = mk_and(dep, c);
      else indep = mk_and(indep, c);
    }
    if (!is_true(indep)) return mk_and(mk_exists(name, ty, dep, probe), indep);
  }
  auto e = std::make_shared<Expr>();
  e->op = EOp::Exists;
  e->type = bool_type();
  e->name = std::move(name);
  e->btype = std::move(ty);
  e->a = std::move(body);
  detail::finish(e);
  ExprPtr r = e;
  if (probe) {
    if (auto c = const_probe(r, 1024)) return mk_bool(*c);
  }
  return r;
}

inline ExprPtr mk_forall(std::string name, FTypePtr ty, ExprPtr body, bool probe = true) {
  detail::require_bool(body, "forall");
  if (is_lit(body)) return body;
  if (!mentions_bound(body, name)) return body;
  if (body->op == EOp::And)
    return mk_and(mk_forall(name, ty, body->a, probe), mk_forall(name, ty, body->b, probe));
  if (body->op == EOp::Implies) {
    if (body->b->op == EOp::And)
      return mk_and(mk_forall(name, ty, mk_implies(body->a, body->b->a), probe),
                    mk_forall(name, ty, mk_implies(body->a, body->b->b), probe));
    if (!mentions_bound(body->b, name))
      return mk_implies(mk_exists(name, ty, body->a, probe), body->b);
  }
  auto e = std::make_shared<Expr>();
  e->op = EOp::Forall;
  e->type = bool_type();
  e->name = std::move(name);
  e->btype = std::move(ty);
  e->a = std::move(body);
  detail::finish(e);
  ExprPtr r = e;
  if (probe) {
    if (auto c = const_probe(r, 1024)) return mk_bool(*c);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Substitution and renaming.

// Substitutes expression r for the leaf variable `leaf`. Bound variables
// cannot capture leaf references, so no renaming is needed; engine-generated
// binder names use a reserved '$' spelling to keep bound/bound capture
// impossible as well.
inline ExprPtr subst_leaf(const ExprPtr& e, std::uint32_t leaf, const ExprPtr& r) {
  if (!mentions(e, leaf)) return e;
  switch (e->op) {
    case EOp::Var: return r;
    case EOp::Eq: return mk_eq(subst_leaf(e->a, leaf, r), subst_leaf(e->b, leaf, r));
    case EOp::Lt: return mk_lt(subst_leaf(e->a, leaf, r), subst_leaf(e->b, leaf, r));
    case EOp::Leq: return mk_leq(subst_leaf(e->a, leaf, r), subst_leaf(e->b, leaf, r));
    case EOp::Plus: return mk_plus(subst_leaf(e->a, leaf, r), subst_leaf(e->b, leaf, r));
    case EOp::And: return mk_and(subst_leaf(e->a, leaf, r), subst_leaf(e->b, leaf, r));
    case EOp::Or: return mk_or(subst_leaf(e->a, leaf, r), subst_leaf(e->b, leaf, r));
    case EOp::Not: return mk_not(subst_leaf(e->a, leaf, r));
    case EOp::Implies: return mk_implies(subst_leaf(e->a, leaf, r), subst_leaf(e->b, leaf, r));
    case EOp::InSet: return mk_in_set(subst_leaf(e->a, leaf, r), e->setords);
    case EOp::Some: return mk_some(subst_leaf(e->a, leaf, r));
    case EOp::The: return mk_the(subst_leaf(e->a, leaf, r));
    case EOp::Exists: return mk_exists(e->name, e->btype, subst_leaf(e->a, leaf, r));
    case EOp::Forall: return mk_forall(e->name, e->btype, subst_leaf(e->a, leaf, r));
    case EOp::Member: return mk_member(subst_leaf(e->a, leaf, r), subst_leaf(e->b, leaf, r));
    case EOp::WpApp: return mk_wp_app(e->name, subst_leaf(e->a, leaf, r), e->iswlp);
    default: return e;
  }
}

// Substitutes r for the free bound variable `name` (stops at shadowing
// binders).
inline ExprPtr subst_bound(const ExprPtr& e, const std::string& name, const ExprPtr& r) {
  switch (e->op) {
    case EOp::Lit:
    case EOp::Var: return e;
    case EOp::Bound: return e->name == name ? r : e;
    case EOp::Eq: return mk_eq(subst_bound(e->a, name, r), subst_bound(e->b, name, r));
    case EOp::Lt: return mk_lt(subst_bound(e->a, name, r), subst_bound(e->b, name, r));
    case EOp::Leq: return mk_leq(subst_bound(e->a, name, r), subst_bound(e->b, name, r));
    case EOp::Plus: return mk_plus(subst_bound(e->a, name, r), subst_bound(e->b, name, r));
    case EOp::And: return mk_and(subst_bound(e->a, name, r), subst_bound(e->b, name, r));
    case EOp::Or: return mk_or(subst_bound(e->a, name, r), subst_bound(e->b, name, r));
    case EOp::Not: return mk_not(subst_bound(e->a, name, r));
    case EOp::Implies: return mk_implies(subst_bound(e->a, name, r), subst_bound(e->b, name, r));
    case EOp::InSet: return mk_in_set(subst_bound(e->a, name, r), e->setords);
    case EOp::Some: return mk_some(subst_bound(e->a, name, r));
    case EOp::The: return mk_the(subst_bound(e->a, name, r));
    case EOp::Exists:
      if (e->name == name) return e;
      return mk_exists(e->name, e->btype, subst_bound(e->a, name, r));
    case EOp::Forall:
      if (e->name == name) return e;
      return mk_forall(e->name, e->btype, subst_bound(e->a, name, r));
    case EOp::Member: return mk_member(subst_bound(e->a, name, r), subst_bound(e->b, name, r));
    case EOp::WpApp: return mk_wp_app(e->name, subst_bound(e->a, name, r), e->iswlp);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Free-variable regions: unrestriction and used-by over a namespace's
// contiguous leaf range. Syntactic and sound for the semantic properties.

inline bool unrest(std::pair<std::uint32_t, std::uint32_t> range, const ExprPtr& e) {
  for (auto l : e->free)
    if (l >= range.first && l < range.second) return false;
  return true;
}

inline bool usedby(std::pair<std::uint32_t, std::uint32_t> range, const ExprPtr& e) {
  for (auto l : e->free)
    if (l < range.first || l >= range.second) return false;
  return true;
}

// Grows the state space: a predicate over the inner schema of namespace `ns`
// becomes the same predicate over the outer schema.
inline ExprPtr coerce_up(const ExprPtr& e, const Path& ns, std::uint32_t offset) {
  switch (e->op) {
    case EOp::Lit:
    case EOp::Bound: return e;
    case EOp::Var: {
      auto v = std::make_shared<Expr>();
      *v = *e;
      v->leaf = e->leaf + offset;
      Path p = ns;
      for (auto& s : e->path.segs) p.segs.push_back(s);
      v->path = p;
      detail::finish(v);
      return v;
    }
    case EOp::Eq: return mk_eq(coerce_up(e->a, ns, offset), coerce_up(e->b, ns, offset));
    case EOp::Lt: return mk_lt(coerce_up(e->a, ns, offset), coerce_up(e->b, ns, offset));
    case EOp::Leq: return mk_leq(coerce_up(e->a, ns, offset), coerce_up(e->b, ns, offset));
    case EOp::Plus: return mk_plus(coerce_up(e->a, ns, offset), coerce_up(e->b, ns, offset));
    case EOp::And: return mk_and(coerce_up(e->a, ns, offset), coerce_up(e->b, ns, offset));
    case EOp::Or: return mk_or(coerce_up(e->a, ns, offset), coerce_up(e->b, ns, offset));
    case EOp::Not: return mk_not(coerce_up(e->a, ns, offset));
    case EOp::Implies: return mk_implies(coerce_up(e->a, ns, offset), coerce_up(e->b, ns, offset));
    case EOp::InSet: return mk_in_set(coerce_up(e->a, ns, offset), e->setords);
    case EOp::Some: return mk_some(coerce_up(e->a, ns, offset));
    case EOp::The: return mk_the(coerce_up(e->a, ns, offset));
    case EOp::Exists: return mk_exists(e->name, e->btype, coerce_up(e->a, ns, offset));
    case EOp::Forall: return mk_forall(e->name, e->btype, coerce_up(e->a, ns, offset));
    case EOp::Member: return mk_member(coerce_up(e->a, ns, offset), coerce_up(e->b, ns, offset));
    case EOp::WpApp: throw Error("Internal", "coerce_up: unexpanded wp term");
  }
  return e;
}

// Shrinks the state space; requires usedby(range, e).
inline ExprPtr coerce_down(const ExprPtr& e, std::pair<std::uint32_t, std::uint32_t> range,
                           std::size_t prefixLen) {
  if (!usedby(range, e))
    throw Error("NotUsedBy", "coerce_down: expression uses variables outside the namespace");
  switch (e->op) {
    case EOp::Lit:
    case EOp::Bound: return e;
    case EOp::Var: {
      auto v = std::make_shared<Expr>();
      *v = *e;
      v->leaf = e->leaf - range.first;
      v->path = Path(std::vector<std::string>(e->path.segs.begin() + static_cast<long>(prefixLen),
                                              e->path.segs.end()));
      detail::finish(v);
      return v;
    }
    case EOp::Eq: return mk_eq(coerce_down(e->a, range, prefixLen), coerce_down(e->b, range, prefixLen));
    case EOp::Lt: return mk_lt(coerce_down(e->a, range, prefixLen), coerce_down(e->b, range, prefixLen));
    case EOp::Leq: return mk_leq(coerce_down(e->a, range, prefixLen), coerce_down(e->b, range, prefixLen));
    case EOp::Plus: return mk_plus(coerce_down(e->a, range, prefixLen), coerce_down(e->b, range, prefixLen));
    case EOp::And: return mk_and(coerce_down(e->a, range, prefixLen), coerce_down(e->b, range, prefixLen));
    case EOp::Or: return mk_or(coerce_down(e->a, range, prefixLen), coerce_down(e->b, range, prefixLen));
    case EOp::Not: return mk_not(coerce_down(e->a, range, prefixLen));
    case EOp::Implies:
      return mk_implies(coerce_down(e->a, range, prefixLen), coerce_down(e->b, range, prefixLen));
    case EOp::InSet: return mk_in_set(coerce_down(e->a, range, prefixLen), e->setords);
    case EOp::Some: return mk_some(coerce_down(e->a, range, prefixLen));
    case EOp::The: return mk_the(coerce_down(e->a, range, prefixLen));
    case EOp::Exists: return mk_exists(e->name, e->btype, coerce_down(e->a, range, prefixLen));
    case EOp::Forall: return mk_forall(e->name, e->btype, coerce_down(e->a, range, prefixLen));
    case EOp::Member:
      return mk_member(coerce_down(e->a, range, prefixLen), coerce_down(e->b, range, prefixLen));
    case EOp::WpApp: throw Error("Internal", "coerce_down: unexpanded wp term");
  }
  return e;
}

// free_paths(e) as paths (test-facing convenience; the engine works on leaf
// indices).
inline std::vector<Path> free_paths(const ExprPtr& e, const Schema& schema) {
  std::vector<Path> out;
  out.reserve(e->free.size());
  for (auto l : e->free) out.push_back(schema.leaf(l).path);
  return out;
}

// ---------------------------------------------------------------------------
// Printing (gcl surface syntax; reparses to a structurally equal expression).

inline std::string expr_str(const ExprPtr& e, int parent = 0);

namespace detail {
inline std::string binop_str(const ExprPtr& e, const char* sym, int prec, int parent,
                             bool rightAssoc = false) {
  std::string s = expr_str(e->a, rightAssoc ? prec + 1 : prec) + " " + sym + " " +
                  expr_str(e->b, rightAssoc ? prec : prec + 1);
  if (parent > prec) return "(" + s + ")";
  return s;
}
}  // namespace detail

inline std::string expr_str(const ExprPtr& e, int parent) {
  switch (e->op) {
    case EOp::Lit: return e->type->value_name(e->ord);
    case EOp::Var: return e->path.str();
    case EOp::Bound: return e->name;
    case EOp::Implies: return detail::binop_str(e, "=>", 1, parent, true);
    case EOp::Or: return detail::binop_str(e, "\\/", 2, parent);
    case EOp::And: return detail::binop_str(e, "/\\", 3, parent);
    case EOp::Not: {
      std::string s = "!" + expr_str(e->a, 5);
      return parent > 4 ? "(" + s + ")" : s;
    }
    case EOp::Eq: return detail::binop_str(e, "=", 5, parent);
    case EOp::Lt: return detail::binop_str(e, "<", 5, parent);
    case EOp::Leq: return detail::binop_str(e, "<=", 5, parent);
    case EOp::InSet: {
      std::string s = expr_str(e->a, 6) + " in {";
      for (size_t i = 0; i < e->setords.size(); ++i)
        s += (i ? ", " : "") + e->a->type->value_name(e->setords[i]);
      s += "}";
      return parent > 5 ? "(" + s + ")" : s;
    }
    case EOp::Member: {
      std::string s = expr_str(e->a, 6) + " in " + expr_str(e->b, 6);
      return parent > 5 ? "(" + s + ")" : s;
    }
    case EOp::Plus: return detail::binop_str(e, "+", 6, parent);
    case EOp::Some: return "Some(" + expr_str(e->a, 0) + ")";
    case EOp::The: return "the(" + expr_str(e->a, 0) + ")";
    case EOp::Exists:
      return "(exists " + e->name + " : " + e->btype->name() + " . " + expr_str(e->a, 0) + ")";
    case EOp::Forall:
      return "(forall " + e->name + " : " + e->btype->name() + " . " + expr_str(e->a, 0) + ")";
    case EOp::WpApp:
      return std::string(e->iswlp ? "wlp" : "wp") + "(" + e->name + ", " + expr_str(e->a, 0) + ")";
  }
  return "?";
}

}  // namespace argus
