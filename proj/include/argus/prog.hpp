#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "argus/expr.hpp"

namespace argus {

enum class POp : std::uint8_t { Skip, Abort, Seq, Guard, Choice, Assign, Frame, Havoc };

struct Prog;
using ProgPtr = std::shared_ptr<const Prog>;

// Guarded-command program. Frame interiors are programs over the namespace's
// inner schema (their leaf indices are inner-relative); the node carries the
// inner schema and the namespace's leaf range in the enclosing schema.
struct Prog {
  POp op = POp::Skip;
  ExprPtr guard;            // Guard
  std::uint32_t leaf = 0;   // Assign/Havoc target (leaf index)
  Path path;                // Assign/Havoc target path; Frame namespace
  FTypePtr ttype;           // Assign/Havoc target type
  ExprPtr rhs;              // Assign value / Havoc constraint (binds `new`)
  ProgPtr a, b;             // children; Guard/Frame body in a
  SchemaPtr inner;          // Frame inner schema
  std::uint32_t nsLo = 0, nsHi = 0;  // Frame leaf range in the enclosing schema
  std::size_t hash = 0;
};

namespace detail {
inline ProgPtr pnode(Prog&& p) {
  std::size_t h = static_cast<std::size_t>(p.op) * 0x100000001b3ull;
  h = mix(h, p.leaf);
  h = mix(h, p.nsLo);
  h = mix(h, p.nsHi);
  h = mix(h, std::hash<std::string>{}(p.path.str()));
  if (p.guard) h = mix(h, p.guard->hash);
  if (p.rhs) h = mix(h, p.rhs->hash);
  if (p.a) h = mix(h, p.a->hash);
  if (p.b) h = mix(h, p.b->hash);
  p.hash = h;
  return std::make_shared<Prog>(std::move(p));
}
}  // namespace detail

inline ProgPtr mk_skip() {
  static ProgPtr s = detail::pnode(Prog{});
  return s;
}

inline ProgPtr mk_abort() {
  static ProgPtr s = [] {
    Prog p;
    p.op = POp::Abort;
    return detail::pnode(std::move(p));
  }();
  return s;
}

inline ProgPtr mk_seq(ProgPtr a, ProgPtr b) {
  Prog p;
  p.op = POp::Seq;
  p.a = std::move(a);
  p.b = std::move(b);
  return detail::pnode(std::move(p));
}

inline ProgPtr mk_seq(std::initializer_list<ProgPtr> ps) {
  ProgPtr out;
  for (const auto& p : ps) out = out ? mk_seq(out, p) : p;
  return out;
}

inline ProgPtr mk_guard(ExprPtr g, ProgPtr body) {
  detail::require_bool(g, "guard");
  Prog p;
  p.op = POp::Guard;
  p.guard = std::move(g);
  p.a = std::move(body);
  return detail::pnode(std::move(p));
}

inline ProgPtr mk_choice(ProgPtr a, ProgPtr b) {
  Prog p;
  p.op = POp::Choice;
  p.a = std::move(a);
  p.b = std::move(b);
  return detail::pnode(std::move(p));
}

inline ProgPtr mk_choice(std::initializer_list<ProgPtr> ps) {
  ProgPtr out;
  for (const auto& p : ps) out = out ? mk_choice(out, p) : p;
  return out;
}

inline ProgPtr mk_assign(const Schema& sch, const Path& target, ExprPtr value) {
  auto idx = sch.find_leaf(target);
  if (!idx) throw Error("UnknownPath", "assignment target is not a variable: " + target.str());
  if (!same_type(sch.leaf(*idx).type, value->type))
    throw Error("TypeMismatch", "assignment to " + target.str() + ": value has type " +
                                    value->type->name() + ", expected " +
                                    sch.leaf(*idx).type->name());
  Prog p;
  p.op = POp::Assign;
  p.leaf = *idx;
  p.path = target;
  p.ttype = sch.leaf(*idx).type;
  p.rhs = std::move(value);
  return detail::pnode(std::move(p));
}

// havoc x where C: assigns any v with C[v/new]. C refers to the pre-state
// plus the reserved bound name `new` for the chosen value.
inline ProgPtr mk_havoc(const Schema& sch, const Path& target, ExprPtr constraint) {
  auto idx = sch.find_leaf(target);
  if (!idx) throw Error("UnknownPath", "havoc target is not a variable: " + target.str());
  detail::require_bool(constraint, "havoc");
  Prog p;
  p.op = POp::Havoc;
  p.leaf = *idx;
  p.path = target;
  p.ttype = sch.leaf(*idx).type;
  p.rhs = std::move(constraint);
  return detail::pnode(std::move(p));
}

inline ProgPtr mk_frame(const Schema& outer, const Path& ns, ProgPtr body) {
  auto range = outer.ns_range(ns);
  if (!range) throw Error("BadPath", "frame needs a namespace: " + ns.str());
  Prog p;
  p.op = POp::Frame;
  p.path = ns;
  p.a = std::move(body);
  p.inner = std::make_shared<Schema>(outer.subschema(ns));
  p.nsLo = range->first;
  p.nsHi = range->second;
  return detail::pnode(std::move(p));
}

inline bool prog_eq(const ProgPtr& x, const ProgPtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->hash != y->hash || x->op != y->op) return false;
  switch (x->op) {
    case POp::Skip:
    case POp::Abort: return true;
    case POp::Seq:
    case POp::Choice: return prog_eq(x->a, y->a) && prog_eq(x->b, y->b);
    case POp::Guard: return expr_eq(x->guard, y->guard) && prog_eq(x->a, y->a);
    case POp::Assign:
    case POp::Havoc: return x->leaf == y->leaf && x->path == y->path && expr_eq(x->rhs, y->rhs);
    case POp::Frame:
      return x->path == y->path && x->nsLo == y->nsLo && x->nsHi == y->nsHi &&
             prog_eq(x->a, y->a);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Relational semantics: the successor states of one initial state. denote()
// below materializes the full relation and is the finite oracle used by the
// tests and the semantic fallbacks.

namespace detail {
inline void sort_unique(std::vector<State>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}
}  // namespace detail

inline std::vector<State> successors(const ProgPtr& p, const State& s) {
  switch (p->op) {
    case POp::Skip: return {s};
    case POp::Abort: return {};
    case POp::Seq: {
      std::vector<State> out;
      for (const auto& m : successors(p->a, s)) {
        auto ss = successors(p->b, m);
        out.insert(out.end(), ss.begin(), ss.end());
      }
      detail::sort_unique(out);
      return out;
    }
    case POp::Guard:
      if (!eval(p->guard, s)) return {};
      return successors(p->a, s);
    case POp::Choice: {
      auto out = successors(p->a, s);
      auto sb = successors(p->b, s);
      out.insert(out.end(), sb.begin(), sb.end());
      detail::sort_unique(out);
      return out;
    }
    case POp::Assign: {
      State s2 = s;
      s2[p->leaf] = eval(p->rhs, s);
      return {s2};
    }
    case POp::Havoc: {
      std::vector<State> out;
      Env env;
      auto n = p->ttype->cardinality();
      for (std::uint32_t v = 0; v < n; ++v) {
        env.binds = {{"new", v}};
        if (eval(p->rhs, s, env)) {
          State s2 = s;
          s2[p->leaf] = v;
          out.push_back(std::move(s2));
        }
      }
      detail::sort_unique(out);
      return out;
    }
    case POp::Frame: {
      State in(s.begin() + p->nsLo, s.begin() + p->nsHi);
      std::vector<State> out;
      for (const auto& in2 : successors(p->a, in)) {
        State s2 = s;
        std::copy(in2.begin(), in2.end(), s2.begin() + p->nsLo);
        out.push_back(std::move(s2));
      }
      detail::sort_unique(out);
      return out;
    }
  }
  return {};
}

// Full relation {(s, s')} by enumeration; the exact-semantics oracle.
inline std::vector<std::pair<State, State>> denote(const ProgPtr& p, const Schema& sch,
                                                   std::uint64_t bound = kDefaultStateBound) {
  std::vector<std::pair<State, State>> rel;
  for (const auto& s : sch.states(bound))
    for (auto& s2 : successors(p, s)) rel.emplace_back(s, s2);
  return rel;
}

// ---------------------------------------------------------------------------
// Guard distribution. Pushes guards through choices, hoists guards out of
// frame interiors and sequence heads, merges nested guards, and rewrites
// commands whose merged guard is unsatisfiable (bounded check) to abort.
// Every rewrite preserves denote(); the property tests enforce that.

inline ProgPtr guard_distribute(const ProgPtr& p) {
  switch (p->op) {
    case POp::Skip:
    case POp::Abort:
    case POp::Assign:
    case POp::Havoc: return p;
    case POp::Choice: {
      auto a = guard_distribute(p->a);
      auto b = guard_distribute(p->b);
      if (a == p->a && b == p->b) return p;
      return mk_choice(a, b);
    }
    case POp::Frame: {
      auto body = guard_distribute(p->a);
      auto reframe = [&](ProgPtr inner) {
        Prog f;
        f.op = POp::Frame;
        f.path = p->path;
        f.a = std::move(inner);
        f.inner = p->inner;
        f.nsLo = p->nsLo;
        f.nsHi = p->nsHi;
        return detail::pnode(std::move(f));
      };
      if (body->op == POp::Choice)
        return guard_distribute(mk_choice(reframe(body->a), reframe(body->b)));
      if (body->op == POp::Guard) {
        auto g = coerce_up(body->guard, p->path, p->nsLo);
        return guard_distribute(mk_guard(g, reframe(body->a)));
      }
      if (body == p->a) return p;
      return reframe(body);
    }
    case POp::Seq: {
      auto a = guard_distribute(p->a);
      auto b = guard_distribute(p->b);
      if (a->op == POp::Choice)
        return guard_distribute(mk_choice(mk_seq(a->a, b), mk_seq(a->b, b)));
      if (a->op == POp::Guard) return guard_distribute(mk_guard(a->guard, mk_seq(a->a, b)));
      if (a->op == POp::Abort) return mk_abort();
      if (a == p->a && b == p->b) return p;
      return mk_seq(a, b);
    }
    case POp::Guard: {
      auto body = guard_distribute(p->a);
      ExprPtr g = p->guard;
      while (body->op == POp::Guard) {
        g = mk_and(g, body->guard);
        body = body->a;
      }
      if (auto c = const_probe(g, 4096)) {
        if (!*c) return mk_abort();
        return body;  // guard is identically true
      }
      if (body->op == POp::Abort) return mk_abort();
      if (body->op == POp::Choice)
        return mk_choice(guard_distribute(mk_guard(g, body->a)),
                         guard_distribute(mk_guard(g, body->b)));
      return mk_guard(g, body);
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Printing (gcl surface syntax). Sequence and choice are printed
// left-associated; guard bodies and frame interiors are parenthesized.

inline std::string prog_str(const ProgPtr& p, int parent = 0) {
  switch (p->op) {
    case POp::Skip: return "skip";
    case POp::Abort: return "abort";
    case POp::Seq: {
      std::string s = prog_str(p->a, 2) + " ; " + prog_str(p->b, 3);
      return parent > 2 ? "(" + s + ")" : s;
    }
    case POp::Choice: {
      std::string s = prog_str(p->a, 1) + " [] " + prog_str(p->b, 2);
      return parent > 1 ? "(" + s + ")" : s;
    }
    case POp::Guard: {
      std::string s = expr_str(p->guard, 0) + " -> " + prog_str(p->a, 3);
      return parent > 3 ? "(" + s + ")" : s;
    }
    case POp::Assign: return p->path.str() + " := " + expr_str(p->rhs, 0);
    case POp::Havoc: {
      std::string s = "havoc " + p->path.str() + " where " + expr_str(p->rhs, 0);
      return parent > 2 ? "(" + s + ")" : s;
    }
    case POp::Frame: return "frame " + p->path.str() + " in (" + prog_str(p->a, 0) + ")";
  }
  return "?";
}

}  // namespace argus
