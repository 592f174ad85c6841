#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "argus/prog.hpp"

namespace argus {

// Outcome of one verification goal. `cex` is the first falsifying state in
// enumeration order; `cexFinal` carries the transition witness where one
// exists (hoare / nmods / equiv).
struct Verdict {
  enum class Status { Pass, Fail };
  enum class Method { Structural, SemanticFallback };

  Status status = Status::Pass;
  Method method = Method::Structural;
  std::optional<State> cex;
  std::optional<State> cexFinal;

  bool pass() const { return status == Status::Pass; }
};

struct WpCtx {
  std::uint64_t bound = kDefaultStateBound;
  bool fallback = false;  // set when a frame law proviso failed and the
                          // precondition was computed from the denotation
  int fresh = 0;

  std::string fresh_name() { return "$" + std::to_string(fresh++); }
};

ExprPtr wp(const Schema& sch, const ProgPtr& p, const ExprPtr& b, WpCtx& ctx);
ExprPtr wlp(const Schema& sch, const ProgPtr& p, const ExprPtr& b, WpCtx& ctx);

namespace detail {

// Characteristic formula of one state: conjunction of leaf equalities.
inline ExprPtr state_expr(const Schema& sch, const State& s) {
  ExprPtr e = mk_true();
  for (std::uint32_t i = 0; i < sch.leaf_count(); ++i)
    e = mk_and(e, mk_eq(mk_var(sch, sch.leaf(i).path), mk_lit(sch.leaf(i).type, s[i])));
  return e;
}

// Exact precondition from the denotation, for frames matching neither
// proviso. `may` selects the wp (exists) or wlp (forall) reading.
inline ExprPtr semantic_pre(const Schema& sch, const ProgPtr& p, const ExprPtr& b, bool may,
                            WpCtx& ctx) {
  ctx.fallback = true;
  ExprPtr out = mk_false();
  for (const auto& s : sch.states(ctx.bound)) {
    bool hold = may ? false : true;
    for (const auto& s2 : successors(p, s)) {
      bool post = eval(b, s2) != 0;
      if (may && post) hold = true;
      if (!may && !post) hold = false;
    }
    if (hold) out = mk_or(out, state_expr(sch, s));
  }
  return out;
}

}  // namespace detail

// Weakest precondition (may-reach): wp(p, b) holds in s iff some transition
// of p from s establishes b.
inline ExprPtr wp(const Schema& sch, const ProgPtr& p, const ExprPtr& b, WpCtx& ctx) {
  switch (p->op) {
    case POp::Skip: return b;
    case POp::Abort: return mk_false();
    case POp::Seq: return wp(sch, p->a, wp(sch, p->b, b, ctx), ctx);
    case POp::Guard: return mk_and(p->guard, wp(sch, p->a, b, ctx));
    case POp::Choice: return mk_or(wp(sch, p->a, b, ctx), wp(sch, p->b, b, ctx));
    case POp::Assign: return subst_leaf(b, p->leaf, p->rhs);
    case POp::Havoc: {
      auto v = ctx.fresh_name();
      auto bv = mk_bound(v, p->ttype);
      auto c = subst_bound(p->rhs, "new", bv);
      return mk_exists(v, p->ttype, mk_and(c, subst_leaf(b, p->leaf, bv)));
    }
    case POp::Frame: {
      auto range = std::make_pair(p->nsLo, p->nsHi);
      if (unrest(range, b)) {
        auto dom = wp(*p->inner, p->a, mk_true(), ctx);
        return mk_and(b, coerce_up(dom, p->path, p->nsLo));
      }
      if (usedby(range, b)) {
        auto inner = wp(*p->inner, p->a, coerce_down(b, range, p->path.segs.size()), ctx);
        return coerce_up(inner, p->path, p->nsLo);
      }
      return detail::semantic_pre(sch, p, b, /*may=*/true, ctx);
    }
  }
  return b;
}

// Weakest liberal precondition (must-establish): wlp(p, b) holds in s iff
// every transition of p from s establishes b. Differs from wp on abort,
// guard, choice and the quantifier of havoc; the frame laws take the
// implication form so the no-transition case stays true.
inline ExprPtr wlp(const Schema& sch, const ProgPtr& p, const ExprPtr& b, WpCtx& ctx) {
  switch (p->op) {
    case POp::Skip: return b;
    case POp::Abort: return mk_true();
    case POp::Seq: return wlp(sch, p->a, wlp(sch, p->b, b, ctx), ctx);
    case POp::Guard: return mk_implies(p->guard, wlp(sch, p->a, b, ctx));
    case POp::Choice: return mk_and(wlp(sch, p->a, b, ctx), wlp(sch, p->b, b, ctx));
    case POp::Assign: return subst_leaf(b, p->leaf, p->rhs);
    case POp::Havoc: {
      auto v = ctx.fresh_name();
      auto bv = mk_bound(v, p->ttype);
      auto c = subst_bound(p->rhs, "new", bv);
      return mk_forall(v, p->ttype, mk_implies(c, subst_leaf(b, p->leaf, bv)));
    }
    case POp::Frame: {
      auto range = std::make_pair(p->nsLo, p->nsHi);
      if (unrest(range, b)) {
        auto dom = wp(*p->inner, p->a, mk_true(), ctx);
        return mk_implies(coerce_up(dom, p->path, p->nsLo), b);
      }
      if (usedby(range, b)) {
        auto inner = wlp(*p->inner, p->a, coerce_down(b, range, p->path.segs.size()), ctx);
        return coerce_up(inner, p->path, p->nsLo);
      }
      return detail::semantic_pre(sch, p, b, /*may=*/false, ctx);
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// Validity by split-and-fold enumeration. Exact: equivalent to evaluating
// over every schema state, including the choice of the first falsifying
// state, but only branches on leaves the (folded) formula still mentions.

struct ValidOutcome {
  bool pass = true;
  std::optional<State> cex;
};

inline ValidOutcome valid_check(const Schema& sch, const ExprPtr& goal,
                                std::uint64_t bound = kDefaultStateBound) {
  if (goal->has_wp) throw Error("UnexpandedWp", "valid: unexpanded wp/wlp term in goal");
  if (!goal->type->is_boolean()) throw Error("TypeMismatch", "valid: goal must be boolean");
  std::uint64_t budget = bound;
  State partial(sch.leaf_count(), 0);

  std::function<std::optional<State>(const ExprPtr&, std::uint32_t)> rec =
      [&](const ExprPtr& f, std::uint32_t from) -> std::optional<State> {
    if (is_true(f)) return std::nullopt;
    if (is_false(f)) return partial;
    std::uint32_t leaf = 0;
    bool found = false;
    for (auto l : f->free)
      if (l >= from) {
        leaf = l;
        found = true;
        break;
      }
    if (!found) return eval(f, partial) ? std::nullopt : std::optional<State>(partial);
    const auto& ty = sch.leaf(leaf).type;
    auto n = ty->cardinality();
    for (std::uint32_t v = 0; v < n; ++v) {
      if (budget == 0) throw StateSpaceTooLarge(sch.cardinality(), bound);
      --budget;
      partial[leaf] = v;
      if (auto r = rec(subst_leaf(f, leaf, mk_lit(ty, v)), leaf + 1)) return r;
    }
    partial[leaf] = 0;
    return std::nullopt;
  };

  ValidOutcome out;
  if (auto cex = rec(goal, 0)) {
    out.pass = false;
    out.cex = *cex;
  }
  return out;
}

// valid: Pass iff the formula holds in every state; Fail carries the first
// falsifying state in enumeration order.
inline Verdict valid(const Schema& sch, const ExprPtr& goal,
                     std::uint64_t bound = kDefaultStateBound, bool usedFallback = false) {
  auto r = valid_check(sch, goal, bound);
  Verdict v;
  v.method = usedFallback ? Verdict::Method::SemanticFallback : Verdict::Method::Structural;
  if (!r.pass) {
    v.status = Verdict::Status::Fail;
    v.cex = r.cex;
  }
  return v;
}

// Hoare triple {pre} p {post} via the wlp route: valid(pre => wlp(p, post)).
// A failure carries the falsifying initial state and, from the denotation, a
// final state violating the postcondition.
inline Verdict hoare(const Schema& sch, const ExprPtr& pre, const ProgPtr& p, const ExprPtr& post,
                     std::uint64_t bound = kDefaultStateBound) {
  WpCtx ctx;
  ctx.bound = bound;
  auto goal = mk_implies(pre, wlp(sch, p, post, ctx));
  auto r = valid_check(sch, goal, bound);
  Verdict v;
  v.method = ctx.fallback ? Verdict::Method::SemanticFallback : Verdict::Method::Structural;
  if (r.pass) return v;
  v.status = Verdict::Status::Fail;
  v.cex = r.cex;
  for (const auto& s2 : successors(p, *r.cex)) {
    if (!eval(post, s2)) {
      v.cexFinal = s2;
      break;
    }
  }
  if (!v.cexFinal) throw Error("Internal", "hoare: wlp counterexample has no violating transition");
  return v;
}

// ---------------------------------------------------------------------------
// Modification predicate: p nmods vars iff no transition changes any of the
// given variables. Structural rules first (on the guard-distributed program,
// so statically dead commands have already become abort); the semantic
// fixed-point check is the fallback.

namespace detail {

inline bool nmods_structural(const ProgPtr& p, std::uint32_t leaf) {
  switch (p->op) {
    case POp::Skip:
    case POp::Abort: return true;
    case POp::Seq:
    case POp::Choice: return nmods_structural(p->a, leaf) && nmods_structural(p->b, leaf);
    case POp::Guard: return nmods_structural(p->a, leaf);
    case POp::Assign:
    case POp::Havoc: return p->leaf != leaf;  // distinct leaves are independent
    case POp::Frame:
      if (leaf < p->nsLo || leaf >= p->nsHi) return true;
      return nmods_structural(p->a, leaf - p->nsLo);
  }
  return false;
}

}  // namespace detail

inline std::vector<std::uint32_t> expand_var_paths(const Schema& sch,
                                                   const std::vector<Path>& vars) {
  std::vector<std::uint32_t> leaves;
  for (const auto& v : vars) {
    if (auto l = sch.find_leaf(v)) {
      leaves.push_back(*l);
    } else if (auto r = sch.ns_range(v)) {
      for (auto l = r->first; l < r->second; ++l) leaves.push_back(l);
    } else {
      throw Error("UnknownPath", "nmods: no such variable or namespace: " + v.str());
    }
  }
  std::sort(leaves.begin(), leaves.end());
  leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
  return leaves;
}

inline Verdict nmods(const Schema& sch, const ProgPtr& p, const std::vector<Path>& vars,
                     std::uint64_t bound = kDefaultStateBound) {
  auto leaves = expand_var_paths(sch, vars);
  auto q = guard_distribute(p);
  bool allStructural = true;
  for (auto l : leaves)
    if (!detail::nmods_structural(q, l)) {
      allStructural = false;
      break;
    }
  Verdict v;
  if (allStructural) return v;  // Pass, Structural

  v.method = Verdict::Method::SemanticFallback;
  for (const auto& s : sch.states(bound)) {
    for (const auto& s2 : successors(p, s)) {
      for (auto l : leaves) {
        if (s[l] != s2[l]) {
          v.status = Verdict::Status::Fail;
          v.cex = s;
          v.cexFinal = s2;
          return v;
        }
      }
    }
  }
  return v;  // Pass, SemanticFallback
}

// Denotational equivalence; Fail carries an initial state and a successor in
// the symmetric difference.
inline Verdict equiv(const Schema& sch, const ProgPtr& p, const ProgPtr& q,
                     std::uint64_t bound = kDefaultStateBound) {
  Verdict v;
  v.method = Verdict::Method::SemanticFallback;
  for (const auto& s : sch.states(bound)) {
    auto sp = successors(p, s);
    auto sq = successors(q, s);
    if (sp == sq) continue;
    std::vector<State> diff;
    std::set_symmetric_difference(sp.begin(), sp.end(), sq.begin(), sq.end(),
                                  std::back_inserter(diff));
    v.status = Verdict::Status::Fail;
    v.cex = s;
    v.cexFinal = diff.front();
    return v;
  }
  return v;
}

}  // namespace argus
