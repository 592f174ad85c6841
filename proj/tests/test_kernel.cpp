#include <gtest/gtest.h>

#include "argus/prog.hpp"
#include "argus/wlp.hpp"
#include "support/gen.hpp"

using namespace argus;
using namespace argus::testgen;

namespace {

Schema one_bool() { return Schema({SchemaNode::leaf("x", FiniteType::boolean())}); }

Schema latch_door() {
  return Schema({SchemaNode::leaf("latch", FiniteType::enumeration({"unlocked", "locked"})),
                 SchemaNode::leaf("door", FiniteType::enumeration({"open", "closed"}))});
}

}  // namespace

TEST(FiniteTypeTest, Cardinalities) {
  EXPECT_EQ(FiniteType::boolean()->cardinality(), 2u);
  EXPECT_EQ(FiniteType::enumeration({"a", "b", "c"})->cardinality(), 3u);
  EXPECT_EQ(FiniteType::bounded_int(0, 7)->cardinality(), 8u);
  EXPECT_EQ(FiniteType::optional(FiniteType::enumeration({"g", "a", "s"}))->cardinality(), 4u);
  EXPECT_EQ(FiniteType::set_of({"p", "q"})->cardinality(), 4u);
}

TEST(FiniteTypeTest, CanonicalOrderNames) {
  auto opt = FiniteType::optional(FiniteType::enumeration({"g", "a"}));
  EXPECT_EQ(opt->value_name(0), "None");
  EXPECT_EQ(opt->value_name(1), "Some(g)");
  auto set = FiniteType::set_of({"p", "q"});
  EXPECT_EQ(set->value_name(0), "{}");
  EXPECT_EQ(set->value_name(3), "{p, q}");
  auto bi = FiniteType::bounded_int(2, 5);
  EXPECT_EQ(bi->value_name(0), "2");
  EXPECT_EQ(bi->ord_of_int(5), 3u);
}

TEST(SchemaTest, StateCountExamples) {
  EXPECT_EQ(one_bool().states().size(), 2u);
  EXPECT_EQ(latch_door().states().size(), 4u);
  Schema s({SchemaNode::leaf("n", FiniteType::bounded_int(0, 7)),
            SchemaNode::leaf("b", FiniteType::boolean())});
  EXPECT_EQ(s.states().size(), 16u);
}

TEST(SchemaTest, EnumerationIsDeterministicAndDupFree) {
  auto sch = mixed_schema();
  auto st1 = sch.states();
  auto st2 = sch.states();
  EXPECT_EQ(st1, st2);
  auto sorted = st1;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  EXPECT_EQ(sorted.size(), st1.size());
  // first leaf varies slowest
  EXPECT_EQ(st1.front(), (State{0, 0, 0}));
  EXPECT_EQ(st1[1], (State{0, 0, 1}));
}

TEST(SchemaTest, StateSpaceBound) {
  Schema s({SchemaNode::leaf("n", FiniteType::bounded_int(0, 7)),
            SchemaNode::leaf("m", FiniteType::bounded_int(0, 7))});
  EXPECT_THROW(s.states(16), StateSpaceTooLarge);
}

TEST(SchemaTest, NamespaceRangesAreContiguous) {
  auto sch = mixed_schema();
  auto r = sch.ns_range(Path::parse("a"));
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->first, 0u);
  EXPECT_EQ(r->second, 2u);
  EXPECT_FALSE(sch.ns_range(Path::parse("z")).has_value());
}

// Path independence: two leaf paths are independent iff neither is a prefix
// of the other (decision table over a nested schema).
TEST(SchemaTest, PathIndependenceDecisionTable) {
  auto a = Path::parse("a.x");
  auto b = Path::parse("a.y");
  auto c = Path::parse("a");
  auto d = Path::parse("z");
  EXPECT_TRUE(paths_independent(a, b));
  EXPECT_FALSE(paths_independent(a, c));
  EXPECT_FALSE(paths_independent(c, b));
  EXPECT_TRUE(paths_independent(a, d));
  EXPECT_FALSE(paths_independent(a, a));
}

TEST(ExprTest, EvalExamples) {
  auto sch = latch_door();
  auto door = mk_var(sch, Path::parse("door"));
  auto open = mk_lit(door->type, 0);
  State s{0, 0};  // unlocked, open
  EXPECT_EQ(eval(mk_eq(door, open), s), 1u);

  // the(rolePresent) = guard over a defined optional
  Schema rs({SchemaNode::leaf("rolePresent",
                              FiniteType::optional(FiniteType::enumeration(
                                  {"guard", "auditManager", "securityOfficer"})))});
  auto rp = mk_var(rs, Path::parse("rolePresent"));
  auto theRp = mk_the(rp);
  State withGuard{1};  // Some(guard)
  EXPECT_EQ(eval(mk_eq(theRp, mk_lit(theRp->type, 0)), withGuard), 1u);

  // exists t:Bool. t && x  with x = false
  auto xs = one_bool();
  auto x = mk_var(xs, Path::parse("x"));
  auto ex = mk_exists("t", FiniteType::boolean(), mk_and(mk_bound("t", bool_type()), x));
  State xFalse{0};
  EXPECT_EQ(eval(ex, xFalse), 0u);
}

TEST(ExprTest, SubstExamples) {
  auto sch = one_bool();
  auto x = mk_var(sch, Path::parse("x"));
  // (x = true)[false/x] folds to false
  auto e1 = subst_leaf(mk_eq(x, mk_true()), x->leaf, mk_false());
  EXPECT_TRUE(is_false(e1));

  // (y + 1 <= 3)[2/y] = (2 + 1 <= 3): folds to a literal truth
  Schema ys({SchemaNode::leaf("y", FiniteType::bounded_int(0, 7))});
  auto y = mk_var(ys, Path::parse("y"));
  auto ty = y->type;
  auto sum = mk_plus(y, mk_lit(ty, ty->ord_of_int(1)));
  auto cmp = mk_leq(sum, mk_lit(ty, ty->ord_of_int(3)));
  auto e2 = subst_leaf(cmp, y->leaf, mk_lit(ty, ty->ord_of_int(2)));
  EXPECT_TRUE(is_true(e2));

  // binder untouched: (exists v. v = x)[e/x] substitutes only x
  auto v = mk_bound("v", bool_type());
  auto q = mk_exists("v", FiniteType::boolean(), mk_eq(v, x), /*probe=*/false);
  auto e3 = subst_leaf(q, x->leaf, mk_true());
  // exists v. v = true is semantically true; the probe may fold it
  State s0{0};
  EXPECT_EQ(eval(e3, s0), 1u);
}

TEST(ExprTest, FreePathsExamples) {
  Schema ys({SchemaNode::leaf("y", FiniteType::bounded_int(0, 7))});
  auto y = mk_var(ys, Path::parse("y"));
  auto sum = mk_plus(y, mk_lit(y->type, 1));
  auto fp = free_paths(sum, ys);
  ASSERT_EQ(fp.size(), 1u);
  EXPECT_EQ(fp[0].str(), "y");
  EXPECT_TRUE(mk_true()->free.empty());
  auto xs = one_bool();
  auto x = mk_var(xs, Path::parse("x"));
  auto q = mk_exists("v", FiniteType::boolean(),
                     mk_and(mk_bound("v", bool_type()), x), /*probe=*/false);
  EXPECT_EQ(q->free, std::vector<std::uint32_t>{x->leaf});
}

TEST(ExprTest, UnrestUsedbyExamples) {
  auto sch = mixed_schema();
  auto range = *sch.ns_range(Path::parse("a"));
  auto z = mk_var(sch, Path::parse("z"));
  auto ax = mk_var(sch, Path::parse("a.x"));
  auto zLow = mk_leq(z, mk_lit(z->type, 1));
  EXPECT_TRUE(unrest(range, zLow));
  EXPECT_FALSE(usedby(range, zLow));
  EXPECT_TRUE(usedby(range, ax));
  EXPECT_FALSE(unrest(range, ax));
  auto mixedE = mk_or(ax, zLow);
  EXPECT_FALSE(unrest(range, mixedE));
  EXPECT_FALSE(usedby(range, mixedE));
}

TEST(ExprTest, CoercionsRoundTrip) {
  auto sch = mixed_schema();
  Schema inner = sch.subschema(Path::parse("a"));
  auto range = *sch.ns_range(Path::parse("a"));
  auto x = mk_var(inner, Path::parse("x"));
  auto up = coerce_up(x, Path::parse("a"), range.first);
  EXPECT_EQ(up->path.str(), "a.x");
  EXPECT_EQ(up->leaf, 0u);
  auto down = coerce_down(up, range, 1);
  EXPECT_TRUE(expr_eq(down, x));
  auto z = mk_var(sch, Path::parse("z"));
  EXPECT_THROW(coerce_down(z, range, 1), Error);
}

// Fold soundness: building through the folding constructors never changes
// the value of an expression.
TEST(ExprTest, FoldSoundnessProperty) {
  auto sch = mixed_schema();
  auto states = sch.states();
  for (std::uint32_t seed = 0; seed < 300; ++seed) {
    ExprGen g(sch, seed);
    auto p = (seed % 3 == 0) ? g.quantified(3) : g.boolean(4);
    for (const auto& s : states) {
      ASSERT_EQ(eval(p.raw, s), eval(p.folded, s))
          << "seed " << seed << " raw " << expr_str(p.raw) << " folded " << expr_str(p.folded);
    }
  }
}

// Subsumption entailment is sound: whenever entails() claims S |- g, the
// implication holds in every state.
TEST(ExprTest, EntailmentSoundnessProperty) {
  auto sch = mixed_schema();
  auto states = sch.states();
  int claimed = 0;
  for (std::uint32_t seed = 1000; seed < 1300; ++seed) {
    ExprGen g(sch, seed);
    auto a = g.boolean(3).folded;
    auto b = g.boolean(3).folded;
    ConjSet S;
    std::vector<ExprPtr> cs;
    conjuncts_of(a, cs);
    for (auto& c : cs) S.insert(c);
    if (!entails(S, b)) continue;
    ++claimed;
    for (const auto& s : states) {
      if (eval(a, s)) {
        ASSERT_TRUE(eval(b, s)) << expr_str(a) << " |- " << expr_str(b);
      }
    }
  }
  EXPECT_GT(claimed, 0);
}

TEST(ProgTest, DenoteExamples) {
  auto sch = one_bool();
  auto x = Path::parse("x");
  // x := true over {x:Bool} -> {(F,T),(T,T)}
  auto rel = denote(mk_assign(sch, x, mk_true()), sch);
  std::vector<std::pair<State, State>> expected = {{{0}, {1}}, {{1}, {1}}};
  EXPECT_EQ(rel, expected);

  // choice with abort collapses to the identity
  auto idrel = denote(mk_choice(mk_skip(), mk_abort()), sch);
  std::vector<std::pair<State, State>> identity = {{{0}, {0}}, {{1}, {1}}};
  EXPECT_EQ(idrel, identity);

  // guard filters initial states
  auto vx = mk_var(sch, x);
  auto guarded = denote(mk_guard(mk_eq(vx, mk_false()), mk_assign(sch, x, mk_true())), sch);
  std::vector<std::pair<State, State>> expectG = {{{0}, {1}}};
  EXPECT_EQ(guarded, expectG);
}

TEST(ProgTest, FrameNeverChangesOutside) {
  auto sch = mixed_schema();
  auto range = *sch.ns_range(Path::parse("a"));
  for (std::uint32_t seed = 0; seed < 60; ++seed) {
    Schema inner = sch.subschema(Path::parse("a"));
    ProgGen pg(inner, seed);
    auto body = pg.gen(3);
    auto framed = mk_frame(sch, Path::parse("a"), body);
    for (const auto& s : sch.states())
      for (const auto& s2 : successors(framed, s))
        for (std::uint32_t l = 0; l < sch.leaf_count(); ++l) {
          if (l < range.first || l >= range.second) {
            ASSERT_EQ(s[l], s2[l]);
          }
        }
  }
}

TEST(ProgTest, GuardDistributeExamples) {
  auto sch = two_bool_schema();
  auto vx = mk_var(sch, Path::parse("x"));
  auto p = mk_assign(sch, Path::parse("x"), mk_true());
  auto q = mk_assign(sch, Path::parse("y"), mk_true());
  auto r = mk_assign(sch, Path::parse("y"), mk_false());

  auto d1 = guard_distribute(mk_guard(vx, mk_choice(p, q)));
  ASSERT_EQ(d1->op, POp::Choice);
  EXPECT_EQ(d1->a->op, POp::Guard);
  EXPECT_EQ(d1->b->op, POp::Guard);

  auto d2 = guard_distribute(mk_guard(vx, mk_skip()));
  EXPECT_EQ(d2->op, POp::Guard);
  EXPECT_TRUE(prog_eq(d2->a, mk_skip()));

  auto nested = mk_guard(vx, mk_choice(mk_choice(p, q), r));
  auto d3 = guard_distribute(nested);
  // three guarded leaves
  int guards = 0;
  std::function<void(const ProgPtr&)> count = [&](const ProgPtr& n) {
    if (n->op == POp::Guard) ++guards;
    if (n->a) count(n->a);
    if (n->b) count(n->b);
  };
  count(d3);
  EXPECT_EQ(guards, 3);
  // denotations agree
  EXPECT_EQ(denote(nested, sch), denote(d3, sch));
}

TEST(ProgTest, GuardDistributeRewritesDeadGuardToAbort) {
  auto sch = two_bool_schema();
  auto vx = mk_var(sch, Path::parse("x"));
  auto contradiction = mk_and(mk_eq(vx, mk_true()), mk_eq(vx, mk_false()));
  auto d = guard_distribute(mk_guard(contradiction, mk_assign(sch, Path::parse("y"), mk_true())));
  EXPECT_EQ(d->op, POp::Abort);
  // nested contradictory guards merge and die too
  auto d2 = guard_distribute(
      mk_guard(mk_eq(vx, mk_true()),
               mk_guard(mk_eq(vx, mk_false()), mk_assign(sch, Path::parse("y"), mk_true()))));
  EXPECT_EQ(d2->op, POp::Abort);
}

TEST(ProgTest, GuardDistributePreservesDenoteProperty) {
  auto sch = mixed_schema();
  for (std::uint32_t seed = 0; seed < 120; ++seed) {
    ProgGen pg(sch, seed);
    auto p = pg.gen(4);
    auto q = guard_distribute(p);
    ASSERT_EQ(denote(p, sch), denote(q, sch)) << prog_str(p) << "  vs  " << prog_str(q);
  }
}

// Assignments to independent variables commute when neither expression reads
// the other target (checked by oracle over all boolean expression choices).
TEST(ProgTest, AssignmentCommutativity) {
  auto sch = two_bool_schema();
  auto x = Path::parse("x");
  auto y = Path::parse("y");
  auto vx = mk_var(sch, x);
  auto vy = mk_var(sch, y);
  std::vector<ExprPtr> es = {mk_true(), mk_false(), vx, mk_not(vx)};  // avoid y
  std::vector<ExprPtr> fs = {mk_true(), mk_false(), vy, mk_not(vy)};  // avoid x
  for (const auto& e : es)
    for (const auto& f : fs) {
      auto pq = mk_seq(mk_assign(sch, x, e), mk_assign(sch, y, f));
      auto qp = mk_seq(mk_assign(sch, y, f), mk_assign(sch, x, e));
      EXPECT_TRUE(equiv(sch, pq, qp).pass());
    }
  // side condition violated: e reads y
  auto pq = mk_seq(mk_assign(sch, x, vy), mk_assign(sch, y, mk_false()));
  auto qp = mk_seq(mk_assign(sch, y, mk_false()), mk_assign(sch, x, vy));
  auto v = equiv(sch, pq, qp);
  EXPECT_FALSE(v.pass());
  EXPECT_TRUE(v.cex.has_value());
  EXPECT_TRUE(v.cexFinal.has_value());
}

TEST(WlpTest, WpLawExamples) {
  auto sch = one_bool();
  auto x = Path::parse("x");
  auto vx = mk_var(sch, x);
  WpCtx ctx;

  // wp(skip, b) = b
  auto b = mk_eq(vx, mk_true());
  EXPECT_TRUE(expr_eq(wp(sch, mk_skip(), b, ctx), b));

  // wp(x := true [] abort, x = true) is valid over {x:Bool}
  auto p = mk_choice(mk_assign(sch, x, mk_true()), mk_abort());
  auto w = wp(sch, p, b, ctx);
  auto states = sch.states();
  EXPECT_EQ(eval_set(w, states), may_set(sch, p, b, states));
  EXPECT_TRUE(valid(sch, w).pass());

  // guard law then substitution
  Schema ss({SchemaNode::leaf("status", FiniteType::enumeration({"quiescent", "gotUserToken"}))});
  auto st = Path::parse("status");
  auto vst = mk_var(ss, st);
  auto q = mk_guard(mk_eq(vst, mk_lit(vst->type, 0)),
                    mk_assign(ss, st, mk_lit(vst->type, 1)));
  auto post = mk_eq(vst, mk_lit(vst->type, 1));
  auto wq = wp(ss, q, post, ctx);
  auto sstates = ss.states();
  EXPECT_EQ(eval_set(wq, sstates), may_set(ss, q, post, sstates));
  // semantically equal to the guard
  EXPECT_TRUE(valid(ss, mk_eq(wq, mk_eq(vst, mk_lit(vst->type, 0)))).pass());
}

TEST(WlpTest, WlpLawExamples) {
  auto sch = one_bool();
  auto x = Path::parse("x");
  auto vx = mk_var(sch, x);
  WpCtx ctx;

  EXPECT_TRUE(is_true(wlp(sch, mk_abort(), mk_false(), ctx)));

  auto b = mk_eq(vx, mk_true());
  EXPECT_TRUE(expr_eq(wlp(sch, mk_choice(mk_skip(), mk_skip()), b, ctx), b));

  auto g = mk_guard(mk_eq(vx, mk_false()), mk_assign(sch, x, mk_true()));
  auto w = wlp(sch, g, mk_eq(vx, mk_true()), ctx);
  EXPECT_TRUE(valid(sch, w).pass());
}

TEST(WlpTest, ValidExamples) {
  auto sch = one_bool();
  auto vx = mk_var(sch, Path::parse("x"));
  EXPECT_TRUE(valid(sch, mk_or(vx, mk_not(vx))).pass());
  auto v = valid(sch, vx);
  EXPECT_FALSE(v.pass());
  ASSERT_TRUE(v.cex.has_value());
  EXPECT_EQ(*v.cex, (State{0}));  // first falsifying state in order
}

TEST(WlpTest, ValidFirstCounterexampleMatchesEnumeration) {
  auto sch = mixed_schema();
  auto states = sch.states();
  for (std::uint32_t seed = 0; seed < 200; ++seed) {
    ExprGen g(sch, seed * 31 + 7);
    auto e = g.boolean(4).folded;
    auto v = valid_check(sch, e);
    std::optional<State> expect;
    for (const auto& s : states)
      if (!eval(e, s)) {
        expect = s;
        break;
      }
    ASSERT_EQ(v.pass, !expect.has_value()) << expr_str(e);
    if (expect) {
      ASSERT_EQ(*v.cex, *expect) << expr_str(e);
    }
  }
}

TEST(WlpTest, HoareExamples) {
  auto sch = one_bool();
  auto x = Path::parse("x");
  auto vx = mk_var(sch, x);

  // partial correctness: {true} abort {false}
  EXPECT_TRUE(hoare(sch, mk_true(), mk_abort(), mk_false()).pass());

  auto v = hoare(sch, mk_true(), mk_assign(sch, x, mk_false()), mk_eq(vx, mk_true()));
  EXPECT_FALSE(v.pass());
  ASSERT_TRUE(v.cex.has_value());
  ASSERT_TRUE(v.cexFinal.has_value());
  EXPECT_EQ((*v.cexFinal)[0], 0u);
}

TEST(WlpTest, NModsExamples) {
  auto sch = two_bool_schema();
  auto x = Path::parse("x");
  auto v1 = nmods(sch, mk_skip(), {x});
  EXPECT_TRUE(v1.pass());
  EXPECT_EQ(v1.method, Verdict::Method::Structural);

  auto v2 = nmods(sch, mk_assign(sch, x, mk_true()), {x});
  EXPECT_FALSE(v2.pass());
  EXPECT_EQ(v2.method, Verdict::Method::SemanticFallback);
  ASSERT_TRUE(v2.cex.has_value());
  EXPECT_EQ((*v2.cex)[0], 0u);  // witness state where x = false

  // havoc over y leaves x alone, structurally
  auto v3 = nmods(sch, mk_havoc(sch, Path::parse("y"), mk_true()), {x});
  EXPECT_TRUE(v3.pass());
  EXPECT_EQ(v3.method, Verdict::Method::Structural);

  // dead guard reduces to abort, which modifies nothing
  auto vx = mk_var(sch, x);
  auto dead = mk_guard(mk_and(vx, mk_not(vx)), mk_assign(sch, x, mk_true()));
  auto v4 = nmods(sch, dead, {x});
  EXPECT_TRUE(v4.pass());
  EXPECT_EQ(v4.method, Verdict::Method::Structural);
}

TEST(WlpTest, EquivExamples) {
  auto sch = one_bool();
  auto p = mk_assign(sch, Path::parse("x"), mk_true());
  EXPECT_TRUE(equiv(sch, mk_guard(mk_true(), p), p).pass());
  auto v = equiv(sch, mk_skip(), mk_abort());
  EXPECT_FALSE(v.pass());
  ASSERT_TRUE(v.cex.has_value());
  EXPECT_EQ(*v.cex, *v.cexFinal);  // identity pair witness
}

// Keystone (small scale): structural wp/wlp agree with the relational oracle
// for every exhaustive depth-2 program over two booleans.
TEST(WlpTest, CalculusOracleAgreementDepth2) {
  auto sch = two_bool_schema();
  auto states = sch.states();
  auto progs = exhaustive_programs(sch, 2);
  ASSERT_GE(progs.size(), 80u);
  auto vx = mk_var(sch, Path::parse("x"));
  auto vy = mk_var(sch, Path::parse("y"));
  std::vector<ExprPtr> posts = {vx, mk_eq(vx, vy)};
  for (const auto& p : progs) {
    for (const auto& b : posts) {
      WpCtx ctx;
      ASSERT_EQ(eval_set(wp(sch, p, b, ctx), states), may_set(sch, p, b, states))
          << prog_str(p);
      ASSERT_EQ(eval_set(wlp(sch, p, b, ctx), states), must_set(sch, p, b, states))
          << prog_str(p);
    }
  }
}

// Frame laws: both provisos and the semantic fallback path agree with the
// oracle on a namespaced schema.
TEST(WlpTest, FrameLawsAgainstOracle) {
  auto sch = mixed_schema();
  auto states = sch.states();
  Schema inner = sch.subschema(Path::parse("a"));
  for (std::uint32_t seed = 0; seed < 80; ++seed) {
    ProgGen inait(inner, seed);
    auto body = inait.gen(3);
    auto framed = mk_frame(sch, Path::parse("a"), body);
    ExprGen eg(sch, seed ^ 0xabcdef);
    auto b = eg.boolean(3).folded;
    WpCtx ctx;
    ASSERT_EQ(eval_set(wp(sch, framed, b, ctx), states), may_set(sch, framed, b, states))
        << prog_str(framed) << " wp " << expr_str(b);
    WpCtx ctx2;
    ASSERT_EQ(eval_set(wlp(sch, framed, b, ctx2), states), must_set(sch, framed, b, states))
        << prog_str(framed) << " wlp " << expr_str(b);
  }
}

TEST(WlpTest, SemanticFallbackIsFlagged) {
  auto sch = mixed_schema();
  Schema inner = sch.subschema(Path::parse("a"));
  auto body = mk_assign(inner, Path::parse("x"), mk_true());
  auto framed = mk_frame(sch, Path::parse("a"), body);
  // postcondition mixes frame and non-frame variables: neither proviso holds
  auto b = mk_and(mk_var(sch, Path::parse("a.x")),
                  mk_leq(mk_var(sch, Path::parse("z")),
                         mk_lit(mk_var(sch, Path::parse("z"))->type, 1)));
  WpCtx ctx;
  auto w = wp(sch, framed, b, ctx);
  EXPECT_TRUE(ctx.fallback);
  auto states = sch.states();
  EXPECT_EQ(eval_set(w, states), may_set(sch, framed, b, states));
}

// Syntactic unrestriction is sound for the semantic property: when
// unrest(a, e) holds, the value of e is the same in any two states that
// differ only inside the namespace a.
TEST(ExprTest, SyntacticUnrestImpliesSemanticIndependence) {
  auto sch = mixed_schema();
  auto range = *sch.ns_range(Path::parse("a"));
  auto states = sch.states();
  int covered = 0;
  for (std::uint32_t seed = 400; seed < 520; ++seed) {
    ExprGen g(sch, seed);
    auto e = g.boolean(3).folded;
    if (!unrest(range, e)) continue;
    ++covered;
    for (const auto& s1 : states)
      for (const auto& s2 : states) {
        bool differOnlyInside = true;
        for (std::uint32_t l = 0; l < sch.leaf_count(); ++l) {
          bool inside = l >= range.first && l < range.second;
          if (!inside && s1[l] != s2[l]) differOnlyInside = false;
        }
        if (!differOnlyInside) continue;
        ASSERT_EQ(eval(e, s1), eval(e, s2)) << expr_str(e);
      }
  }
  EXPECT_GT(covered, 5);
}
