#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "kcp/obdd.hpp"
#include "support/oracle.hpp"

using namespace kcp;

namespace {

std::shared_ptr<ObddManager> manager(std::vector<VarId> order) {
  return std::make_shared<ObddManager>(VarOrder(std::move(order)));
}

Obdd compile(const CnfFormula& f, const std::shared_ptr<ObddManager>& m) {
  NodeId acc = kObddTrue;
  for (const Clause& c : f.clauses()) acc = m->conjoin(acc, m->clause(c));
  return {m, acc};
}

CnfFormula majority() { return CnfFormula(3, {Clause({1, 2}), Clause({1, 3}), Clause({2, 3})}); }

oracle::Table table(const Obdd& d, std::size_t n) {
  return oracle::table_of(n, [&](const std::vector<bool>& b) { return d.mgr->evaluate(d.root, b); });
}

VarOrder shuffled(std::mt19937_64& rng, std::size_t n) {
  std::vector<VarId> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<VarId>(i + 1);
  std::shuffle(s.begin(), s.end(), rng);
  return VarOrder(s);
}

}  // namespace

TEST(ObddClause, Sizes) {
  auto m = manager({1, 2});
  EXPECT_EQ(m->size(m->clause(Clause({1, 2}))), 2u);
  EXPECT_EQ(m->clause(Clause()), kObddFalse);
  EXPECT_EQ(m->size(m->clause(Clause({-2}))), 1u);
}

TEST(ObddApply, Examples) {
  auto m = manager({1, 2, 3});
  EXPECT_EQ(m->conjoin(m->clause(Clause({1})), m->clause(Clause({-1}))), kObddFalse);
  Obdd maj = compile(majority(), m);
  EXPECT_EQ(maj.size(), 4u);
  EXPECT_EQ(m->conjoin(maj.root, kObddTrue), maj.root);
  // the disjunctive description builds the same node
  NodeId x1 = m->literal(Literal(1, true)), x2 = m->literal(Literal(2, true)),
         x3 = m->literal(Literal(3, true));
  NodeId dnf = m->disjoin(m->disjoin(m->conjoin(x1, x2), m->conjoin(x1, x3)), m->conjoin(x2, x3));
  EXPECT_EQ(dnf, maj.root);
}

TEST(ObddRestrict, Examples) {
  auto m = manager({1, 2, 3});
  Obdd maj = compile(majority(), m);
  NodeId r = m->restrict(maj.root, {{1, true}});
  EXPECT_EQ(r, m->clause(Clause({2, 3})));
  EXPECT_EQ(m->size(r), 2u);
  auto m4 = manager({1, 2, 3, 4});
  Obdd maj4 = compile(majority(), m4);
  EXPECT_EQ(m4->restrict(maj4.root, {{4, false}}), maj4.root);
  EXPECT_EQ(m->restrict(maj.root, {{1, false}, {2, false}}), kObddFalse);
}

TEST(ObddCount, Examples) {
  auto m = manager({1, 2, 3});
  Obdd maj = compile(majority(), m);
  EXPECT_EQ(obdd_count(maj, {1, 2, 3}), 4);
  EXPECT_EQ(m->count(kObddTrue, {1, 2, 3}), 8);
  EXPECT_EQ(m->count(m->clause(Clause({1, 2})), {1, 2}), 3);
  EXPECT_EQ(m->count(m->clause(Clause({1, 2})), {1, 2, 3, 7}), 12);
  EXPECT_THROW(m->count(m->clause(Clause({1, 3})), {1, 2}), std::invalid_argument);
}

TEST(ObddEntails, Examples) {
  auto m = manager({1, 2, 3});
  Obdd maj = compile(majority(), m);
  Obdd c12 = obdd_from_clause(Clause({1, 2}), m);
  Obdd c1 = obdd_from_clause(Clause({1}), m);
  EXPECT_TRUE(obdd_entails(maj, c12));
  EXPECT_TRUE(obdd_entails(c1, c12));
  EXPECT_FALSE(obdd_entails(c12, c1));
  EXPECT_TRUE(obdd_is_unsat(obdd_and(c1, obdd_negate(c1))));
  auto other = manager({3, 2, 1});
  EXPECT_THROW(obdd_and(c1, obdd_from_clause(Clause({1}), other)), std::invalid_argument);
}

TEST(ObddMove, Examples) {
  ObddRegistry reg;
  auto m = reg.manager(VarOrder({1, 2, 3}));
  Obdd maj = compile(majority(), m);
  Obdd moved = obdd_move_var(maj, 3, 0, reg);
  EXPECT_EQ(moved.order(), VarOrder({3, 1, 2}));
  EXPECT_EQ(obdd_count(moved, {1, 2, 3}), 4);
  EXPECT_TRUE(obdd_equal(moved, compile(majority(), moved.mgr)));
  EXPECT_TRUE(obdd_equal(obdd_move_var(maj, 2, 1, reg), maj));

  auto m2 = reg.manager(VarOrder({1, 2}));
  Obdd c = obdd_from_clause(Clause({1, 2}), m2);
  Obdd swapped = obdd_move_var(c, 1, 1, reg);
  EXPECT_EQ(swapped.size(), 2u);
  EXPECT_TRUE(obdd_equal(swapped, obdd_from_clause(Clause({1, 2}), swapped.mgr)));
}

TEST(ObddCheckMove, Examples) {
  ObddRegistry reg;
  Obdd maj = compile(majority(), reg.manager(VarOrder({1, 2, 3})));
  Obdd other = compile(majority(), reg.manager(VarOrder({3, 1, 2})));
  EXPECT_TRUE(obdd_check_move(maj, other, 3));
  // flip the sink on the x1=x2=1 path
  Obdd wrong{other.mgr, other.mgr->conjoin(other.root, other.mgr->clause(Clause({-1, -2})))};
  EXPECT_FALSE(obdd_check_move(maj, wrong, 3));
  EXPECT_TRUE(obdd_check_move(maj, maj, 2));
  Obdd far = compile(majority(), reg.manager(VarOrder({3, 2, 1})));
  EXPECT_THROW(obdd_check_move(maj, far, 3), std::invalid_argument);
}

TEST(ObddText, RoundTripAndRejections) {
  ObddRegistry reg;
  Obdd maj = compile(majority(), reg.manager(VarOrder({1, 2, 3})));
  std::string text = obdd_to_text(maj);
  Obdd back = obdd_from_text(text, reg);
  EXPECT_TRUE(obdd_equal(back, maj));
  ObddRegistry fresh;
  Obdd again = obdd_from_text(text, fresh);
  EXPECT_EQ(again.size(), 4u);
  EXPECT_THROW(obdd_from_text("o 1 2\nn 2 1 F F\nroot 2\n", fresh), ParseError);
  EXPECT_THROW(obdd_from_text("o 1 2\nn 2 2 F T\nn 3 1 2 T\nn 4 2 F T\nroot 3\n", fresh), ParseError);
  EXPECT_THROW(obdd_from_text("o 1 2\nn 2 1 F T\nn 3 2 F 2\nroot 3\n", fresh), ParseError);
  EXPECT_THROW(obdd_from_text("o 1 2\nn 2 1 F T\n", fresh), ParseError);
}

TEST(ObddProperties, CanonicityAndApplyAgainstOracle) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 120; ++t) {
    std::size_t n = 2 + t % 11;
    auto m = std::make_shared<ObddManager>(shuffled(rng, n));
    CnfFormula f = oracle::random_cnf(rng, n, 1 + rng() % 10, 3);
    CnfFormula g = oracle::random_cnf(rng, n, 1 + rng() % 10, 3);
    Obdd df = compile(f, m), dg = compile(g, m);
    auto tf = oracle::table_of(f, n), tg = oracle::table_of(g, n);
    EXPECT_EQ(table(df, n), tf);
    oracle::Table both(tf.size()), either(tf.size()), notf(tf.size());
    for (std::size_t i = 0; i < tf.size(); ++i) {
      both[i] = tf[i] && tg[i];
      either[i] = tf[i] || tg[i];
      notf[i] = !tf[i];
    }
    EXPECT_EQ(table(obdd_and(df, dg), n), both);
    EXPECT_EQ(table(obdd_or(df, dg), n), either);
    EXPECT_EQ(table(obdd_negate(df), n), notf);
    EXPECT_EQ((df.root == dg.root), (tf == tg));
    // reversed clause order lands on the same node
    std::vector<Clause> rev(f.clauses().rbegin(), f.clauses().rend());
    EXPECT_EQ(compile(CnfFormula(n, rev), m).root, df.root);
    std::vector<VarId> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<VarId>(i + 1);
    EXPECT_EQ(obdd_count(df, all), oracle::count(tf));
    EXPECT_EQ(m->validate(), "");
  }
}

TEST(ObddProperties, MovesPreserveFunctionAndChainStaysWithinProduct) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 60; ++t) {
    std::size_t n = 3 + t % 8;
    ObddRegistry reg;
    CnfFormula f = oracle::random_cnf(rng, n, 2 + rng() % 8, 3);
    Obdd d = compile(f, reg.manager(shuffled(rng, n)));
    VarOrder target = shuffled(rng, n);
    Obdd e = compile(f, reg.manager(target));
    auto tf = oracle::table_of(f, n);
    auto chain = obdd_reorder_chain(d, target, reg);
    Obdd prev = d;
    for (const Obdd& step : chain) {
      EXPECT_EQ(table(step, n), tf);
      EXPECT_LE(step.size(), std::max<std::size_t>(1, d.size() * e.size()));
      EXPECT_TRUE(obdd_check_move(prev, step, moved_variable(prev.order(), step.order())));
      prev = step;
    }
    EXPECT_TRUE(obdd_equal(prev, e));
  }
}
