#include <gtest/gtest.h>

#include <random>

#include "kcp/dsdnnf.hpp"
#include "support/oracle.hpp"
#include "support/random_structures.hpp"

using namespace kcp;
using testing_support::random_vtree;

namespace {

// D2 from the majority figure: three disjoint terms, the ternary or as a chain.
const char* kFigureD2 =
    "vtree ((1 2) 3)\n"
    "g 0 LIT -1\n"
    "g 1 LIT 2\n"
    "g 2 AND 0 1\n"
    "g 3 LIT 3\n"
    "g 4 AND 2 3\n"
    "g 5 LIT 1\n"
    "g 6 LIT -2\n"
    "g 7 AND 5 6\n"
    "g 8 AND 7 3\n"
    "g 9 AND 5 1\n"
    "g 10 OR 8 9\n"
    "g 11 OR 4 10\n"
    "root 11\n";

CnfFormula majority() { return CnfFormula(3, {Clause({1, 2}), Clause({1, 3}), Clause({2, 3})}); }

GateId compile(DnnfManager& m, const CnfFormula& f) {
  GateId acc = kGateTrue;
  for (const Clause& c : f.clauses()) acc = m.conjoin(acc, m.clause(c));
  return acc;
}

oracle::Table table(const DnnfManager& m, GateId a, std::size_t n) {
  return oracle::table_of(n, [&](const std::vector<bool>& b) { return m.evaluate(a, b); });
}

void expect_valid(DnnfManager& m, GateId a) {
  EXPECT_EQ(m.validate_structured(a), "");
  EXPECT_EQ(m.validate_deterministic(a), "");
}

}  // namespace

TEST(DnnfFigure, D2RespectsVtreeAndCountsFour) {
  auto [m, root] = dnnf_from_text(kFigureD2);
  expect_valid(*m, root);
  EXPECT_EQ(m->count(root), 4);
  EXPECT_EQ(m->count(root, {1, 2, 3}), 4);
  EXPECT_EQ(table(*m, root, 3), oracle::table_of(majority(), 3));
}

TEST(DnnfFigure, D2IsNotSmoothAsDrawn) {
  // the x1 and x2 term mentions no x3, so a smoothness-demanding check objects
  auto [m, root] = dnnf_from_text(kFigureD2);
  EXPECT_NE(m->validate_structured(root, true), "");
}

TEST(DnnfValidate, AndOverSameVariableRejected) {
  DnnfManager m(Vtree::parse("(1 2)"));
  GateId g = m.raw_and(m.literal(Literal(1, true)), m.literal(Literal(1, false)));
  EXPECT_NE(m.validate_structured(g).find("not decomposable"), std::string::npos);
}

TEST(DnnfValidate, OrVariableSetMismatchRejectedWhenSmooth) {
  DnnfManager m(Vtree::parse("(1 2)"));
  GateId x1 = m.literal(Literal(1, true));
  GateId x1x2 = m.raw_and(m.literal(Literal(1, false)), m.literal(Literal(2, true)));
  GateId g = m.raw_or(x1, x1x2);
  EXPECT_NE(m.validate_structured(g, true).find("variable sets differ"), std::string::npos);
  EXPECT_EQ(m.validate_structured(g), "");
}

TEST(DnnfValidate, AndNotSplitByVtreeRejected) {
  // (1 3) is not a subtree-pair of ((1 2) 3) in the required way: 2 sits under 1's sibling
  DnnfManager m(Vtree::parse("((1 2) (3 4))"));
  GateId a = m.raw_and(m.literal(Literal(1, true)), m.literal(Literal(3, true)));
  GateId b = m.raw_and(a, m.literal(Literal(2, true)));
  EXPECT_EQ(m.validate_structured(a), "");
  EXPECT_NE(m.validate_structured(b).find("not split"), std::string::npos);
}

TEST(DnnfValidate, Determinism) {
  DnnfManager m(Vtree::parse("(1 2)"));
  GateId x1 = m.literal(Literal(1, true)), nx1 = m.literal(Literal(1, false));
  GateId x2 = m.literal(Literal(2, true)), nx2 = m.literal(Literal(2, false));
  EXPECT_NE(m.validate_deterministic(m.raw_or(x1, m.raw_and(x1, x2))), "");
  EXPECT_EQ(m.validate_deterministic(m.raw_or(m.raw_and(x1, nx2), m.raw_and(nx1, x2))), "");
}

TEST(DnnfValidate, ProductCapThrows) {
  DnnfManager m(Vtree::parse("((1 2) (3 (4 (5 6))))"));
  GateId g = m.raw_or(m.clause(Clause({1, 3, 5})), m.clause(Clause({2, 4, 6})));
  EXPECT_THROW(m.validate_deterministic(g, 0), ResourceLimit);
  EXPECT_NE(m.validate_deterministic(g), "");
}

TEST(DnnfConjoin, Examples) {
  DnnfManager m(Vtree::parse("((1 2) 3)"));
  GateId maj = compile(m, majority());
  GateId x1 = m.literal(Literal(1, true));
  EXPECT_EQ(m.count(m.conjoin(maj, x1)), 3);
  EXPECT_TRUE(m.equiv(m.conjoin(maj, kGateTrue), maj));
  EXPECT_TRUE(m.is_unsat(m.conjoin(x1, m.literal(Literal(1, false)))));
}

TEST(DnnfRestrict, Examples) {
  DnnfManager m(Vtree::parse("((1 2) 3)"));
  GateId maj = compile(m, majority());
  GateId r = m.restrict(maj, {{1, false}});
  EXPECT_EQ(m.count(r, {2, 3}), 1);
  EXPECT_TRUE(m.equiv(m.restrict(maj, {}), maj));
  EXPECT_EQ(m.restrict(m.literal(Literal(1, true)), {{1, false}}), kGateFalse);
}

TEST(DnnfCount, Constants) {
  DnnfManager m(Vtree::parse("((1 2) (3 4))"));
  EXPECT_EQ(m.count(kGateTrue), 16);
  EXPECT_EQ(m.count(kGateFalse), 0);
  EXPECT_EQ(m.count(kGateTrue, {1, 2, 3, 4, 5}), 32);
  EXPECT_THROW(m.count(m.literal(Literal(4, true)), {1, 2}), std::invalid_argument);
}

TEST(DnnfCount, EqualityBlockOverFourVars) {
  // x1<->y1 and x2<->y2 with x_i = 1,2 and y_i = 3,4
  DnnfManager m(Vtree::parse("((1 3) (2 4))"));
  CnfFormula eq(4, {Clause({-1, 3}), Clause({1, -3}), Clause({-2, 4}), Clause({2, -4})});
  EXPECT_EQ(m.count(compile(m, eq)), 4);
}

TEST(DnnfEntailment, Examples) {
  DnnfManager m(Vtree::parse("((1 2) 3)"));
  GateId maj = compile(m, majority());
  EXPECT_TRUE(m.clausal_entails(maj, Clause({1, 2})));
  EXPECT_FALSE(m.clausal_entails(maj, Clause({1})));
  EXPECT_TRUE(m.implies(maj, m.clause(Clause({1, 2}))));
  EXPECT_FALSE(m.implies(m.clause(Clause({1, 2})), maj));
  EXPECT_TRUE(m.join_check(m.clause(Clause({1})), m.clause(Clause({-1})), kGateFalse));
}

TEST(DnnfEntailment, TwoBuildsOfMajorityAreEquivalent) {
  DnnfManager m(Vtree::parse("((1 2) 3)"));
  GateId a = compile(m, majority());
  GateId b = m.load({"g 0 LIT -1", "g 1 LIT 2", "g 2 AND 0 1", "g 3 LIT 3", "g 4 AND 2 3", "g 5 LIT 1",
                     "g 6 LIT -2", "g 7 AND 5 6", "g 8 AND 7 3", "g 9 AND 5 1", "g 10 OR 8 9",
                     "g 11 OR 4 10", "root 11"});
  EXPECT_TRUE(m.equiv(a, b));
  EXPECT_TRUE(m.equiv(b, a));
}

TEST(DnnfConvert, FromSdd) {
  Vtree t = Vtree::parse("((1 2) 3)");
  DnnfManager m(t);
  SddManager& s = m.sdd();
  SddId maj = s.conjoin(s.conjoin(s.clause(Clause({1, 2})), s.clause(Clause({1, 3}))), s.clause(Clause({2, 3})));
  GateId g = m.from_sdd(s, maj);
  expect_valid(m, g);
  EXPECT_EQ(m.count(g), 4);
  EXPECT_LE(m.size(g), 2 * s.size(maj) + 2);
  EXPECT_EQ(m.from_sdd(s, kSddFalse), kGateFalse);
  GateId x1 = m.from_sdd(s, s.literal(Literal(1, true)));
  EXPECT_EQ(m.kind(x1), DnnfManager::Kind::literal);
}

TEST(DnnfConvert, FromObdd) {
  VarOrder o = VarOrder::identity(3);
  ObddManager b(o);
  NodeId maj = b.conjoin(b.conjoin(b.clause(Clause({1, 2})), b.clause(Clause({1, 3}))), b.clause(Clause({2, 3})));
  DnnfManager m(right_linear_vtree(o));
  GateId g = m.from_obdd(b, maj);
  expect_valid(m, g);
  EXPECT_EQ(m.count(g), 4);
  EXPECT_EQ(m.from_obdd(b, kObddFalse), kGateFalse);
  DnnfManager other(Vtree::parse("((1 2) 3)"));
  EXPECT_THROW(other.from_obdd(b, maj), std::invalid_argument);
}

TEST(DnnfText, RoundTripAndRejections) {
  auto [m, root] = dnnf_from_text(kFigureD2);
  auto [m2, root2] = dnnf_from_text(dnnf_to_text(*m, root));
  EXPECT_EQ(m2->serialize(root2), m->serialize(root));
  EXPECT_THROW(dnnf_from_text("g 0 LIT 1\nroot 0\n"), ParseError);
  EXPECT_THROW(dnnf_from_text("vtree (1 2)\ng 0 LIT 3\nroot 0\n"), ParseError);
  EXPECT_THROW(dnnf_from_text("vtree (1 2)\ng 0 AND 1 2\nroot 0\n"), ParseError);
  EXPECT_THROW(dnnf_from_text("vtree (1 2)\ng 0 LIT 1\n"), ParseError);
  EXPECT_THROW(dnnf_from_text("vtree (1 2)\ng 0 XOR 1 2\nroot 0\n"), ParseError);
  auto [m3, r3] = dnnf_from_text("vtree (1 2)\ng 0 LIT 1\ng 1 NOT 0\nroot 1\n");
  EXPECT_EQ(m3->lit(r3), Literal(1, false));
}

// Random CNFs on random vtrees: counts, validity and the product bound.
class DnnfRandom : public ::testing::TestWithParam<int> {};

TEST_P(DnnfRandom, ConjoinMatchesOracle) {
  std::mt19937_64 rng(1000 + GetParam());
  const std::size_t n = 3 + rng() % 10;
  DnnfManager m(random_vtree(rng, n));
  CnfFormula f = oracle::random_cnf(rng, n, 1 + rng() % (2 * n), 3);
  CnfFormula g = oracle::random_cnf(rng, n, 1 + rng() % n, 3);
  GateId a = compile(m, f), b = compile(m, g);
  expect_valid(m, a);
  const std::size_t before = m.n_gates();
  GateId c = m.conjoin(a, b);
  EXPECT_LE(m.n_gates() - before, (m.size(a) + 2) * (m.size(b) + 2));
  expect_valid(m, c);
  std::vector<Clause> both = f.clauses();
  both.insert(both.end(), g.clauses().begin(), g.clauses().end());
  CnfFormula fg(n, both);
  EXPECT_EQ(table(m, c, n), oracle::table_of(fg, n));
  EXPECT_EQ(m.count(c), oracle::count_models(fg));
  EXPECT_EQ(m.is_unsat(c), !oracle::satisfiable(fg));
  EXPECT_EQ(m.implies(c, a), true);
  EXPECT_EQ(m.equiv(c, a), oracle::table_of(fg, n) == oracle::table_of(f, n));
}

TEST_P(DnnfRandom, RestrictMatchesOracle) {
  std::mt19937_64 rng(2000 + GetParam());
  const std::size_t n = 3 + rng() % 10;
  DnnfManager m(random_vtree(rng, n));
  CnfFormula f = oracle::random_cnf(rng, n, 1 + rng() % (2 * n), 3);
  GateId a = compile(m, f);
  PartialAssignment pa;
  for (VarId v = 1; v <= n; ++v)
    if (rng() % 3 == 0) pa.set(v, rng() % 2);
  GateId r = m.restrict(a, pa);
  expect_valid(m, r);
  CnfFormula fr = restrict_cnf(f, pa);
  EXPECT_EQ(m.count(r), oracle::count_models(fr));
}

TEST_P(DnnfRandom, SmoothOrGatesAddPlainly) {
  std::mt19937_64 rng(3000 + GetParam());
  const std::size_t n = 2 + rng() % 8;
  DnnfManager m(random_vtree(rng, n));
  GateId a = compile(m, oracle::random_cnf(rng, n, 1 + rng() % n, 3));
  m.count(a);
  for (GateId g : m.reachable(a)) {
    if (m.kind(g) != DnnfManager::Kind::disj) continue;
    GateId x = m.left(g), y = m.right(g);
    if (x <= kGateTrue || y <= kGateTrue || m.vars(x) != m.vars(y)) continue;
    // recount the or-gate over its own variables both ways
    std::vector<VarId> over;
    for (auto v = m.vars(g).find_first(); v != DnnfManager::VarSet::npos; v = m.vars(g).find_next(v))
      over.push_back(static_cast<VarId>(v));
    EXPECT_EQ(m.count(g, over), m.count(x, over) + m.count(y, over));
  }
}

TEST_P(DnnfRandom, CompactKeepsFunction) {
  std::mt19937_64 rng(4000 + GetParam());
  const std::size_t n = 3 + rng() % 10;
  DnnfManager m(random_vtree(rng, n));
  CnfFormula f = oracle::random_cnf(rng, n, 2 + rng() % (2 * n), 3);
  GateId acc = kGateTrue;
  for (const Clause& c : f.clauses()) acc = m.conjoin(acc, m.clause(c));
  GateId small = m.compact(acc);
  expect_valid(m, small);
  EXPECT_EQ(table(m, small, n), oracle::table_of(f, n));
  EXPECT_EQ(m.compact(small), small);
}

INSTANTIATE_TEST_SUITE_P(Seeds, DnnfRandom, ::testing::Range(0, 30));

TEST(DnnfEquiv, IsAnEquivalenceOnSmallSets) {
  std::mt19937_64 rng(77);
  DnnfManager m(random_vtree(rng, 4));
  std::vector<GateId> pool;
  for (int i = 0; i < 12; ++i) pool.push_back(compile(m, oracle::random_cnf(rng, 4, 1 + rng() % 3, 2)));
  for (GateId a : pool) {
    EXPECT_TRUE(m.equiv(a, a));
    for (GateId b : pool) {
      EXPECT_EQ(m.equiv(a, b), m.equiv(b, a));
      for (GateId c : pool)
        if (m.equiv(a, b) && m.equiv(b, c)) EXPECT_TRUE(m.equiv(a, c));
    }
  }
}
