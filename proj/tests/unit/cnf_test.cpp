#include <gtest/gtest.h>

#include <random>

#include "kcp/brute_force.hpp"
#include "kcp/cnf.hpp"
#include "kcp/graph.hpp"
#include "support/oracle.hpp"

using namespace kcp;

namespace {

CnfFormula phi0() { return parse_dimacs("p cnf 1 2\n1 0\n-1 0\n"); }

}  // namespace

TEST(Dimacs, ReadsUnitPair) {
  CnfFormula f = phi0();
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f.clause(0), Clause({1}));
  EXPECT_EQ(f.clause(1), Clause({-1}));
}

TEST(Dimacs, ReadsSingleClause) {
  CnfFormula f = parse_dimacs("c comment\np cnf 2 1\n1 2 0\n");
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f.clause(0), Clause({1, 2}));
}

TEST(Dimacs, RejectsTautology) {
  EXPECT_THROW(parse_dimacs("p cnf 1 1\n1 -1 0\n"), ParseError);
}

TEST(Dimacs, RejectsBadInput) {
  EXPECT_THROW(parse_dimacs("p cnf x 1\n1 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 1 1\n2 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("1 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 2 2\n1 0\n"), ParseError);
}

TEST(Dimacs, EmptyClauseSurvives) {
  CnfFormula f = parse_dimacs("p cnf 1 1\n0\n");
  EXPECT_TRUE(f.has_empty_clause());
}

TEST(Dimacs, RoundTripRandom) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    CnfFormula f = oracle::random_cnf(rng, 1 + t % 9, t % 12, 4);
    EXPECT_EQ(parse_dimacs(to_dimacs(f)), f);
  }
}

TEST(Restrict, Examples) {
  CnfFormula f(2, {Clause({1, 2})});
  EXPECT_EQ(restrict_cnf(f, {{1, true}}).size(), 0u);
  CnfFormula r = restrict_cnf(f, {{1, false}});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r.clause(0), Clause({2}));
  EXPECT_TRUE(restrict_cnf(phi0(), {{1, false}}).has_empty_clause());
}

TEST(Restrict, OrderInsensitive) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 6;
    CnfFormula f = oracle::random_cnf(rng, n, 8, 3);
    PartialAssignment a, b;
    for (VarId v = 1; v <= n; ++v) {
      int pick = static_cast<int>(rng() % 3);
      if (pick == 1) a.set(v, rng() & 1);
      if (pick == 2) b.set(v, rng() & 1);
    }
    EXPECT_EQ(restrict_cnf(restrict_cnf(f, a), b), restrict_cnf(f, a.merged(b)));
    EXPECT_EQ(restrict_cnf(restrict_cnf(f, a), b), restrict_cnf(restrict_cnf(f, b), a));
  }
}

TEST(BruteForce, Examples) {
  EXPECT_EQ(brute_force_models(CnfFormula(2, {Clause({1, 2})})), 3);
  CnfFormula maj(3, {Clause({1, 2}), Clause({1, 3}), Clause({2, 3})});
  EXPECT_EQ(brute_force_models(maj), 4);
  EXPECT_EQ(brute_force_models(phi0()), 0);
}

TEST(BruteForce, CapIsEnforced) {
  CnfFormula wide(30, {Clause({30})});
  EXPECT_THROW(brute_force_models(wide), ResourceLimit);
  EXPECT_NO_THROW(brute_force_models(wide, 30));
}

TEST(BruteForce, SerialAndParallelAgreeWithOracle) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    CnfFormula f = oracle::random_cnf(rng, 1 + t % 12, t % 15, 3);
    BigCount want = oracle::count_models(f);
    EXPECT_EQ(serial::count_models(f), want);
    EXPECT_EQ(parallel::count_models(f), want);
    auto s = serial::minimal_unsat(f);
    auto p = parallel::minimal_unsat(f);
    EXPECT_EQ(s.minimal, p.minimal);
    EXPECT_EQ(s.redundant, p.redundant);
    EXPECT_EQ(s.minimal, oracle::minimally_unsat(f));
    EXPECT_EQ(is_satisfiable(f), want > 0);
  }
}

TEST(BruteForce, MinimalUnsatExamples) {
  EXPECT_TRUE(is_minimally_unsat(phi0()));
  CnfFormula extra(2, {Clause({1}), Clause({-1}), Clause({1, 2})});
  EXPECT_FALSE(is_minimally_unsat(extra));
  EXPECT_EQ(serial::minimal_unsat(extra).redundant, std::vector<std::size_t>{2});
}

TEST(Profile, Examples) {
  EXPECT_EQ(kl_profile(CnfFormula(2, {Clause({1, 2})})), (KlProfile{2, 1}));
  EXPECT_EQ(kl_profile(phi0()), (KlProfile{1, 2}));
}

TEST(PrimalGraph, Examples) {
  Graph g = primal_graph(CnfFormula(2, {Clause({1, 2})}));
  ASSERT_EQ(g.n_edges(), 1u);
  EXPECT_TRUE(g.has_edge(0, 1));
  Graph p = primal_graph(CnfFormula(3, {Clause({1, 2}), Clause({2, 3})}));
  EXPECT_EQ(p.n_edges(), 2u);
  EXPECT_TRUE(p.has_edge(0, 1));
  EXPECT_TRUE(p.has_edge(1, 2));
  EXPECT_FALSE(p.has_edge(0, 2));
}

TEST(TreeDecomposition, SmallGraphs) {
  Graph edge(2);
  edge.add_edge(0, 1);
  auto td = tree_decomposition(edge);
  EXPECT_EQ(td.width, 1u);
  EXPECT_EQ(validate_decomposition(edge, td), "");

  Graph path(3);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  EXPECT_EQ(tree_decomposition(path).width, 1u);

  Graph tri(3);
  tri.add_edge(0, 1);
  tri.add_edge(1, 2);
  tri.add_edge(0, 2);
  td = tree_decomposition(tri);
  EXPECT_EQ(td.width, 2u);
  EXPECT_EQ(validate_decomposition(tri, td), "");
}

TEST(TreeDecomposition, AlwaysValidOnRandomGraphs) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 1 + rng() % 14;
    Graph g(n);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (rng() % 4 == 0) g.add_edge(u, v);
    auto td = tree_decomposition(g);
    EXPECT_EQ(validate_decomposition(g, td), "") << "trial " << t;
    auto back = parse_decomposition(format_decomposition(td));
    EXPECT_EQ(back.bags, td.bags);
    EXPECT_EQ(back.tree_edges, td.tree_edges);
  }
}

TEST(TreeDecomposition, ValidatorCatchesBrokenInput) {
  Graph tri(3);
  tri.add_edge(0, 1);
  tri.add_edge(1, 2);
  tri.add_edge(0, 2);
  TreeDecomposition bad;
  bad.bags = {{0, 1}, {1, 2}};
  bad.tree_edges = {{0, 1}};
  bad.width = 1;
  EXPECT_NE(validate_decomposition(tri, bad), "");
  TreeDecomposition split;
  split.bags = {{0, 1}, {1, 2}, {0, 2}};
  split.tree_edges = {{0, 1}, {1, 2}};
  split.width = 1;
  EXPECT_NE(validate_decomposition(tri, split), "");  // vertex 0 disconnected
}
