#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <random>

#include "kcp/checker.hpp"
#include "kcp/kit.hpp"
#include "kcp/proof.hpp"
#include "kcp/resolution.hpp"
#include "kcp/zoo.hpp"
#include "support/oracle.hpp"
#include "support/proofs.hpp"
#include "support/random_structures.hpp"

using namespace kcp;

namespace {

CnfFormula phi0() { return parse_dimacs("p cnf 1 2\n1 0\n-1 0\n"); }

const Format kFormats[] = {Format::obdd, Format::sdd, Format::dsdnnf};

Structure structure_for(Format f, std::mt19937_64& rng, std::size_t n) {
  if (f == Format::obdd) return Structure(testing_support::random_order(rng, n));
  return Structure(testing_support::random_vtree(rng, n));
}

// init (x1), init (¬x1), join → ⊥; `third` overrides the join diagram.
Proof trivial(Format f, std::optional<bool> third = std::nullopt) {
  auto kit = make_kit(f);
  Structure s(VarOrder::identity(1));
  if (f != Format::obdd) s = Structure(Vtree::leaf(1));
  std::size_t slot = kit->slot(s);
  ProofWriter w(f, {Rule::join});
  std::string sid = w.structure(s);
  CnfFormula phi = phi0();
  std::size_t a = w.init(0, w.diagram(sid, kit->serialize(kit->clause(slot, phi.clause(0)))));
  std::size_t b = w.init(1, w.diagram(sid, kit->serialize(kit->clause(slot, phi.clause(1)))));
  w.join(a, b, w.diagram(sid, kit->serialize(kit->constant(slot, third.value_or(false)))));
  return w.take();
}

}  // namespace

TEST(ProofCheck, TrivialRefutation) {
  for (Format f : kFormats) {
    Verdict v = check_proof(phi0(), trivial(f));
    EXPECT_TRUE(v.accepted) << format_name(f) << ": " << v.reason;
    EXPECT_EQ(v.stats.lines, 3u);
  }
}

TEST(ProofCheck, JoinReplacedByTop) {
  for (Format f : kFormats) {
    Verdict v = check_proof(phi0(), trivial(f, true));
    EXPECT_FALSE(v.accepted);
    EXPECT_EQ(v.status, VerdictStatus::rejected);
    ASSERT_TRUE(v.failing_line);
    EXPECT_EQ(*v.failing_line, 3u);
    EXPECT_NE(v.reason.find("join mismatch"), std::string::npos) << v.reason;
  }
}

TEST(ProofCheck, TextRoundTrip) {
  for (Format f : kFormats) {
    Proof p = trivial(f);
    std::string text = format_proof(p);
    EXPECT_EQ(format_proof(parse_proof(text)), text);
    EXPECT_TRUE(check_proof_text(phi0(), text).accepted);
  }
}

TEST(ProofCheck, MalformedInputs) {
  std::string good = format_proof(trivial(Format::obdd));
  EXPECT_EQ(check_proof_text(phi0(), "garbage\n").status, VerdictStatus::malformed);
  EXPECT_EQ(check_proof_text(phi0(), "p kcp obdd join\n").status, VerdictStatus::malformed);
  // forward reference
  std::string fwd = good;
  fwd.replace(fwd.find("join 1 2"), 8, "join 1 5");
  EXPECT_EQ(check_proof_text(phi0(), fwd).status, VerdictStatus::malformed);
  // rule not in header
  std::string hdr = good;
  hdr.replace(hdr.find("obdd join"), 9, "obdd weaken");
  EXPECT_FALSE(check_proof_text(phi0(), hdr).accepted);
  // reorder together with weakening is not a system for sdd
  EXPECT_EQ(check_proof_text(phi0(), "p kcp sdd join,weaken,reorder\ns s1 vtree 1\nd a s1 F\nL 1 init 0 a\n").status,
            VerdictStatus::malformed);
}

TEST(ProofCheck, FinalLineMustBeFalse) {
  Proof p = trivial(Format::obdd);
  p.lines.pop_back();
  Verdict v = check_proof(phi0(), p);
  EXPECT_FALSE(v.accepted);
  EXPECT_NE(v.reason.find("constant-false"), std::string::npos) << v.reason;
  CheckOptions derivation;
  derivation.refutation = false;
  EXPECT_TRUE(check_proof(phi0(), p, derivation).accepted);
}

TEST(ProofCheck, VerdictJson) {
  Verdict v = check_proof(phi0(), trivial(Format::sdd, true));
  auto j = nlohmann::json::parse(verdict_json(v));
  EXPECT_EQ(j["accepted"], false);
  EXPECT_EQ(j["failing_line"], 3);
  EXPECT_EQ(j["stats"]["lines"], 3);
  EXPECT_EQ(j["schema_version"], kVerdictSchemaVersion);
}

TEST(ClauseSets, Examples) {
  CnfFormula f(5, {Clause{1}, Clause{2}, Clause{3}, Clause{4}, Clause{5, 1}, Clause{-1}});
  Proof p;
  p.format = Format::obdd;
  p.rules = {Rule::join, Rule::move};
  auto line = [&](Rule r, std::size_t c, std::size_t i, std::size_t j) {
    ProofLine l;
    l.n = p.lines.size() + 1;
    l.rule = r;
    l.clause = c;
    l.i = i;
    l.j = j;
    p.lines.push_back(l);
  };
  line(Rule::init, 3, 0, 0);
  line(Rule::init, 1, 0, 0);
  line(Rule::init, 2, 0, 0);
  line(Rule::init, 5, 0, 0);
  line(Rule::join, 0, 2, 3);  // {1,2}
  line(Rule::join, 0, 3, 4);  // {2,5}
  line(Rule::join, 0, 5, 6);
  line(Rule::move, 0, 7, 0);
  auto sets = track_clause_sets(f, p);
  EXPECT_EQ(sets[0], (std::vector<std::size_t>{3}));
  EXPECT_EQ(sets[6], (std::vector<std::size_t>{1, 2, 5}));
  EXPECT_EQ(sets[7], sets[6]);
  line(Rule::weaken, 0, 8, 0);
  EXPECT_THROW(track_clause_sets(f, p), std::invalid_argument);
}

TEST(Resolution, Examples) {
  ResolutionProof r = parse_resolution("r 1 input 0\nr 2 input 1\nr 3 res 1 2 1\n");
  EXPECT_TRUE(check_resolution(phi0(), r).accepted);
  EXPECT_EQ(r.n_resolutions(), 1u);
  EXPECT_EQ(format_resolution(r), "r 1 input 0\nr 2 input 1\nr 3 res 1 2 1\n");

  CnfFormula f(2, {Clause{1, 2}, Clause{-1, 2}, Clause{-2}});
  Verdict bad = check_resolution(f, parse_resolution("r 1 input 0\nr 2 input 1\nr 3 res 1 2 2\n"));
  EXPECT_FALSE(bad.accepted);
  ASSERT_TRUE(bad.failing_line);
  EXPECT_EQ(*bad.failing_line, 3u);
  EXPECT_FALSE(check_resolution(f, parse_resolution("r 1 input 0\nr 2 res 1 4 1\n")).accepted);
  EXPECT_TRUE(check_resolution(f, parse_resolution("r 1 input 0\nr 2 input 1\nr 3 res 1 2 1\nr 4 input 2\n"
                                                   "r 5 res 3 4 2\n"))
                  .accepted);
  // not ending in the empty clause
  EXPECT_FALSE(check_resolution(f, parse_resolution("r 1 input 0\nr 2 input 1\nr 3 res 1 2 1\n")).accepted);
}

TEST(Resolution, ToObddw) {
  ResolutionProof r = parse_resolution("r 1 input 0\nr 2 input 1\nr 3 res 1 2 1\n");
  Proof p = resolution_to_obddw(phi0(), r, VarOrder::identity(1));
  EXPECT_EQ(p.lines.size(), 4u);
  EXPECT_TRUE(check_proof(phi0(), p).accepted);

  ResolutionProof only_inputs = parse_resolution("r 1 input 0\nr 2 input 1\n");
  EXPECT_THROW(resolution_to_obddw(phi0(), only_inputs, VarOrder::identity(1)), std::invalid_argument);
}

TEST(RestrictProof, Examples) {
  Proof p = trivial(Format::sdd);
  Proof same = restrict_proof(phi0(), p, {});
  EXPECT_EQ(same.lines.size(), p.lines.size());
  EXPECT_TRUE(check_proof(phi0(), same).accepted);

  PartialAssignment a{{1, false}};
  CnfFormula r = restrict_cnf(phi0(), a);
  ASSERT_TRUE(r.has_empty_clause());
  Proof q = restrict_proof(phi0(), p, a);
  Verdict v = check_proof(r, q);
  EXPECT_TRUE(v.accepted) << v.reason;
}

// Honest re-expression over the moved vtree is accepted; any diagram with
// a different function is rejected.
TEST(ProofProperties, MoveAgreesWithBruteForce) {
  std::mt19937_64 rng(11);
  std::size_t tried = 0;
  for (int round = 0; round < 60; ++round) {
    Format fmt = kFormats[round % 3];
    std::size_t n = 2 + rng() % 5;
    CnfFormula f = oracle::random_cnf(rng, n, 1 + rng() % 4, 3);
    Structure s = structure_for(fmt, rng, n);
    VarId x = static_cast<VarId>(1 + rng() % n);
    VtreePath w;
    for (std::size_t k = rng() % 3; k > 0; --k) w.steps += (rng() & 1) ? 'l' : 'r';
    Side side = (rng() & 1) ? Side::left : Side::right;
    if (fmt == Format::obdd) {
      // only moves that keep the vtree right-linear are order moves
      VtreeMove mv = order_move_as_vtree_move(s.order(), x, rng() % n);
      w = mv.w;
      side = mv.d;
    }
    Vtree moved;
    try {
      moved = move(s.vtree(), x, w, side);
    } catch (const std::invalid_argument&) {
      continue;
    }
    Structure t = fmt == Format::obdd ? Structure(as_right_linear_order(moved)) : Structure(moved);
    ++tried;
    auto kit = make_kit(fmt);
    auto c = proofs::compile(*kit, fmt, s, f, {Rule::join, Rule::move});
    CnfFormula g = (rng() & 1) ? f : oracle::random_cnf(rng, n, 1 + rng() % 4, 3);
    std::size_t tslot = kit->slot(t);
    Dia e = proofs::conjoin_all(*kit, tslot, g);
    c.w.move(c.last, x, w, side, c.w.structure(t), c.w.diagram(c.w.structure(t), kit->serialize(e)));
    CheckOptions o;
    o.refutation = false;
    Verdict v = check_proof(f, c.w.proof(), o);
    bool same = oracle::table_of(f, n) == oracle::table_of(g, n);
    EXPECT_EQ(v.accepted, same) << format_name(fmt) << " " << v.reason;
  }
  EXPECT_GT(tried, 20u);
}

TEST(ProofProperties, MoveToWrongStructureRejected) {
  std::mt19937_64 rng(5);
  CnfFormula f(3, {Clause{1, 2}, Clause{-2, 3}});
  Structure s(Vtree::parse("((1 2) 3)"));
  Structure t(Vtree::parse("(1 (2 3))"));
  auto kit = make_kit(Format::sdd);
  auto c = proofs::compile(*kit, Format::sdd, s, f, {Rule::join, Rule::move});
  Dia e = proofs::conjoin_all(*kit, kit->slot(t), f);
  // moving 3 to the left of the root yields (3 (1 2)), not t
  c.w.move(c.last, 3, VtreePath{}, Side::left, c.w.structure(t), c.w.diagram(c.w.structure(t), kit->serialize(e)));
  CheckOptions o;
  o.refutation = false;
  Verdict v = check_proof(f, c.w.proof(), o);
  EXPECT_FALSE(v.accepted);
  EXPECT_NE(v.reason.find("moved vtree"), std::string::npos) << v.reason;
}

// Weakening-free reorder: counts + clausal entailment decide equivalence.
TEST(ProofProperties, ReorderAgreesWithBruteForce) {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 60; ++round) {
    Format fmt = kFormats[round % 3];
    std::size_t n = 2 + rng() % 6;
    CnfFormula f = oracle::random_cnf(rng, n, 1 + rng() % 5, 3);
    Structure s = structure_for(fmt, rng, n);
    Structure t = structure_for(fmt, rng, n);
    if (s == t) continue;
    auto kit = make_kit(fmt);
    auto c = proofs::compile(*kit, fmt, s, f, {Rule::join, Rule::reorder});
    CnfFormula g = f;
    switch (rng() % 3) {
      case 0: break;
      case 1: {
        auto cs = f.clauses();
        cs.push_back(oracle::random_clause(rng, n, 3));
        g = CnfFormula(n, cs);
        break;
      }
      default: g = oracle::random_cnf(rng, n, 1 + rng() % 5, 3);
    }
    Dia e = proofs::conjoin_all(*kit, kit->slot(t), g);
    c.w.reorder(c.last, c.w.structure(t), c.w.diagram(c.w.structure(t), kit->serialize(e)));
    CheckOptions o;
    o.refutation = false;
    Verdict v = check_proof(f, c.w.proof(), o);
    bool same = oracle::table_of(f, n) == oracle::table_of(g, n);
    EXPECT_EQ(v.accepted, same) << format_name(fmt) << " " << v.reason;
  }
}

TEST(ProofProperties, ObddReorderNeedsCertificatesWithWeakening) {
  CnfFormula f(3, {Clause{1, 3}, Clause{-1, 2}});
  auto kit = make_kit(Format::obdd);
  Structure s(VarOrder({1, 2, 3}));
  Structure mid(VarOrder({3, 1, 2})), t(VarOrder({3, 2, 1}));
  Dia em = proofs::conjoin_all(*kit, kit->slot(mid), f);
  Dia et = proofs::conjoin_all(*kit, kit->slot(t), f);
  CheckOptions o;
  o.refutation = false;
  auto run = [&](const Structure& target, Dia e, std::vector<Dia> certs) {
    auto c = proofs::compile(*kit, Format::obdd, s, f, {Rule::join, Rule::weaken, Rule::reorder});
    std::vector<std::string> ids;
    for (Dia x : certs) ids.push_back(c.w.diagram(c.w.structure(kit->structure(x.slot)), kit->serialize(x)));
    std::string tid = c.w.structure(target);
    c.w.reorder(c.last, tid, c.w.diagram(tid, kit->serialize(e)), ids);
    return check_proof(f, c.w.proof(), o);
  };
  // one move of variable 3 to the front needs no intermediate diagram
  Verdict one = run(mid, em, {});
  EXPECT_TRUE(one.accepted) << one.reason;
  // two moves without the intermediate step are rejected
  Verdict bare = run(t, et, {});
  EXPECT_FALSE(bare.accepted);
  EXPECT_NE(bare.reason.find("more than one variable"), std::string::npos) << bare.reason;
  Verdict chained = run(t, et, {em});
  EXPECT_TRUE(chained.accepted) << chained.reason;
  // an intermediate diagram with a different function breaks the chain
  Dia wrong = kit->conjoin(em, kit->literal(kit->slot(mid), Literal(2, true)));
  EXPECT_FALSE(run(t, et, {wrong}).accepted);
}

TEST(ProofProperties, SerialParallelAgree) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 30; ++round) {
    Format fmt = kFormats[round % 3];
    std::size_t n = 2 + rng() % 4;
    CnfFormula f = oracle::random_cnf(rng, n, 2 + rng() % 6, 2);
    auto kit = make_kit(fmt);
    auto c = proofs::compile(*kit, fmt, structure_for(fmt, rng, n), f, {Rule::join});
    std::string text = proofs::mutate_proof_text(format_proof(c.w.proof()), rng);
    CheckOptions s1, s4;
    s1.refutation = s4.refutation = false;
    s4.jobs = 4;
    Verdict a = check_proof_text(f, text, s1), b = check_proof_text(f, text, s4);
    EXPECT_EQ(a.accepted, b.accepted);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.failing_line, b.failing_line);
    EXPECT_EQ(a.reason, b.reason);
  }
}

// Accepted refutations only ever certify unsatisfiable formulas.
TEST(ProofProperties, MutationSoundness) {
  std::mt19937_64 rng(99);
  int accepted_mutants = 0;
  for (int round = 0; round < 150; ++round) {
    Format fmt = kFormats[round % 3];
    std::size_t n = 1 + rng() % 4;
    CnfFormula f = oracle::random_cnf(rng, n, 3 + rng() % 8, 3);
    if (oracle::satisfiable(f)) continue;
    auto kit = make_kit(fmt);
    auto c = proofs::compile(*kit, fmt, structure_for(fmt, rng, n), f, {Rule::join});
    std::string text = format_proof(c.w.proof());
    ASSERT_TRUE(check_proof_text(f, text).accepted);
    // also check against each satisfiable formula obtained by dropping clauses
    std::vector<CnfFormula> targets{f};
    for (std::size_t k = 0; k < f.size(); ++k) {
      auto cs = f.clauses();
      cs.erase(cs.begin() + static_cast<long>(k));
      targets.emplace_back(n, cs);
    }
    for (int m = 0; m < 4; ++m) {
      std::string mutant = proofs::mutate_proof_text(text, rng);
      for (const CnfFormula& g : targets) {
        Verdict v = check_proof_text(g, mutant);
        if (!v.accepted) continue;
        if (&g == &targets[0]) ++accepted_mutants;
        EXPECT_FALSE(oracle::satisfiable(g)) << mutant;
      }
    }
  }
  SUCCEED() << accepted_mutants << " mutants still sound";
}
