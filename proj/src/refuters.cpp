#include "kcp/refuters.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "kcp/checker.hpp"
#include "kcp/graph.hpp"
#include "kcp/kit.hpp"

namespace kcp {

namespace {

std::vector<std::size_t> default_order(const CnfFormula& phi, const std::vector<std::size_t>& order) {
  if (!order.empty()) {
    if (order.size() != phi.size()) throw std::invalid_argument("clause order must list every clause once");
    return order;
  }
  std::vector<std::size_t> o(phi.size());
  std::iota(o.begin(), o.end(), 0);
  return o;
}

// Line plus its diagram while a proof is being written.
struct Item {
  std::size_t line;
  Dia d;
};

struct Builder {
  std::unique_ptr<DiagramKit> kit;
  ProofWriter w;
  std::size_t slot;
  std::string sid;
  std::size_t max_size = 0;

  Builder(Format f, const Structure& s, std::size_t limit, std::set<Rule> rules)
      : kit(make_kit(f, limit)), w(f, std::move(rules)), slot(kit->slot(s)), sid(w.structure(s)) {}
  Builder(Proof seed, Format f, std::size_t limit, std::set<Rule> rules)
      : kit(make_kit(f, limit)), w(std::move(seed), rules), slot(0) {}

  std::string put(Dia d) {
    max_size = std::max(max_size, kit->size(d));
    return w.diagram(w.structure(kit->structure(d.slot)), kit->serialize(d));
  }
  Item init(const CnfFormula& phi, std::size_t c) {
    Dia d = kit->clause(slot, phi.clause(c));
    return {w.init(c, put(d)), d};
  }
  Item join(const Item& a, const Item& b) {
    Dia d = kit->compact(kit->conjoin(a.d, b.d));
    return {w.join(a.line, b.line, put(d)), d};
  }
  Derivation finish(const Item& last) {
    Derivation out;
    out.refuted = kit->is_false(last.d);
    out.final_size = kit->size(last.d);
    out.max_diagram_size = max_size;
    out.proof = w.take();
    return out;
  }
};

}  // namespace

Derivation naive_conjoin_refute(const CnfFormula& phi, const Structure& s, Format f, FoldShape shape,
                                const std::vector<std::size_t>& clause_order, std::size_t node_limit) {
  if (phi.size() == 0) throw std::invalid_argument("nothing to refute: no clauses");
  Builder b(f, s, node_limit, {Rule::join});
  std::vector<Item> items;
  for (std::size_t c : default_order(phi, clause_order)) items.push_back(b.init(phi, c));
  if (shape == FoldShape::left) {
    Item acc = items[0];
    for (std::size_t k = 1; k < items.size(); ++k) acc = b.join(acc, items[k]);
    return b.finish(acc);
  }
  while (items.size() > 1) {
    std::vector<Item> next;
    for (std::size_t k = 0; k + 1 < items.size(); k += 2) next.push_back(b.join(items[k], items[k + 1]));
    if (items.size() % 2) next.push_back(items.back());
    items = std::move(next);
  }
  return b.finish(items[0]);
}

Derivation compile_cnf(const CnfFormula& phi, const Structure& s, Format f,
                       const std::vector<std::size_t>& clause_order, std::size_t node_limit) {
  if (phi.size() == 0) throw std::invalid_argument("nothing to compile: no clauses");
  Builder b(f, s, node_limit, {Rule::join});
  auto order = default_order(phi, clause_order);
  Item acc = b.init(phi, order[0]);
  for (std::size_t k = 1; k < order.size(); ++k) acc = b.join(acc, b.init(phi, order[k]));
  return b.finish(acc);
}

std::size_t compile_max_size(const CnfFormula& phi, const Structure& s, Format f,
                             const std::vector<std::size_t>& clause_order, std::size_t stop_at,
                             std::size_t node_limit) {
  auto kit = make_kit(f, node_limit);
  const std::size_t slot = kit->slot(s);
  Dia acc = kit->constant(slot, true);
  std::size_t best = 0;
  for (std::size_t c : default_order(phi, clause_order)) {
    Dia cl = kit->clause(slot, phi.clause(c));
    acc = kit->conjoin(acc, cl);
    best = std::max({best, kit->size(acc), kit->size(cl)});
    if (stop_at && best >= stop_at) break;
  }
  return best;
}

Derivation sdd_compile_cnf(const CnfFormula& phi, const Vtree& t) { return compile_cnf(phi, Structure(t), Format::sdd); }

ResolutionProof resolution_refute_lifted(const LiftedFormula& z) {
  const std::size_t m = z.m();
  if (z.result.size() == 0 || z.roles.size() != z.result.n_vars())
    throw std::invalid_argument("input is not a lifted formula");
  ResolutionProof r;
  auto input = [&](std::size_t c) {
    r.steps.push_back({ResolutionStep::Kind::input, c, 0, 0, 0});
    return r.steps.size();
  };
  auto res = [&](std::size_t i, std::size_t j, VarId pivot) {
    r.steps.push_back({ResolutionStep::Kind::res, 0, i, j, pivot});
    return r.steps.size();
  };
  std::vector<std::size_t> chain_links;  // step deriving (¬z_i ∨ z_{i+1})
  std::size_t next_impl = m;
  for (std::size_t i = 0; i < m; ++i) {
    const Clause& block = z.result.clause(i);  // C_i ∨ y_i
    std::size_t cur = input(i);
    for (Literal lam : block) cur = res(cur, input(next_impl++), lam.var());
    chain_links.push_back(cur);
  }
  std::size_t cur = input(next_impl);  // (z_1)
  for (std::size_t i = 0; i < m; ++i) cur = res(cur, chain_links[i], z.z(i + 1));
  res(cur, input(next_impl + 1), z.z(m + 1));
  return r;
}

Derivation compilation_to_refutation(const Proof& comp, const LiftedFormula& z, std::size_t node_limit) {
  if (comp.lines.empty()) throw std::invalid_argument("empty compilation");
  const std::size_t m = z.m();
  Builder b(comp, comp.format, node_limit, {Rule::join});
  const DiagramEntry& last = comp.diagram(comp.lines.back().did);
  b.slot = b.kit->slot(comp.structure(last.sid));
  Item acc{comp.lines.size(), b.kit->load(b.slot, last.records)};
  b.max_size = 0;
  for (const ProofLine& l : comp.lines) {
    const DiagramEntry& e = comp.diagram(l.did);
    b.max_size = std::max(b.max_size, b.kit->size(b.kit->load(b.kit->slot(comp.structure(e.sid)), e.records)));
  }
  // the compilation must compute C(phi) = the first m clauses of Z
  Dia want = b.kit->constant(b.slot, true);
  for (std::size_t i = 0; i < m; ++i) want = b.kit->conjoin(want, b.kit->clause(b.slot, z.result.clause(i)));
  if (!b.kit->equivalent(acc.d, want)) throw std::invalid_argument("compilation does not compute C(phi)");

  const CnfFormula& zf = z.result;
  std::size_t next = m;
  std::vector<std::vector<std::size_t>> blocks(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < zf.clause(i).size(); ++k) blocks[i].push_back(next++);
  const std::size_t z1 = next, last_z = next + 1;

  acc = b.join(acc, b.init(zf, z1));
  for (std::size_t i = 0; i < m; ++i) {
    Item block = b.init(zf, blocks[i][0]);
    for (std::size_t k = 1; k < blocks[i].size(); ++k) block = b.join(block, b.init(zf, blocks[i][k]));
    acc = b.join(acc, block);
  }
  acc = b.join(acc, b.init(zf, last_z));
  return b.finish(acc);
}

std::vector<std::size_t> elimination_clause_order(const CnfFormula& phi, const std::vector<std::size_t>& elim) {
  std::vector<std::size_t> pos(phi.n_vars() + 1, 0);
  for (std::size_t k = 0; k < elim.size(); ++k) pos[elim[k] + 1] = k;
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::size_t>> keyed;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    std::size_t lo = elim.size(), hi = 0;
    for (Literal l : phi.clause(i)) {
      lo = std::min(lo, pos[l.var()]);
      hi = std::max(hi, pos[l.var()]);
    }
    keyed.push_back({{lo, hi}, i});
  }
  std::stable_sort(keyed.begin(), keyed.end());
  std::vector<std::size_t> out;
  for (auto& k : keyed) out.push_back(k.second);
  return out;
}

TreewidthRefutation treewidth_refute(const CnfFormula& phi, std::size_t node_limit) {
  LiftedFormula c = lift_C(phi);
  LiftedFormula z = lift_Z(phi);
  Graph g = primal_graph(c.result);
  TreeDecomposition td = tree_decomposition(g);
  Vtree tc = vtree_from_decomposition(td, c.result);
  std::vector<VarId> chain;
  for (std::size_t i = 1; i <= z.m() + 1; ++i) chain.push_back(z.z(i));
  Vtree t = Vtree::join(tc, right_linear_vtree(VarOrder(chain)));
  auto order = elimination_clause_order(c.result, min_fill_order(g));
  TreewidthRefutation out{{}, compile_cnf(c.result, Structure(t), Format::sdd, order, node_limit), td.width, t};
  out.refutation = compilation_to_refutation(out.compilation.proof, z, node_limit);
  return out;
}

VarOrder eq_order(std::size_t n, std::size_t l) {
  LiftedFormula z = lift_Z(eq_formula(n, l));
  std::vector<VarId> seq;
  for (std::size_t k = 0; k < n; ++k) {
    seq.push_back(VarId(k + 1));
    seq.push_back(VarId(n + (l + k) % n + 1));
    seq.push_back(z.y(2 * k + 1));
    seq.push_back(z.y(2 * k + 2));
  }
  for (std::size_t i = 1; i <= z.m() + 1; ++i) seq.push_back(z.z(i));
  return VarOrder(seq);
}

EqRefutation obdd_refute_eq(std::size_t n, std::size_t l, std::size_t node_limit) {
  CnfFormula eq = eq_formula(n, l);
  LiftedFormula z = lift_Z(eq);
  EqRefutation out;
  out.compilation = compile_cnf(lift_C(eq).result, Structure(eq_order(n, l)), Format::obdd, {}, node_limit);
  out.refutation = compilation_to_refutation(out.compilation.proof, z, node_limit);
  return out;
}

namespace {

enum class MissingKind { block, literal, control, first_z, last_z };

struct Missing {
  MissingKind kind;
  std::size_t l = 0;  // 1-based block index
  std::size_t lit = 0;
};

Missing classify(const LiftedFormula& z, std::size_t r) {
  const std::size_t m = z.m();
  if (r < m) return {MissingKind::block, r + 1};
  std::size_t at = m;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t width = z.base.clause(i).size();
    if (r < at + width) return {MissingKind::literal, i + 1, r - at};
    if (r == at + width) return {MissingKind::control, i + 1};
    at += width + 1;
  }
  if (r == at) return {MissingKind::first_z};
  return {MissingKind::last_z};
}

// Assignment to the lifted variables (and some originals) that satisfies
// every clause of Z except `r` and leaves each other block clause either
// satisfied or untouched.
PartialAssignment lifting_assignment(const LiftedFormula& z, std::size_t r) {
  const std::size_t m = z.m();
  const Missing k = classify(z, r);
  PartialAssignment a;
  auto set_y = [&](bool v) {
    for (std::size_t i = 1; i <= m; ++i) a.set(z.y(i), v);
  };
  auto set_z = [&](std::size_t split) {
    for (std::size_t i = 1; i <= m + 1; ++i) a.set(z.z(i), i <= split);
  };
  switch (k.kind) {
    case MissingKind::first_z:
      set_y(false);
      set_z(0);
      return a;
    case MissingKind::last_z:
      set_y(false);
      set_z(m + 1);
      return a;
    default: break;
  }
  const Clause& cl = z.base.clause(k.l - 1);
  set_y(false);
  for (std::size_t j = 0; j < m; ++j) {
    if (j == k.l - 1) continue;
    bool shares = std::any_of(z.base.clause(j).begin(), z.base.clause(j).end(),
                              [&](Literal x) { return cl.mentions(x.var()); });
    if (shares) a.set(z.y(j + 1), true);
  }
  for (std::size_t t = 0; t < cl.size(); ++t)
    a.set(cl[t].var(), k.kind == MissingKind::literal && t == k.lit ? cl[t].positive() : !cl[t].positive());
  // With only y_l falsified the block's implication clauses would shrink to
  // units ¬λ; setting y_l and falsifying C_l keeps them satisfied instead.
  if (k.kind == MissingKind::control) a.set(z.y(k.l), true);
  set_z(k.l);
  return a;
}

bool satisfies(const PartialAssignment& a, const Clause& c) {
  return std::any_of(c.begin(), c.end(),
                     [&](Literal l) { return a.contains(l.var()) && l.satisfied_by(a.value(l.var())); });
}

}  // namespace

Extraction extract_representation(const Proof& p, const LiftedFormula& z, std::size_t node_limit) {
  if (!p.weakening_free()) throw std::invalid_argument("extraction needs a weakening-free refutation");
  if (p.lines.empty()) throw std::invalid_argument("empty proof");
  auto kit = make_kit(p.format, node_limit);
  auto load = [&](std::size_t line) {
    const DiagramEntry& e = p.diagram(p.lines.at(line - 1).did);
    return kit->load(kit->slot(p.structure(e.sid)), e.records);
  };
  // walk back to the last join whose operands are both satisfiable
  std::size_t cur = p.lines.size();
  Extraction out;
  out.format = p.format;
  for (;;) {
    const ProofLine& l = p.lines[cur - 1];
    if (l.rule == Rule::move || l.rule == Rule::reorder) {
      cur = l.i;
      continue;
    }
    if (l.rule != Rule::join) throw std::invalid_argument("cannot normalise: ⊥ derived by " + rule_name(l.rule));
    Dia a = load(l.i), b = load(l.j);
    if (kit->count(a) == 0) cur = l.i;
    else if (kit->count(b) == 0) cur = l.j;
    else {
      out.p = l.i;
      out.q = l.j;
      break;
    }
  }
  auto sets = track_clause_sets(z.result, p);
  auto first_missing = [&](const std::vector<std::size_t>& s) {
    std::size_t r = 0;
    for (std::size_t c : s) {
      if (c != r) break;
      ++r;
    }
    return r;
  };
  out.missing_p = first_missing(sets[out.p - 1]);
  out.missing_q = first_missing(sets[out.q - 1]);
  if (out.missing_p >= z.result.size() || out.missing_q >= z.result.size())
    throw std::invalid_argument("a joined line already computes all of Z");
  const PartialAssignment ap = lifting_assignment(z, out.missing_p);
  const PartialAssignment aq = lifting_assignment(z, out.missing_q);
  for (auto [line, a] : {std::pair{out.p, &ap}, std::pair{out.q, &aq}})
    for (std::size_t c : sets[line - 1])
      if (!satisfies(*a, z.result.clause(c)) &&
          std::all_of(z.result.clause(c).begin(), z.result.clause(c).end(),
                      [&](Literal l) { return a->contains(l.var()); }))
        throw std::logic_error("lifting assignment falsifies a clause it must keep");

  std::set<std::size_t> kept;
  std::set<VarId> tail_vars;
  for (std::size_t j = 0; j < z.m(); ++j)
    if (satisfies(ap, z.result.clause(j)) || satisfies(aq, z.result.clause(j))) {
      kept.insert(j);
      for (Literal l : z.base.clause(j)) tail_vars.insert(l.var());
    }
  if (tail_vars.size() > kExtractionVarCap)
    throw ResourceLimit("extraction tail mentions " + std::to_string(tail_vars.size()) + " variables");
  out.kept.assign(kept.begin(), kept.end());

  Dia dp = kit->restrict(load(out.p), ap);
  Dia dq = kit->restrict(load(out.q), aq);
  Dia result = kit->conjoin(dp, dq);
  for (std::size_t j : kept) result = kit->conjoin(result, kit->clause(dp.slot, z.base.clause(j)));
  out.structure = kit->structure(result.slot);
  out.records = kit->serialize(result);
  out.size = kit->size(result);
  return out;
}

}  // namespace kcp
