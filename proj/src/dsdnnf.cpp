#include "kcp/dsdnnf.hpp"

#include <map>
#include <set>
#include <sstream>

namespace kcp {

namespace {
std::size_t bits_for(const Vtree& t) {
  VarId m = 0;
  for (VarId v : t.leaves()) m = std::max(m, v);
  return m + 1;
}
}  // namespace

DnnfManager::DnnfManager(Vtree vtree, std::size_t gate_limit)
    : vtree_(std::move(vtree)), gate_limit_(gate_limit), sdd_(std::make_unique<SddManager>(vtree_)) {
  VarSet empty(bits_for(vtree_));
  gates_.push_back(Gate{Kind::constant, 0, 0, Literal(), -1, empty});
  gates_.push_back(Gate{Kind::constant, 0, 0, Literal(), -1, empty});
}

GateId DnnfManager::intern(Kind kind, GateId a, GateId b, Literal lit) {
  Key key{kind, a, b, lit.to_dimacs()};
  if (auto it = unique_.find(key); it != unique_.end()) return it->second;
  if (gates_.size() >= gate_limit_)
    throw ResourceLimit("d-SDNNF gate limit " + std::to_string(gate_limit_) + " reached");
  Gate g{kind, a, b, lit, -1, VarSet(bits_for(vtree_))};
  if (kind == Kind::literal) {
    g.vars.set(lit.var());
    g.vnode = vtree_.leaf_of(lit.var());
  } else {
    g.vars = gates_[a].vars | gates_[b].vars;
    const int va = gates_[a].vnode, vb = gates_[b].vnode;
    g.vnode = va < 0 ? vb : vb < 0 ? va : vtree_.lca(va, vb);
  }
  GateId id = static_cast<GateId>(gates_.size());
  gates_.push_back(std::move(g));
  unique_.emplace(key, id);
  return id;
}

GateId DnnfManager::literal(Literal l) {
  if (!vtree_.contains(l.var())) throw std::invalid_argument("variable " + std::to_string(l.var()) + " not in vtree");
  return intern(Kind::literal, 0, 0, l);
}

GateId DnnfManager::raw_and(GateId a, GateId b) { return intern(Kind::conj, a, b, Literal()); }
GateId DnnfManager::raw_or(GateId a, GateId b) { return intern(Kind::disj, a, b, Literal()); }

GateId DnnfManager::mk_and(GateId a, GateId b) {
  if (a == kGateFalse || b == kGateFalse) return kGateFalse;
  if (a == kGateTrue) return b;
  if (b == kGateTrue || a == b) return a;
  return raw_and(a, b);
}

GateId DnnfManager::mk_or(GateId a, GateId b) {
  if (a == kGateTrue || b == kGateTrue) return kGateTrue;
  if (a == kGateFalse) return b;
  if (b == kGateFalse || a == b) return a;
  return raw_or(a, b);
}

GateId DnnfManager::from_sdd(const SddManager& m, SddId root) {
  std::unordered_map<SddId, GateId> memo;
  auto rec = [&](auto&& self, SddId n) -> GateId {
    if (n == kSddFalse) return kGateFalse;
    if (n == kSddTrue) return kGateTrue;
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    GateId r;
    if (m.kind(n) == SddManager::Kind::literal) {
      r = literal(m.lit(n));
    } else {
      const auto& el = m.elements(n);
      r = kGateFalse;
      for (std::size_t i = el.size(); i-- > 0;)
        r = mk_or(mk_and(self(self, el[i].first), self(self, el[i].second)), r);
    }
    memo.emplace(n, r);
    return r;
  };
  return rec(rec, root);
}

GateId DnnfManager::clause(const Clause& c) { return from_sdd(*sdd_, sdd_->clause(c)); }

GateId DnnfManager::from_obdd(const ObddManager& m, NodeId root) {
  if (!(vtree_ == right_linear_vtree(m.order())))
    throw std::invalid_argument("circuit vtree is not the right-linear vtree of the OBDD order");
  std::unordered_map<NodeId, GateId> memo;
  auto rec = [&](auto&& self, NodeId n) -> GateId {
    if (n == kObddFalse) return kGateFalse;
    if (n == kObddTrue) return kGateTrue;
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    const VarId x = m.var(n);
    GateId r = mk_or(mk_and(literal(Literal(x, false)), self(self, m.lo(n))),
                     mk_and(literal(Literal(x, true)), self(self, m.hi(n))));
    memo.emplace(n, r);
    return r;
  };
  return rec(rec, root);
}

GateId DnnfManager::import(const DnnfManager& src, GateId root) {
  std::unordered_map<GateId, GateId> memo;
  auto rec = [&](auto&& self, GateId g) -> GateId {
    if (g <= kGateTrue) return g;
    if (auto it = memo.find(g); it != memo.end()) return it->second;
    GateId r;
    switch (src.kind(g)) {
      case Kind::literal: r = literal(src.lit(g)); break;
      case Kind::conj: r = mk_and(self(self, src.left(g)), self(self, src.right(g))); break;
      default: r = mk_or(self(self, src.left(g)), self(self, src.right(g))); break;
    }
    memo.emplace(g, r);
    return r;
  };
  return rec(rec, root);
}

GateId DnnfManager::simplify(GateId root) {
  std::unordered_map<GateId, GateId> memo;
  auto rec = [&](auto&& self, GateId g) -> GateId {
    if (kind(g) == Kind::constant || kind(g) == Kind::literal) return g;
    if (auto it = memo.find(g); it != memo.end()) return it->second;
    const Kind k = kind(g);
    const GateId a = left(g), b = right(g);
    GateId x = self(self, a), y = self(self, b);
    GateId r = k == Kind::conj ? mk_and(x, y) : mk_or(x, y);
    memo.emplace(g, r);
    return r;
  };
  return rec(rec, root);
}

std::pair<GateId, GateId> DnnfManager::oriented(GateId g) const {
  const GateId a = left(g), b = right(g);
  const int s = vnode(g);
  if (vnode(a) >= 0 && vtree_.within(vnode(a), vtree_.node(s).left)) return {a, b};
  return {b, a};
}

GateId DnnfManager::conjoin(GateId a, GateId b) {
  if (a == kGateFalse || b == kGateFalse) return kGateFalse;
  if (a == kGateTrue) return b;
  if (b == kGateTrue || a == b) return a;
  if (a > b) std::swap(a, b);
  const std::uint64_t key = (std::uint64_t(a) << 32) | b;
  if (auto it = conjoin_cache_.find(key); it != conjoin_cache_.end()) return it->second;
  GateId r;
  if (kind(a) == Kind::disj) {
    r = mk_or(conjoin(left(a), b), conjoin(right(a), b));
  } else if (kind(b) == Kind::disj) {
    r = mk_or(conjoin(a, left(b)), conjoin(a, right(b)));
  } else {
    const int va = vnode(a), vb = vnode(b);
    if (va == vb) {
      if (kind(a) == Kind::literal) {
        r = kGateFalse;  // complementary literals; equal ones returned above
      } else {
        auto [al, ar] = oriented(a);
        auto [bl, br] = oriented(b);
        r = mk_and(conjoin(al, bl), conjoin(ar, br));
      }
    } else if (vtree_.within(vb, va)) {
      auto [al, ar] = oriented(a);
      if (vtree_.within(vb, vtree_.node(va).left)) r = mk_and(conjoin(al, b), ar);
      else r = mk_and(al, conjoin(ar, b));
    } else if (vtree_.within(va, vb)) {
      auto [bl, br] = oriented(b);
      if (vtree_.within(va, vtree_.node(vb).left)) r = mk_and(conjoin(a, bl), br);
      else r = mk_and(bl, conjoin(a, br));
    } else {
      r = mk_and(a, b);
    }
  }
  conjoin_cache_.emplace(key, r);
  return r;
}

GateId DnnfManager::compact(GateId a) {
  std::unordered_map<GateId, SddId> memo;
  auto rec = [&](auto&& self, GateId g) -> SddId {
    if (g == kGateFalse) return kSddFalse;
    if (g == kGateTrue) return kSddTrue;
    if (auto it = memo.find(g); it != memo.end()) return it->second;
    SddId r;
    switch (kind(g)) {
      case Kind::literal: r = sdd_->literal(lit(g)); break;
      case Kind::conj: r = sdd_->conjoin(self(self, left(g)), self(self, right(g))); break;
      default: r = sdd_->disjoin(self(self, left(g)), self(self, right(g))); break;
    }
    memo.emplace(g, r);
    return r;
  };
  return from_sdd(*sdd_, rec(rec, a));
}

GateId DnnfManager::restrict(GateId a, const PartialAssignment& assignment) {
  std::unordered_map<GateId, GateId> memo;
  auto rec = [&](auto&& self, GateId g) -> GateId {
    if (g <= kGateTrue) return g;
    if (auto it = memo.find(g); it != memo.end()) return it->second;
    GateId r;
    switch (kind(g)) {
      case Kind::literal:
        r = !assignment.contains(lit(g).var()) ? g
            : lit(g).satisfied_by(assignment.value(lit(g).var())) ? kGateTrue
                                                                  : kGateFalse;
        break;
      case Kind::conj: r = mk_and(self(self, left(g)), self(self, right(g))); break;
      default: r = mk_or(self(self, left(g)), self(self, right(g))); break;
    }
    memo.emplace(g, r);
    return r;
  };
  return rec(rec, a);
}

BigCount DnnfManager::count(GateId a) {
  auto rec = [&](auto&& self, GateId g) -> BigCount {
    if (g == kGateFalse) return 0;
    if (g == kGateTrue) return 1;
    if (auto it = count_cache_.find(g); it != count_cache_.end()) return it->second;
    BigCount c;
    if (kind(g) == Kind::literal) {
      c = 1;
    } else if (kind(g) == Kind::conj) {
      c = self(self, left(g)) * self(self, right(g));
    } else {
      const std::size_t n = vars(g).count();
      c = (self(self, left(g)) << (n - vars(left(g)).count())) +
          (self(self, right(g)) << (n - vars(right(g)).count()));
    }
    count_cache_.emplace(g, c);
    return c;
  };
  return rec(rec, a) << (vtree_.n_leaves() - vars(a).count());
}

BigCount DnnfManager::count(GateId a, const std::vector<VarId>& over) {
  std::set<VarId> u(over.begin(), over.end());
  for (std::size_t v = vars(a).find_first(); v != VarSet::npos; v = vars(a).find_next(v))
    if (!u.count(static_cast<VarId>(v)))
      throw std::invalid_argument("count: circuit mentions variable " + std::to_string(v) +
                                  " outside the counting set");
  std::size_t missing = 0, extra = 0;
  for (VarId v : vtree_.leaves())
    if (!u.count(v)) ++missing;
  for (VarId v : u)
    if (!vtree_.contains(v)) ++extra;
  return (count(a) >> missing) << extra;
}

bool DnnfManager::is_unsat(GateId a) {
  auto rec = [&](auto&& self, GateId g) -> bool {
    if (g <= kGateTrue) return g == kGateTrue;
    if (auto it = sat_cache_.find(g); it != sat_cache_.end()) return it->second;
    bool s;
    switch (kind(g)) {
      case Kind::literal: s = true; break;
      case Kind::conj: s = self(self, left(g)) && self(self, right(g)); break;
      default: s = self(self, left(g)) || self(self, right(g)); break;
    }
    sat_cache_.emplace(g, s);
    return s;
  };
  return !rec(rec, a);
}

bool DnnfManager::clausal_entails(GateId a, const Clause& c) {
  return is_unsat(restrict(a, PartialAssignment::falsifying(c)));
}

bool DnnfManager::implies(GateId a, GateId b) { return count(conjoin(a, b)) == count(a); }

bool DnnfManager::equiv(GateId a, GateId b) {
  BigCount ca = count(a);
  return ca == count(b) && count(conjoin(a, b)) == ca;
}

bool DnnfManager::join_check(GateId a, GateId b, GateId c) { return equiv(conjoin(a, b), c); }

std::string DnnfManager::validate_structured(GateId a, bool smooth) const {
  std::vector<GateId> order = reachable(a);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const GateId g = order[i];
    const std::string where = "gate " + std::to_string(i) + ": ";
    if (kind(g) == Kind::conj) {
      const GateId x = left(g), y = right(g);
      if (vars(x).intersects(vars(y))) return where + "and-gate not decomposable";
      if (x <= kGateTrue || y <= kGateTrue) continue;
      const int s = vtree_.lca(vnode(x), vnode(y));
      if (vtree_.is_leaf(s)) return where + "and-gate not decomposable";
      const int sl = vtree_.node(s).left, sr = vtree_.node(s).right;
      const bool split = (vtree_.within(vnode(x), sl) && vtree_.within(vnode(y), sr)) ||
                         (vtree_.within(vnode(y), sl) && vtree_.within(vnode(x), sr));
      if (!split) return where + "and-children not split by a vtree node";
    } else if (kind(g) == Kind::disj && smooth) {
      const GateId x = left(g), y = right(g);
      if (x > kGateTrue && y > kGateTrue && vars(x) != vars(y))
        return where + "or-children variable sets differ";
    }
  }
  return {};
}

std::string DnnfManager::validate_deterministic(GateId a, std::size_t product_cap) {
  std::vector<GateId> order = reachable(a);
  const std::size_t start = gates_.size();
  for (std::size_t i = 0; i < order.size(); ++i) {
    const GateId g = order[i];
    if (kind(g) != Kind::disj) continue;
    GateId both = conjoin(left(g), right(g));
    if (gates_.size() - start > product_cap)
      throw ResourceLimit("determinism check exceeded " + std::to_string(product_cap) + " product gates");
    if (!is_unsat(both)) return "gate " + std::to_string(i) + ": or-gate not deterministic";
  }
  return {};
}

std::vector<GateId> DnnfManager::reachable(GateId a) const {
  std::vector<GateId> out;
  std::set<GateId> seen;
  auto rec = [&](auto&& self, GateId g) -> void {
    if (!seen.insert(g).second) return;
    if (kind(g) == Kind::conj || kind(g) == Kind::disj) {
      self(self, left(g));
      self(self, right(g));
    }
    out.push_back(g);
  };
  rec(rec, a);
  return out;
}

std::size_t DnnfManager::size(GateId a) const { return reachable(a).size(); }

bool DnnfManager::evaluate(GateId a, const std::vector<bool>& bits) const {
  switch (kind(a)) {
    case Kind::constant: return a == kGateTrue;
    case Kind::literal: return lit(a).satisfied_by(bits.at(lit(a).var() - 1));
    case Kind::conj: return evaluate(left(a), bits) && evaluate(right(a), bits);
    default: return evaluate(left(a), bits) || evaluate(right(a), bits);
  }
}

std::vector<std::string> DnnfManager::serialize(GateId a) const {
  std::vector<std::string> out;
  std::unordered_map<GateId, std::size_t> local;
  for (GateId g : reachable(a)) {
    const std::size_t id = local.size();
    local.emplace(g, id);
    std::string rec = "g " + std::to_string(id) + " ";
    switch (kind(g)) {
      case Kind::constant: rec += g == kGateTrue ? "TRUE" : "FALSE"; break;
      case Kind::literal: rec += "LIT " + std::to_string(lit(g).to_dimacs()); break;
      case Kind::conj:
        rec += "AND " + std::to_string(local.at(left(g))) + " " + std::to_string(local.at(right(g)));
        break;
      default:
        rec += "OR " + std::to_string(local.at(left(g))) + " " + std::to_string(local.at(right(g)));
        break;
    }
    out.push_back(std::move(rec));
  }
  out.push_back("root " + std::to_string(local.at(a)));
  return out;
}

GateId DnnfManager::load(const std::vector<std::string>& records) {
  std::map<std::string, GateId> ids;
  auto ref = [&](const std::string& tok) {
    auto it = ids.find(tok);
    if (it == ids.end()) throw ParseError("circuit: reference to undefined gate " + tok);
    return it->second;
  };
  bool have_root = false;
  GateId root = kGateFalse;
  for (const std::string& rec : records) {
    std::istringstream in(rec);
    std::string tag, id, op;
    in >> tag;
    if (tag.empty()) continue;
    if (tag == "root") {
      if (!(in >> id) || have_root) throw ParseError("circuit: bad root record");
      root = ref(id);
      have_root = true;
      continue;
    }
    if (tag != "g" || !(in >> id >> op)) throw ParseError("circuit: malformed record '" + rec + "'");
    if (ids.count(id)) throw ParseError("circuit: duplicate gate id " + id);
    GateId g;
    if (op == "TRUE") g = kGateTrue;
    else if (op == "FALSE") g = kGateFalse;
    else if (op == "LIT") {
      long v = 0;
      if (!(in >> v) || v == 0) throw ParseError("circuit: bad literal in '" + rec + "'");
      Literal l = Literal::from_dimacs(v);
      if (!vtree_.contains(l.var()))
        throw ParseError("circuit: variable " + std::to_string(l.var()) + " not in vtree");
      g = literal(l);
    } else if (op == "AND" || op == "OR") {
      std::string x, y;
      if (!(in >> x >> y)) throw ParseError("circuit: gate " + id + " needs two inputs");
      g = op == "AND" ? raw_and(ref(x), ref(y)) : raw_or(ref(x), ref(y));
    } else if (op == "NOT") {
      // negation is only allowed directly above a leaf
      std::string x;
      if (!(in >> x)) throw ParseError("circuit: gate " + id + " needs an input");
      GateId c = ref(x);
      if (c <= kGateTrue) g = c == kGateTrue ? kGateFalse : kGateTrue;
      else if (kind(c) == Kind::literal) g = literal(~lit(c));
      else throw ParseError("circuit: negation above a non-leaf gate " + id);
    } else {
      throw ParseError("circuit: unknown gate type '" + op + "'");
    }
    std::string junk;
    if (in >> junk) throw ParseError("circuit: trailing tokens in '" + rec + "'");
    ids.emplace(id, g);
  }
  if (!have_root) throw ParseError("circuit: missing root");
  return root;
}

std::string dnnf_to_text(const DnnfManager& m, GateId a) {
  std::string out = "vtree " + m.vtree().to_string() + "\n";
  for (const std::string& r : m.serialize(a)) out += r + "\n";
  return out;
}

std::pair<std::shared_ptr<DnnfManager>, GateId> dnnf_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> records;
  std::shared_ptr<DnnfManager> m;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    if (line.rfind("vtree", 0) == 0) {
      m = std::make_shared<DnnfManager>(Vtree::parse(line));
      continue;
    }
    records.push_back(line);
  }
  if (!m) throw ParseError("circuit: missing vtree line");
  GateId root = m->load(records);
  return {m, root};
}

}  // namespace kcp
