#include "kcp/obdd.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

namespace kcp {

namespace {
constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

BigCount pow2(std::size_t k) { return BigCount(1) << k; }

NodeId parse_ref(const std::string& tok, const std::map<std::string, NodeId>& ids) {
  if (tok == "T") return kObddTrue;
  if (tok == "F") return kObddFalse;
  auto it = ids.find(tok);
  if (it == ids.end()) throw ParseError("obdd: reference to undefined node " + tok);
  return it->second;
}
}  // namespace

ObddManager::ObddManager(VarOrder order, std::size_t node_limit)
    : order_(std::move(order)), node_limit_(node_limit) {
  VarId max_var = 0;
  for (VarId v : order_.sequence()) max_var = std::max(max_var, v);
  level_.assign(max_var + 1, kAbsent);
  for (std::size_t i = 0; i < order_.size(); ++i) level_[order_[i]] = i;
  nodes_.push_back(Node{0, 0, 0});
  nodes_.push_back(Node{0, 1, 1});
}

std::size_t ObddManager::level_of_var(VarId v) const {
  return v < level_.size() ? level_[v] : kAbsent;
}

std::size_t ObddManager::level(NodeId n) const {
  return is_terminal(n) ? order_.size() : level_[nodes_[n].var];
}

NodeId ObddManager::mk(VarId var, NodeId lo, NodeId hi) {
  if (lo == hi) return lo;
  const std::size_t lv = level_of_var(var);
  if (lv == kAbsent) throw std::invalid_argument("variable " + std::to_string(var) + " not in order");
  if (level(lo) <= lv || level(hi) <= lv)
    throw std::logic_error("obdd: child does not follow parent in the order");
  Node key{var, lo, hi};
  auto it = unique_.find(key);
  if (it != unique_.end()) return it->second;
  if (nodes_.size() >= node_limit_)
    throw ResourceLimit("obdd node limit " + std::to_string(node_limit_) + " reached");
  NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(key);
  unique_.emplace(key, id);
  return id;
}

NodeId ObddManager::literal(Literal l) {
  return l.positive() ? mk(l.var(), kObddFalse, kObddTrue) : mk(l.var(), kObddTrue, kObddFalse);
}

NodeId ObddManager::clause(const Clause& c) {
  NodeId acc = kObddFalse;
  for (Literal l : c) acc = disjoin(acc, literal(l));
  return acc;
}

NodeId ObddManager::term(const PartialAssignment& a) {
  NodeId acc = kObddTrue;
  for (auto [v, b] : a.values()) acc = conjoin(acc, literal(Literal(v, b)));
  return acc;
}

NodeId ObddManager::apply(Op op, NodeId a, NodeId b) {
  if (op == Op::conj) {
    if (a == kObddFalse || b == kObddFalse) return kObddFalse;
    if (a == kObddTrue) return b;
    if (b == kObddTrue || a == b) return a;
  } else {
    if (a == kObddTrue || b == kObddTrue) return kObddTrue;
    if (a == kObddFalse) return b;
    if (b == kObddFalse || a == b) return a;
  }
  if (a > b) std::swap(a, b);
  const std::uint64_t key = (std::uint64_t(op) << 62) | (std::uint64_t(a) << 31) | b;
  if (auto it = apply_cache_.find(key); it != apply_cache_.end()) return it->second;
  const std::size_t la = level(a), lb = level(b);
  const std::size_t top = std::min(la, lb);
  const VarId v = order_[top];
  NodeId a0 = la == top ? lo(a) : a, a1 = la == top ? hi(a) : a;
  NodeId b0 = lb == top ? lo(b) : b, b1 = lb == top ? hi(b) : b;
  NodeId r0 = apply(op, a0, b0);
  NodeId r1 = apply(op, a1, b1);
  NodeId r = mk(v, r0, r1);
  apply_cache_.emplace(key, r);
  return r;
}

NodeId ObddManager::negate(NodeId a) {
  if (a == kObddFalse) return kObddTrue;
  if (a == kObddTrue) return kObddFalse;
  if (auto it = negate_cache_.find(a); it != negate_cache_.end()) return it->second;
  NodeId r = mk(var(a), negate(lo(a)), negate(hi(a)));
  negate_cache_.emplace(a, r);
  return r;
}

NodeId ObddManager::ite(VarId x, NodeId hi_branch, NodeId lo_branch) {
  const std::size_t lx = level_of_var(x);
  if (lx == kAbsent) throw std::invalid_argument("variable " + std::to_string(x) + " not in order");
  if (lx < level(hi_branch) && lx < level(lo_branch)) return mk(x, lo_branch, hi_branch);
  NodeId pos = conjoin(literal(Literal(x, true)), hi_branch);
  NodeId neg = conjoin(literal(Literal(x, false)), lo_branch);
  return disjoin(pos, neg);
}

NodeId ObddManager::restrict(NodeId a, const PartialAssignment& assignment) {
  std::unordered_map<NodeId, NodeId> memo;
  auto rec = [&](auto&& self, NodeId n) -> NodeId {
    if (is_terminal(n)) return n;
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    NodeId r;
    const VarId v = var(n);
    if (assignment.contains(v)) r = self(self, assignment.value(v) ? hi(n) : lo(n));
    else r = mk(v, self(self, lo(n)), self(self, hi(n)));
    memo.emplace(n, r);
    return r;
  };
  return rec(rec, a);
}

BigCount ObddManager::count(NodeId a) {
  auto rec = [&](auto&& self, NodeId n) -> BigCount {
    if (n == kObddFalse) return 0;
    if (n == kObddTrue) return 1;
    if (auto it = count_cache_.find(n); it != count_cache_.end()) return it->second;
    const std::size_t l = level(n);
    BigCount c = self(self, lo(n)) * pow2(level(lo(n)) - l - 1) +
                 self(self, hi(n)) * pow2(level(hi(n)) - l - 1);
    count_cache_.emplace(n, c);
    return c;
  };
  return rec(rec, a) * pow2(level(a));
}

BigCount ObddManager::count(NodeId a, const std::vector<VarId>& over) {
  std::set<VarId> u(over.begin(), over.end());
  std::size_t missing = 0;  // order variables outside `over`
  for (VarId v : order_.sequence())
    if (!u.count(v)) ++missing;
  std::size_t extra = 0;  // `over` variables outside the order
  for (VarId v : u)
    if (level_of_var(v) == kAbsent) ++extra;
  for (NodeId n : reachable(a))
    if (!u.count(var(n)))
      throw std::invalid_argument("count: diagram mentions variable " + std::to_string(var(n)) +
                                  " outside the counting set");
  return (count(a) >> missing) << extra;
}

std::vector<NodeId> ObddManager::reachable(NodeId a) const {
  std::vector<NodeId> out;
  std::set<NodeId> seen;
  auto rec = [&](auto&& self, NodeId n) -> void {
    if (is_terminal(n) || !seen.insert(n).second) return;
    self(self, lo(n));
    self(self, hi(n));
    out.push_back(n);
  };
  rec(rec, a);
  return out;
}

std::size_t ObddManager::size(NodeId a) const { return reachable(a).size(); }

bool ObddManager::evaluate(NodeId a, const std::vector<bool>& bits) const {
  while (!is_terminal(a)) a = bits.at(var(a) - 1) ? hi(a) : lo(a);
  return a == kObddTrue;
}

NodeId ObddManager::import(const ObddManager& src, NodeId root) {
  std::unordered_map<NodeId, NodeId> memo;
  auto rec = [&](auto&& self, NodeId n) -> NodeId {
    if (src.is_terminal(n)) return n;
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    NodeId l = self(self, src.lo(n));
    NodeId h = self(self, src.hi(n));
    NodeId r = ite(src.var(n), h, l);
    memo.emplace(n, r);
    return r;
  };
  return rec(rec, root);
}

std::vector<std::string> ObddManager::serialize(NodeId a) const {
  std::vector<std::string> out;
  std::unordered_map<NodeId, std::size_t> local;
  auto name = [&](NodeId n) -> std::string {
    if (n == kObddTrue) return "T";
    if (n == kObddFalse) return "F";
    return std::to_string(local.at(n));
  };
  for (NodeId n : reachable(a)) {
    local.emplace(n, local.size() + 2);
    out.push_back("n " + std::to_string(local[n]) + " " + std::to_string(var(n)) + " " +
                  name(lo(n)) + " " + name(hi(n)));
  }
  out.push_back("root " + name(a));
  return out;
}

NodeId ObddManager::load(const std::vector<std::string>& records) {
  std::map<std::string, NodeId> ids;
  std::set<NodeId> built;
  bool have_root = false;
  NodeId root = kObddFalse;
  for (const std::string& rec : records) {
    std::istringstream in(rec);
    std::string tag;
    in >> tag;
    if (tag == "n") {
      std::string id, lo_tok, hi_tok;
      long v = 0;
      if (!(in >> id >> v >> lo_tok >> hi_tok)) throw ParseError("obdd: malformed node record '" + rec + "'");
      if (id == "T" || id == "F" || ids.count(id)) throw ParseError("obdd: duplicate node id " + id);
      if (v <= 0 || level_of_var(static_cast<VarId>(v)) == kAbsent)
        throw ParseError("obdd: variable " + std::to_string(v) + " not in order");
      NodeId l = parse_ref(lo_tok, ids), h = parse_ref(hi_tok, ids);
      if (l == h) throw ParseError("obdd: node " + id + " is redundant (lo = hi)");
      const std::size_t lv = level_of_var(static_cast<VarId>(v));
      if (level(l) <= lv || level(h) <= lv) throw ParseError("obdd: node " + id + " violates the order");
      NodeId n = mk(static_cast<VarId>(v), l, h);
      if (!built.insert(n).second) throw ParseError("obdd: node " + id + " duplicates another node");
      ids.emplace(id, n);
    } else if (tag == "root") {
      std::string r;
      if (!(in >> r) || have_root) throw ParseError("obdd: bad root record");
      root = parse_ref(r, ids);
      have_root = true;
    } else if (!tag.empty()) {
      throw ParseError("obdd: unknown record '" + rec + "'");
    }
  }
  if (!have_root) throw ParseError("obdd: missing root");
  return root;
}

std::string ObddManager::validate() const {
  for (NodeId n = 2; n < nodes_.size(); ++n) {
    if (lo(n) == hi(n)) return "node " + std::to_string(n) + " has lo = hi";
    if (level(lo(n)) <= level(n) || level(hi(n)) <= level(n))
      return "node " + std::to_string(n) + " violates the order";
    auto it = unique_.find(nodes_[n]);
    if (it == unique_.end() || it->second != n) return "node " + std::to_string(n) + " is not unique";
  }
  return {};
}

std::shared_ptr<ObddManager> ObddRegistry::manager(const VarOrder& o) {
  auto it = managers_.find(o);
  if (it != managers_.end()) return it->second;
  auto m = std::make_shared<ObddManager>(o, node_limit_);
  managers_.emplace(o, m);
  return m;
}

// ---- handle-level operations ----

namespace {
void same_manager(const Obdd& a, const Obdd& b) {
  if (a.mgr != b.mgr) throw std::invalid_argument("obdd operands use different orders/stores");
}
}  // namespace

Obdd obdd_from_clause(const Clause& c, const std::shared_ptr<ObddManager>& mgr) {
  return {mgr, mgr->clause(c)};
}
Obdd obdd_and(const Obdd& a, const Obdd& b) {
  same_manager(a, b);
  return {a.mgr, a.mgr->conjoin(a.root, b.root)};
}
Obdd obdd_or(const Obdd& a, const Obdd& b) {
  same_manager(a, b);
  return {a.mgr, a.mgr->disjoin(a.root, b.root)};
}
Obdd obdd_negate(const Obdd& a) { return {a.mgr, a.mgr->negate(a.root)}; }
Obdd obdd_restrict(const Obdd& a, const PartialAssignment& assignment) {
  return {a.mgr, a.mgr->restrict(a.root, assignment)};
}
BigCount obdd_count(const Obdd& a, const std::vector<VarId>& over) { return a.mgr->count(a.root, over); }
bool obdd_entails(const Obdd& a, const Obdd& b) {
  same_manager(a, b);
  return a.mgr->entails(a.root, b.root);
}
bool obdd_is_unsat(const Obdd& a) { return a.root == kObddFalse; }
bool obdd_equal(const Obdd& a, const Obdd& b) {
  same_manager(a, b);
  return a.root == b.root;
}

Obdd obdd_move_var(const Obdd& d, VarId x, std::size_t pos, ObddRegistry& registry) {
  VarOrder target = single_variable_move(d.order(), x, pos);
  auto dst = registry.manager(target);
  if (dst == d.mgr) return d;
  NodeId r0 = d.mgr->restrict(d.root, {{x, false}});
  NodeId r1 = d.mgr->restrict(d.root, {{x, true}});
  NodeId n0 = dst->import(*d.mgr, r0);
  NodeId n1 = dst->import(*d.mgr, r1);
  return {dst, dst->ite(x, n1, n0)};
}

VarId moved_variable(const VarOrder& a, const VarOrder& b) {
  if (a == b) return 0;
  std::vector<VarId> sa = a.sequence(), sb = b.sequence();
  if (sa.size() != sb.size()) throw std::invalid_argument("orders over different variable sets");
  for (VarId cand : sa) {
    auto drop = [cand](std::vector<VarId> s) {
      s.erase(std::remove(s.begin(), s.end(), cand), s.end());
      return s;
    };
    if (drop(sa) == drop(sb) && b.contains(cand)) return cand;
  }
  throw std::invalid_argument("orders differ by more than one variable relocation");
}

bool obdd_check_move(const Obdd& d, const Obdd& e, VarId x) {
  auto strip = [x](const VarOrder& o) {
    std::vector<VarId> s = o.sequence();
    s.erase(std::remove(s.begin(), s.end(), x), s.end());
    return s;
  };
  if (!d.order().contains(x) || !e.order().contains(x) || strip(d.order()) != strip(e.order()))
    throw std::invalid_argument("orders differ in more than the position of x");
  for (bool b : {false, true}) {
    NodeId dr = d.mgr->restrict(d.root, {{x, b}});
    NodeId er = e.mgr->restrict(e.root, {{x, b}});
    // x is gone from both cofactors, so the remaining orders agree and
    // import reduces to plain node copying.
    if (d.mgr->import(*e.mgr, er) != dr) return false;
  }
  return true;
}

std::vector<Obdd> obdd_reorder_chain(const Obdd& d, const VarOrder& target, ObddRegistry& registry) {
  if (std::set<VarId>(d.order().sequence().begin(), d.order().sequence().end()) !=
      std::set<VarId>(target.sequence().begin(), target.sequence().end()))
    throw std::invalid_argument("reorder target is over a different variable set");
  std::vector<Obdd> chain;
  Obdd cur = d;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (cur.order()[i] == target[i]) continue;
    cur = obdd_move_var(cur, target[i], i, registry);
    chain.push_back(cur);
  }
  return chain;
}

std::string obdd_to_text(const Obdd& d) {
  std::string out = "o " + d.order().to_string() + "\n";
  for (const std::string& r : d.mgr->serialize(d.root)) out += r + "\n";
  return out;
}

Obdd obdd_from_text(const std::string& text, ObddRegistry& registry) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> records;
  std::optional<VarOrder> order;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 'o' && (line.size() == 1 || line[1] == ' ')) {
      order = VarOrder::parse(line.substr(1));
      continue;
    }
    records.push_back(line);
  }
  if (!order) throw ParseError("obdd: missing order line");
  auto mgr = registry.manager(*order);
  return {mgr, mgr->load(records)};
}

}  // namespace kcp
