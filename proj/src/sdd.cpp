#include "kcp/sdd.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace kcp {

std::size_t SddManager::KeyHash::operator()(const std::pair<int, std::vector<Element>>& k) const {
  std::size_t h = static_cast<std::size_t>(k.first) * 0x9E3779B97F4A7C15ull;
  for (auto [p, s] : k.second) {
    h ^= (std::size_t{p} << 32 | s) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  }
  return h;
}

SddManager::SddManager(Vtree vtree, std::size_t node_limit)
    : vtree_(std::move(vtree)), node_limit_(node_limit) {
  nodes_.push_back(Node{Kind::constant, -1, Literal(), {}});
  nodes_.push_back(Node{Kind::constant, -1, Literal(), {}});
}

SddId SddManager::literal(Literal l) {
  int leaf = vtree_.leaf_of(l.var());
  if (leaf < 0) throw std::invalid_argument("variable " + std::to_string(l.var()) + " not in vtree");
  if (auto it = literals_.find(l.to_dimacs()); it != literals_.end()) return it->second;
  SddId id = static_cast<SddId>(nodes_.size());
  nodes_.push_back(Node{Kind::literal, leaf, l, {}});
  literals_.emplace(l.to_dimacs(), id);
  return id;
}

SddId SddManager::clause(const Clause& c) {
  SddId acc = kSddFalse;
  for (Literal l : c) acc = disjoin(acc, literal(l));
  return acc;
}

SddId SddManager::term(const PartialAssignment& a) {
  SddId acc = kSddTrue;
  for (auto [v, b] : a.values()) acc = conjoin(acc, literal(Literal(v, b)));
  return acc;
}

std::vector<SddManager::Element> SddManager::lift(SddId a, int v) {
  if (vtree_.within(vnode(a), vtree_.node(v).left)) return {{a, kSddTrue}, {negate(a), kSddFalse}};
  return {{kSddTrue, a}};
}

SddId SddManager::apply(Op op, SddId a, SddId b) {
  const SddId absorbing = op == Op::conj ? kSddFalse : kSddTrue;
  const SddId neutral = op == Op::conj ? kSddTrue : kSddFalse;
  if (a == absorbing || b == absorbing) return absorbing;
  if (a == neutral) return b;
  if (b == neutral || a == b) return a;
  if (a > b) std::swap(a, b);
  const std::uint64_t key = (std::uint64_t(op) << 62) | (std::uint64_t(a) << 31) | b;
  if (auto it = apply_cache_.find(key); it != apply_cache_.end()) return it->second;

  const int va = vnode(a), vb = vnode(b);
  SddId result;
  if (va == vb && kind(a) == Kind::literal) {
    result = absorbing;  // x and not-x
  } else {
    int v;
    std::vector<Element> ea, eb;
    if (va == vb) {
      v = va;
      ea = elements(a);
      eb = elements(b);
    } else if (vtree_.within(vb, va)) {
      v = va;
      ea = elements(a);
      eb = lift(b, v);
    } else if (vtree_.within(va, vb)) {
      v = vb;
      ea = lift(a, v);
      eb = elements(b);
    } else {
      v = vtree_.lca(va, vb);
      ea = lift(a, v);
      eb = lift(b, v);
    }
    std::vector<Element> out;
    for (auto [p1, s1] : ea) {
      for (auto [p2, s2] : eb) {
        SddId p = conjoin(p1, p2);
        if (p == kSddFalse) continue;
        out.emplace_back(p, apply(op, s1, s2));
      }
    }
    result = make_decision(v, std::move(out));
  }
  apply_cache_.emplace(key, result);
  return result;
}

SddId SddManager::make_decision(int v, std::vector<Element> elems) {
  // compress: one element per distinct sub
  std::map<SddId, SddId> by_sub;
  std::vector<SddId> sub_order;
  for (auto [p, s] : elems) {
    if (p == kSddFalse) continue;
    auto it = by_sub.find(s);
    if (it == by_sub.end()) {
      by_sub.emplace(s, p);
      sub_order.push_back(s);
    } else {
      it->second = disjoin(it->second, p);
    }
  }
  std::vector<Element> out;
  for (SddId s : sub_order) out.emplace_back(by_sub[s], s);
  // trim
  if (out.empty()) return kSddFalse;
  if (out.size() == 1) return out[0].second;
  if (out.size() == 2) {
    if (out[0].second == kSddTrue && out[1].second == kSddFalse) return out[0].first;
    if (out[1].second == kSddTrue && out[0].second == kSddFalse) return out[1].first;
  }
  return intern(v, std::move(out));
}

SddId SddManager::intern(int v, std::vector<Element> elems) {
  std::sort(elems.begin(), elems.end());
  auto key = std::make_pair(v, std::move(elems));
  if (auto it = unique_.find(key); it != unique_.end()) return it->second;
  if (nodes_.size() >= node_limit_)
    throw ResourceLimit("sdd node limit " + std::to_string(node_limit_) + " reached");
  SddId id = static_cast<SddId>(nodes_.size());
  nodes_.push_back(Node{Kind::decision, v, Literal(), key.second});
  unique_.emplace(std::move(key), id);
  return id;
}

SddId SddManager::negate(SddId a) {
  if (a == kSddFalse) return kSddTrue;
  if (a == kSddTrue) return kSddFalse;
  if (kind(a) == Kind::literal) return literal(~lit(a));
  if (auto it = negate_cache_.find(a); it != negate_cache_.end()) return it->second;
  std::vector<Element> out;
  for (auto [p, s] : elements(a)) out.emplace_back(p, negate(s));
  SddId r = make_decision(vnode(a), std::move(out));
  negate_cache_.emplace(a, r);
  return r;
}

SddId SddManager::restrict(SddId a, const PartialAssignment& assignment) {
  // prefix sums over in-order leaf positions tell whether a subtree is touched
  std::vector<std::size_t> touched(vtree_.n_leaves() + 1, 0);
  for (std::size_t i = 0; i < vtree_.n_leaves(); ++i)
    touched[i + 1] = touched[i] + (assignment.contains(vtree_.leaves()[i]) ? 1 : 0);
  auto hit = [&](int v) {
    return touched[vtree_.last_leaf(v) + 1] - touched[vtree_.first_leaf(v)] > 0;
  };
  std::unordered_map<SddId, SddId> memo;
  auto rec = [&](auto&& self, SddId n) -> SddId {
    if (is_constant(n) || !hit(vnode(n))) return n;
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    SddId r;
    if (kind(n) == Kind::literal) {
      r = lit(n).satisfied_by(assignment.value(lit(n).var())) ? kSddTrue : kSddFalse;
    } else {
      r = kSddFalse;
      for (auto [p, s] : elements(n)) r = disjoin(r, conjoin(self(self, p), self(self, s)));
    }
    memo.emplace(n, r);
    return r;
  };
  return rec(rec, a);
}

BigCount SddManager::scaled(SddId a, std::size_t n_vars) {
  if (a == kSddFalse) return 0;
  BigCount base;
  if (a == kSddTrue) {
    base = 1;
  } else if (auto it = count_cache_.find(a); it != count_cache_.end()) {
    base = it->second;
  } else if (kind(a) == Kind::literal) {
    base = 1;
  } else {
    const int v = vnode(a);
    const std::size_t nl = vars_at(vtree_.node(v).left), nr = vars_at(vtree_.node(v).right);
    base = 0;
    for (auto [p, s] : elements(a)) base += scaled(p, nl) * scaled(s, nr);
    count_cache_.emplace(a, base);
  }
  return base << (n_vars - vars_at(vnode(a)));
}

BigCount SddManager::count(SddId a) { return scaled(a, vtree_.n_leaves()); }

BigCount SddManager::count(SddId a, const std::vector<VarId>& over) {
  std::set<VarId> u(over.begin(), over.end());
  for (VarId v : mentioned_vars(a))
    if (!u.count(v))
      throw std::invalid_argument("count: diagram mentions variable " + std::to_string(v) +
                                  " outside the counting set");
  std::size_t missing = 0, extra = 0;
  for (VarId v : vtree_.leaves())
    if (!u.count(v)) ++missing;
  for (VarId v : u)
    if (!vtree_.contains(v)) ++extra;
  return (count(a) >> missing) << extra;
}

bool SddManager::equivalent(SddId a, SddId b) {
  BigCount ca = count(a), cb = count(b);
  return ca == cb && count(conjoin(a, b)) == ca;
}

bool SddManager::entails(SddId a, SddId b) { return count(conjoin(a, b)) == count(a); }

std::vector<SddId> SddManager::reachable(SddId a) const {
  std::vector<SddId> out;
  std::set<SddId> seen;
  auto rec = [&](auto&& self, SddId n) -> void {
    if (!seen.insert(n).second) return;
    if (kind(n) == Kind::decision)
      for (auto [p, s] : elements(n)) {
        self(self, p);
        self(self, s);
      }
    out.push_back(n);
  };
  rec(rec, a);
  return out;
}

std::size_t SddManager::size(SddId a) const {
  std::size_t total = 0;
  for (SddId n : reachable(a)) {
    if (kind(n) == Kind::literal) total += 1;
    else if (kind(n) == Kind::decision) total += 1 + elements(n).size();
  }
  return total;
}

std::vector<VarId> SddManager::mentioned_vars(SddId a) const {
  std::set<VarId> vars;
  for (SddId n : reachable(a))
    if (kind(n) == Kind::literal) vars.insert(lit(n).var());
  return {vars.begin(), vars.end()};
}

bool SddManager::evaluate(SddId a, const std::vector<bool>& bits) const {
  if (a == kSddTrue) return true;
  if (a == kSddFalse) return false;
  if (kind(a) == Kind::literal) return lit(a).satisfied_by(bits.at(lit(a).var() - 1));
  for (auto [p, s] : elements(a))
    if (evaluate(p, bits)) return evaluate(s, bits);
  return false;
}

SddId SddManager::import(const SddManager& src, SddId root) {
  std::unordered_map<SddId, SddId> memo;
  auto rec = [&](auto&& self, SddId n) -> SddId {
    if (src.is_constant(n)) return n;
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    SddId r;
    if (src.kind(n) == Kind::literal) {
      r = literal(src.lit(n));
    } else {
      r = kSddFalse;
      for (auto [p, s] : src.elements(n)) r = disjoin(r, conjoin(self(self, p), self(self, s)));
    }
    memo.emplace(n, r);
    return r;
  };
  return rec(rec, root);
}

std::vector<std::string> SddManager::serialize(SddId a) const {
  std::vector<std::string> out;
  std::unordered_map<SddId, std::size_t> local;
  for (SddId n : reachable(a)) {
    std::size_t id = local.size();
    local.emplace(n, id);
    std::string rec;
    if (n == kSddTrue) rec = "a " + std::to_string(id) + " true";
    else if (n == kSddFalse) rec = "a " + std::to_string(id) + " false";
    else if (kind(n) == Kind::literal)
      rec = "a " + std::to_string(id) + " lit " + std::to_string(lit(n).to_dimacs());
    else {
      rec = "s " + std::to_string(id) + " " + vtree_.path_of(vnode(n)).to_string() + " ";
      for (auto [p, s] : elements(n))
        rec += "(" + std::to_string(local.at(p)) + " " + std::to_string(local.at(s)) + ")";
    }
    out.push_back(std::move(rec));
  }
  out.push_back("root " + std::to_string(local.at(a)));
  return out;
}

std::string SddManager::check_decision(int v, const std::vector<Element>& elems) {
  if (v < 0 || vtree_.is_leaf(v)) return "decision node bound to a leaf";
  const int vl = vtree_.node(v).left, vr = vtree_.node(v).right;
  if (elems.size() < 2) return "decision node is not trimmed (single element)";
  std::set<SddId> subs;
  for (auto [p, s] : elems) {
    if (p == kSddFalse) return "false prime";
    if (!is_constant(p) && !vtree_.within(vnode(p), vl)) return "prime outside the left subtree";
    if (!is_constant(s) && !vtree_.within(vnode(s), vr)) return "sub outside the right subtree";
    if (!subs.insert(s).second) return "decision node is not compressed (repeated sub)";
  }
  if (elems.size() == 2 && subs.count(kSddTrue) && subs.count(kSddFalse))
    return "decision node is not trimmed ({(p,T),(~p,F)})";
  const std::size_t nl = vars_at(vl);
  BigCount total = 0;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    total += scaled(elems[i].first, nl);
    for (std::size_t j = i + 1; j < elems.size(); ++j)
      if (conjoin(elems[i].first, elems[j].first) != kSddFalse) return "primes overlap";
  }
  if (total != (BigCount(1) << nl)) return "primes do not cover the left variables";
  return {};
}

SddId SddManager::load(const std::vector<std::string>& records) {
  std::map<std::string, SddId> ids;
  auto ref = [&](const std::string& tok) {
    auto it = ids.find(tok);
    if (it == ids.end()) throw ParseError("sdd: reference to undefined node " + tok);
    return it->second;
  };
  bool have_root = false;
  SddId root = kSddFalse;
  for (const std::string& rec : records) {
    std::istringstream in(rec);
    std::string tag, id;
    in >> tag;
    if (tag.empty()) continue;
    if (tag == "root") {
      if (!(in >> id) || have_root) throw ParseError("sdd: bad root record");
      root = ref(id);
      have_root = true;
      continue;
    }
    if (!(in >> id)) throw ParseError("sdd: malformed record '" + rec + "'");
    if (ids.count(id)) throw ParseError("sdd: duplicate id " + id);
    if (tag == "a") {
      std::string what;
      in >> what;
      if (what == "true") ids.emplace(id, kSddTrue);
      else if (what == "false") ids.emplace(id, kSddFalse);
      else if (what == "lit") {
        long v = 0;
        if (!(in >> v) || v == 0) throw ParseError("sdd: bad literal in '" + rec + "'");
        Literal l = Literal::from_dimacs(v);
        if (!vtree_.contains(l.var())) throw ParseError("sdd: variable " + std::to_string(l.var()) + " not in vtree");
        ids.emplace(id, literal(l));
      } else {
        throw ParseError("sdd: bad atom '" + rec + "'");
      }
    } else if (tag == "s") {
      std::string path;
      in >> path;
      int v = vtree_.at(VtreePath::parse(path));
      if (v < 0) throw ParseError("sdd: path " + path + " not in vtree");
      std::string rest;
      std::getline(in, rest);
      std::vector<Element> elems;
      std::size_t i = 0;
      while (true) {
        i = rest.find('(', i);
        if (i == std::string::npos) break;
        std::size_t j = rest.find(')', i);
        if (j == std::string::npos) throw ParseError("sdd: unclosed element in '" + rec + "'");
        std::istringstream el(rest.substr(i + 1, j - i - 1));
        std::string p, s, junk;
        if (!(el >> p >> s) || (el >> junk)) throw ParseError("sdd: bad element in '" + rec + "'");
        elems.emplace_back(ref(p), ref(s));
        i = j + 1;
      }
      if (std::string why = check_decision(v, elems); !why.empty())
        throw ParseError("sdd: node " + id + ": " + why);
      ids.emplace(id, intern(v, std::move(elems)));
    } else {
      throw ParseError("sdd: unknown record '" + rec + "'");
    }
  }
  if (!have_root) throw ParseError("sdd: missing root");
  return root;
}

std::string sdd_to_text(SddManager& m, SddId a) {
  std::string out = "vtree " + m.vtree().to_string() + "\n";
  for (const std::string& r : m.serialize(a)) out += r + "\n";
  return out;
}

std::pair<std::shared_ptr<SddManager>, SddId> sdd_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> records;
  std::shared_ptr<SddManager> m;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    if (line.rfind("vtree", 0) == 0) {
      m = std::make_shared<SddManager>(Vtree::parse(line));
      continue;
    }
    records.push_back(line);
  }
  if (!m) throw ParseError("sdd: missing vtree line");
  SddId root = m->load(records);
  return {m, root};
}

}  // namespace kcp
