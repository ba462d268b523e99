#include "kcp/structure.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

namespace kcp {

VarOrder::VarOrder(std::vector<VarId> sequence) : seq_(std::move(sequence)) {
  std::set<VarId> seen;
  for (VarId v : seq_) {
    if (v == 0) throw std::invalid_argument("order contains variable 0");
    if (!seen.insert(v).second)
      throw std::invalid_argument("order repeats variable " + std::to_string(v));
  }
}

VarOrder VarOrder::identity(std::size_t n) {
  std::vector<VarId> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<VarId>(i + 1);
  return VarOrder(std::move(s));
}

VarOrder VarOrder::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<VarId> s;
  std::string tok;
  while (in >> tok) {
    if (tok[0] == 'x') tok.erase(0, 1);
    try {
      long v = std::stol(tok);
      if (v <= 0) throw std::invalid_argument("");
      s.push_back(static_cast<VarId>(v));
    } catch (const std::exception&) {
      throw ParseError("bad variable in order: '" + tok + "'");
    }
  }
  try {
    return VarOrder(std::move(s));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

bool VarOrder::contains(VarId v) const { return position(v) < seq_.size(); }

std::size_t VarOrder::position(VarId v) const {
  auto it = std::find(seq_.begin(), seq_.end(), v);
  return static_cast<std::size_t>(it - seq_.begin());
}

std::string VarOrder::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < seq_.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(seq_[i]);
  }
  return out;
}

VtreePath VtreePath::parse(std::string_view text) {
  VtreePath p;
  if (text == ".") return p;
  for (char c : text) {
    if (c != 'l' && c != 'r') throw ParseError("bad vtree path '" + std::string(text) + "'");
    p.steps += c;
  }
  return p;
}

// ---- Vtree ----

Vtree Vtree::leaf(VarId v) {
  Vtree t;
  t.nodes_.push_back(Node{-1, -1, -1, v});
  t.root_ = 0;
  t.index();
  return t;
}

int Vtree::copy_from(const Vtree& other, int n) {
  const Node& src = other.node(n);
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{-1, -1, -1, src.var});
  if (src.left >= 0) {
    int l = copy_from(other, src.left);
    int r = copy_from(other, src.right);
    nodes_[id].left = l;
    nodes_[id].right = r;
    nodes_[l].parent = id;
    nodes_[r].parent = id;
  }
  return id;
}

Vtree Vtree::join(const Vtree& l, const Vtree& r) {
  Vtree t;
  t.nodes_.push_back(Node{});
  int a = t.copy_from(l, l.root());
  int b = t.copy_from(r, r.root());
  t.nodes_[0].left = a;
  t.nodes_[0].right = b;
  t.nodes_[a].parent = 0;
  t.nodes_[b].parent = 0;
  t.root_ = 0;
  t.index();
  return t;
}

Vtree Vtree::from_nodes(std::vector<Node> nodes, int root) {
  Vtree t;
  t.nodes_ = std::move(nodes);
  t.root_ = root;
  // Indexing assumes a full binary tree; malformed input is left unindexed
  // so validate_vtree can still inspect it.
  bool full = root >= 0 && static_cast<std::size_t>(root) < t.nodes_.size();
  for (const Node& n : t.nodes_) {
    if ((n.left < 0) != (n.right < 0)) full = false;
    if (n.left >= static_cast<int>(t.nodes_.size()) || n.right >= static_cast<int>(t.nodes_.size()))
      full = false;
  }
  if (full) t.index();
  return t;
}

void Vtree::index() {
  leaf_order_.clear();
  span_.assign(nodes_.size(), {0, 0});
  depth_.assign(nodes_.size(), 0);
  VarId max_var = 0;
  for (const Node& n : nodes_)
    if (n.left < 0) max_var = std::max(max_var, n.var);
  leaf_by_var_.assign(max_var + 1, -1);
  // iterative in-order walk
  std::vector<std::pair<int, int>> stack{{root_, 0}};
  std::vector<char> visited(nodes_.size(), 0);
  while (!stack.empty()) {
    auto& [n, state] = stack.back();
    if (visited[n] && state == 0) throw std::invalid_argument("vtree has a cycle or shared node");
    visited[n] = 1;
    const Node& nd = nodes_[n];
    if (nd.left < 0) {
      std::size_t p = leaf_order_.size();
      leaf_order_.push_back(nd.var);
      if (nd.var < leaf_by_var_.size()) leaf_by_var_[nd.var] = n;
      span_[n] = {p, p};
      stack.pop_back();
      continue;
    }
    if (state == 0) {
      state = 1;
      depth_[nd.left] = depth_[n] + 1;
      stack.push_back({nd.left, 0});
    } else if (state == 1) {
      state = 2;
      depth_[nd.right] = depth_[n] + 1;
      stack.push_back({nd.right, 0});
    } else {
      span_[n] = {span_[nd.left].first, span_[nd.right].second};
      stack.pop_back();
    }
  }
}

Vtree Vtree::parse(std::string_view text) {
  std::string s(text);
  if (s.rfind("vtree", 0) == 0) s.erase(0, 5);
  std::size_t i = 0;
  Vtree t;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  std::function<int()> parse_node = [&]() -> int {
    skip();
    if (i >= s.size()) throw ParseError("unexpected end of vtree");
    if (s[i] == '(') {
      ++i;
      int id = static_cast<int>(t.nodes_.size());
      t.nodes_.push_back(Node{});
      int l = parse_node();
      int r = parse_node();
      skip();
      if (i >= s.size() || s[i] != ')') throw ParseError("vtree: expected ')'");
      ++i;
      t.nodes_[id].left = l;
      t.nodes_[id].right = r;
      t.nodes_[l].parent = id;
      t.nodes_[r].parent = id;
      return id;
    }
    std::size_t j = i;
    if (s[j] == 'x') ++j;
    std::size_t k = j;
    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
    if (k == j) throw ParseError("vtree: expected variable at offset " + std::to_string(i));
    VarId v = static_cast<VarId>(std::stoul(s.substr(j, k - j)));
    if (v == 0) throw ParseError("vtree: variable 0");
    i = k;
    t.nodes_.push_back(Node{-1, -1, -1, v});
    return static_cast<int>(t.nodes_.size() - 1);
  };
  t.root_ = parse_node();
  skip();
  if (i != s.size()) throw ParseError("vtree: trailing input");
  t.index();
  std::set<VarId> seen;
  for (VarId v : t.leaf_order_)
    if (!seen.insert(v).second) throw ParseError("vtree repeats variable " + std::to_string(v));
  return t;
}

std::vector<VarId> Vtree::leaves_under(int i) const {
  return {leaf_order_.begin() + static_cast<long>(first_leaf(i)),
          leaf_order_.begin() + static_cast<long>(last_leaf(i)) + 1};
}

int Vtree::leaf_of(VarId v) const {
  return v < leaf_by_var_.size() ? leaf_by_var_[v] : -1;
}

int Vtree::at(const VtreePath& p) const {
  int n = root_;
  for (char c : p.steps) {
    if (n < 0 || is_leaf(n)) return -1;
    n = c == 'l' ? node(n).left : node(n).right;
  }
  return n;
}

VtreePath Vtree::path_of(int i) const {
  std::string s;
  while (node(i).parent >= 0) {
    int p = node(i).parent;
    s += node(p).left == i ? 'l' : 'r';
    i = p;
  }
  std::reverse(s.begin(), s.end());
  return VtreePath{s};
}

int Vtree::lca(int a, int b) const {
  while (a != b) {
    if (depth_[a] >= depth_[b]) a = node(a).parent;
    else b = node(b).parent;
  }
  return a;
}

int Vtree::lca_of_vars(const std::vector<VarId>& vars) const {
  int acc = -1;
  for (VarId v : vars) {
    int l = leaf_of(v);
    if (l < 0) throw std::invalid_argument("variable " + std::to_string(v) + " not in vtree");
    acc = acc < 0 ? l : lca(acc, l);
  }
  return acc;
}

std::string Vtree::to_string() const {
  std::string out;
  std::function<void(int)> rec = [&](int n) {
    if (is_leaf(n)) {
      out += std::to_string(node(n).var);
      return;
    }
    out += '(';
    rec(node(n).left);
    out += ' ';
    rec(node(n).right);
    out += ')';
  };
  if (root_ >= 0) rec(root_);
  return out;
}

bool Vtree::is_right_linear() const {
  int n = root_;
  while (!is_leaf(n)) {
    if (!is_leaf(node(n).left)) return false;
    n = node(n).right;
  }
  return true;
}

Vtree right_linear_vtree(const VarOrder& o) {
  if (o.size() == 0) throw std::invalid_argument("right-linear vtree of an empty order");
  Vtree t = Vtree::leaf(o[o.size() - 1]);
  for (std::size_t i = o.size() - 1; i-- > 0;) t = Vtree::join(Vtree::leaf(o[i]), t);
  return t;
}

VarOrder as_right_linear_order(const Vtree& t) {
  if (!t.is_right_linear()) throw std::invalid_argument("vtree is not right-linear");
  return VarOrder(t.leaves());
}

bool validate_vtree(const Vtree& t, const std::vector<VarId>& vars) {
  const int n = static_cast<int>(t.size());
  if (t.root() < 0 || t.root() >= n) return false;
  if (t.node(t.root()).parent != -1) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<VarId> found;
  std::vector<int> stack{t.root()};
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    if (x < 0 || x >= n || seen[static_cast<std::size_t>(x)]) return false;
    seen[static_cast<std::size_t>(x)] = 1;
    const auto& nd = t.node(x);
    if ((nd.left < 0) != (nd.right < 0)) return false;  // unary node
    if (nd.left < 0) {
      found.push_back(nd.var);
      continue;
    }
    if (nd.left >= n || nd.right >= n) return false;
    if (t.node(nd.left).parent != x || t.node(nd.right).parent != x) return false;
    stack.push_back(nd.left);
    stack.push_back(nd.right);
  }
  if (std::count(seen.begin(), seen.end(), 1) != n) return false;
  std::sort(found.begin(), found.end());
  if (std::adjacent_find(found.begin(), found.end()) != found.end()) return false;
  std::vector<VarId> want(vars);
  std::sort(want.begin(), want.end());
  return found == want;
}

namespace {

// Copies the subtree at `n`, letting `hook` take over selected nodes.
using Hook = std::function<bool(int, std::vector<Vtree::Node>&, int&)>;

int rebuild(const Vtree& t, int n, std::vector<Vtree::Node>& out, const Hook& hook) {
  int id;
  if (hook(n, out, id)) return id;
  const auto& src = t.node(n);
  id = static_cast<int>(out.size());
  out.push_back(Vtree::Node{-1, -1, -1, src.var});
  if (src.left >= 0) {
    int l = rebuild(t, src.left, out, hook);
    int r = rebuild(t, src.right, out, hook);
    out[id].left = l;
    out[id].right = r;
    out[l].parent = id;
    out[r].parent = id;
  }
  return id;
}

}  // namespace

Vtree move(const Vtree& t, VarId x, const VtreePath& w, Side d) {
  const int v = t.leaf_of(x);
  if (v < 0) throw std::invalid_argument("move: variable " + std::to_string(x) + " not in vtree");
  const int pv = t.node(v).parent;
  if (pv < 0) throw std::invalid_argument("move: vtree has a single leaf");
  const int sibling = t.node(pv).left == v ? t.node(pv).right : t.node(pv).left;

  // Step 1: cut v out; p_v collapses onto the sibling.
  std::vector<Vtree::Node> cut;
  int cut_root = rebuild(t, t.root(), cut, [&](int n, std::vector<Vtree::Node>& out, int& id) {
    if (n != pv) return false;
    id = rebuild(t, sibling, out, [](int, auto&, int&) { return false; });
    return true;
  });
  Vtree reduced = Vtree::from_nodes(std::move(cut), cut_root);
  reduced = Vtree::parse(reduced.to_string());  // re-root so index 0 is the root

  const int target = reduced.at(w);
  if (target < 0) throw std::invalid_argument("move: path " + w.to_string() + " does not exist");

  // Step 2: subdivide above the target with a fresh u.
  std::vector<Vtree::Node> out;
  int root = rebuild(reduced, reduced.root(), out, [&](int n, std::vector<Vtree::Node>& o, int& id) {
    if (n != target) return false;
    id = static_cast<int>(o.size());
    o.push_back(Vtree::Node{});
    int leaf = static_cast<int>(o.size());
    o.push_back(Vtree::Node{-1, -1, id, x});
    int sub = rebuild(reduced, target, o, [](int, auto&, int&) { return false; });
    o[sub].parent = id;
    o[id].left = d == Side::left ? leaf : sub;
    o[id].right = d == Side::left ? sub : leaf;
    return true;
  });
  return Vtree::parse(Vtree::from_nodes(std::move(out), root).to_string());
}

VarOrder single_variable_move(const VarOrder& o, VarId x, std::size_t pos) {
  if (!o.contains(x)) throw std::invalid_argument("variable " + std::to_string(x) + " not in order");
  if (pos >= o.size()) throw std::invalid_argument("move position out of range");
  std::vector<VarId> s = o.sequence();
  s.erase(s.begin() + static_cast<long>(o.position(x)));
  s.insert(s.begin() + static_cast<long>(pos), x);
  return VarOrder(std::move(s));
}

VtreeMove order_move_as_vtree_move(const VarOrder& o, VarId x, std::size_t pos) {
  if (!o.contains(x)) throw std::invalid_argument("variable " + std::to_string(x) + " not in order");
  if (o.size() < 2) throw std::invalid_argument("move in an order of one variable");
  if (pos >= o.size()) throw std::invalid_argument("move position out of range");
  const std::size_t rest = o.size() - 1;
  if (pos < rest) return {VtreePath{std::string(pos, 'r')}, Side::left};
  return {VtreePath{std::string(rest - 1, 'r')}, Side::right};
}

Vtree vtree_from_decomposition(const TreeDecomposition& td, const CnfFormula& formula) {
  Graph g = primal_graph(formula);
  if (std::string why = validate_decomposition(g, td); !why.empty())
    throw std::invalid_argument("invalid decomposition: " + why);
  if (formula.n_vars() == 0) throw std::invalid_argument("formula has no variables");
  const std::size_t nb = td.bags.size();
  std::vector<std::vector<std::size_t>> tadj(nb);
  for (auto [a, b] : td.tree_edges) {
    tadj[a].push_back(b);
    tadj[b].push_back(a);
  }
  const std::size_t root = nb - 1;
  std::vector<long> parent(nb, -2);
  std::vector<std::size_t> depth(nb, 0), bfs{root};
  parent[root] = -1;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    std::size_t b = bfs[i];
    for (std::size_t c : tadj[b]) {
      if (parent[c] != -2) continue;
      parent[c] = static_cast<long>(b);
      depth[c] = depth[b] + 1;
      bfs.push_back(c);
    }
  }
  std::vector<std::vector<VarId>> local(nb);
  for (std::size_t v = 0; v < g.n_vertices(); ++v) {
    std::size_t top = nb;
    for (std::size_t b = 0; b < nb; ++b) {
      if (!std::binary_search(td.bags[b].begin(), td.bags[b].end(), v)) continue;
      if (top == nb || depth[b] < depth[top]) top = b;
    }
    local[top].push_back(static_cast<VarId>(v + 1));
  }
  std::vector<std::vector<std::size_t>> children(nb);
  for (std::size_t b : bfs)
    if (parent[b] >= 0) children[static_cast<std::size_t>(parent[b])].push_back(b);

  std::vector<std::optional<Vtree>> built(nb);
  for (std::size_t i = bfs.size(); i-- > 0;) {
    std::size_t b = bfs[i];
    // bag-local vars go left so they become primes over every child below
    std::vector<Vtree> parts;
    for (VarId v : local[b]) parts.push_back(Vtree::leaf(v));
    for (std::size_t c : children[b])
      if (built[c]) parts.push_back(*built[c]);
    if (parts.empty()) continue;
    Vtree acc = parts.back();
    for (std::size_t k = parts.size() - 1; k-- > 0;) acc = Vtree::join(parts[k], acc);
    built[b] = std::move(acc);
  }
  return *built[root];
}

}  // namespace kcp
