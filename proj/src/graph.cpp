#include "kcp/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace kcp {

std::size_t Graph::max_degree() const {
  std::size_t d = 0;
  for (const auto& a : adj_) d = std::max(d, a.size());
  return d;
}

bool Graph::add_edge(std::size_t u, std::size_t v) {
  if (u >= n_ || v >= n_) throw std::invalid_argument("edge endpoint out of range");
  if (u == v) throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
  if (has_edge(u, v)) return false;
  edges_.emplace_back(std::min(u, v), std::max(u, v));
  adj_[u].push_back(v);
  adj_[v].push_back(u);
  return true;
}

bool Graph::has_edge(std::size_t u, std::size_t v) const {
  const auto& a = adj_.at(u);
  return std::find(a.begin(), a.end(), v) != a.end();
}

bool Graph::connected() const {
  if (n_ == 0) return true;
  std::vector<char> seen(n_, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : adj_[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == n_;
}

Graph primal_graph(const CnfFormula& formula) {
  Graph g(formula.n_vars());
  for (const Clause& c : formula.clauses())
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = i + 1; j < c.size(); ++j)
        g.add_edge(c[i].var() - 1, c[j].var() - 1);
  return g;
}

std::vector<std::size_t> min_fill_order(const Graph& g) {
  const std::size_t n = g.n_vertices();
  std::vector<std::set<std::size_t>> adj(n);
  for (auto [u, v] : g.edges()) {
    adj[u].insert(v);
    adj[v].insert(u);
  }
  std::vector<char> gone(n, 0);
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    std::size_t best_fill = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (gone[v]) continue;
      std::size_t fill = 0;
      for (auto a = adj[v].begin(); a != adj[v].end(); ++a)
        for (auto b = std::next(a); b != adj[v].end(); ++b)
          if (!adj[*a].count(*b)) ++fill;
      if (best == n || fill < best_fill) {
        best = v;
        best_fill = fill;
      }
    }
    for (auto a = adj[best].begin(); a != adj[best].end(); ++a) {
      for (auto b = std::next(a); b != adj[best].end(); ++b) {
        adj[*a].insert(*b);
        adj[*b].insert(*a);
      }
    }
    for (std::size_t w : adj[best]) adj[w].erase(best);
    gone[best] = 1;
    order.push_back(best);
  }
  return order;
}

TreeDecomposition tree_decomposition(const Graph& g) {
  const std::size_t n = g.n_vertices();
  TreeDecomposition td;
  if (n == 0) return td;
  auto order = min_fill_order(g);
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;

  // Replay the elimination to collect bags.
  std::vector<std::set<std::size_t>> adj(n);
  for (auto [u, v] : g.edges()) {
    adj[u].insert(v);
    adj[v].insert(u);
  }
  td.bags.resize(n);
  std::vector<long> parent(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t v = order[i];
    std::vector<std::size_t> bag{v};
    bag.insert(bag.end(), adj[v].begin(), adj[v].end());
    std::sort(bag.begin(), bag.end());
    td.bags[i] = bag;
    std::size_t first = n;
    for (std::size_t w : adj[v])
      if (first == n || pos[w] < pos[first]) first = w;
    if (first != n) parent[i] = static_cast<long>(pos[first]);
    for (auto a = adj[v].begin(); a != adj[v].end(); ++a) {
      for (auto b = std::next(a); b != adj[v].end(); ++b) {
        adj[*a].insert(*b);
        adj[*b].insert(*a);
      }
    }
    for (std::size_t w : adj[v]) adj[w].erase(v);
  }
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (parent[i] >= 0) td.tree_edges.emplace_back(i, static_cast<std::size_t>(parent[i]));
    else roots.push_back(i);
  }
  for (std::size_t i = 0; i + 1 < roots.size(); ++i)
    td.tree_edges.emplace_back(roots[i], roots[i + 1]);
  for (const auto& b : td.bags) td.width = std::max(td.width, b.size() - 1);
  return td;
}

std::string validate_decomposition(const Graph& g, const TreeDecomposition& td) {
  const std::size_t nb = td.bags.size();
  if (g.n_vertices() > 0 && nb == 0) return "no bags";
  if (nb > 0 && td.tree_edges.size() != nb - 1) return "bag graph is not a tree (edge count)";
  std::vector<std::vector<std::size_t>> tadj(nb);
  for (auto [a, b] : td.tree_edges) {
    if (a >= nb || b >= nb || a == b) return "bad tree edge";
    tadj[a].push_back(b);
    tadj[b].push_back(a);
  }
  // tree connectivity
  if (nb > 0) {
    std::vector<char> seen(nb, 0);
    std::vector<std::size_t> st{0};
    seen[0] = 1;
    std::size_t cnt = 1;
    while (!st.empty()) {
      auto x = st.back();
      st.pop_back();
      for (auto y : tadj[x])
        if (!seen[y]) { seen[y] = 1; ++cnt; st.push_back(y); }
    }
    if (cnt != nb) return "bag graph is not connected";
  }
  std::vector<std::vector<std::size_t>> holders(g.n_vertices());
  std::size_t width = 0;
  for (std::size_t i = 0; i < nb; ++i) {
    if (!td.bags[i].empty()) width = std::max(width, td.bags[i].size() - 1);
    for (std::size_t v : td.bags[i]) {
      if (v >= g.n_vertices()) return "bag " + std::to_string(i) + " has unknown vertex";
      holders[v].push_back(i);
    }
  }
  if (width != td.width) return "declared width differs from max bag size - 1";
  for (std::size_t v = 0; v < g.n_vertices(); ++v) {
    if (holders[v].empty()) return "vertex " + std::to_string(v) + " not covered";
    // bags holding v must induce a connected subtree
    std::set<std::size_t> hs(holders[v].begin(), holders[v].end());
    std::set<std::size_t> seen{holders[v][0]};
    std::vector<std::size_t> st{holders[v][0]};
    while (!st.empty()) {
      auto x = st.back();
      st.pop_back();
      for (auto y : tadj[x])
        if (hs.count(y) && seen.insert(y).second) st.push_back(y);
    }
    if (seen.size() != hs.size()) return "bags of vertex " + std::to_string(v) + " not connected";
  }
  for (auto [u, v] : g.edges()) {
    bool ok = false;
    for (std::size_t b : holders[u]) {
      const auto& bag = td.bags[b];
      if (std::binary_search(bag.begin(), bag.end(), v)) { ok = true; break; }
    }
    if (!ok) return "edge {" + std::to_string(u) + "," + std::to_string(v) + "} not covered";
  }
  return {};
}

std::string format_decomposition(const TreeDecomposition& td) {
  std::ostringstream out;
  for (std::size_t i = 0; i < td.bags.size(); ++i) {
    out << "b " << i;
    for (std::size_t v : td.bags[i]) out << ' ' << v;
    out << '\n';
  }
  for (auto [a, b] : td.tree_edges) out << "e " << a << ' ' << b << '\n';
  return out.str();
}

TreeDecomposition parse_decomposition(std::string_view text) {
  TreeDecomposition td;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    if (tag == "b") {
      std::size_t id;
      if (!(ls >> id)) throw ParseError("bad bag line: " + line);
      if (td.bags.size() <= id) td.bags.resize(id + 1);
      std::size_t v;
      while (ls >> v) td.bags[id].push_back(v);
      std::sort(td.bags[id].begin(), td.bags[id].end());
    } else if (tag == "e") {
      std::size_t a, b;
      if (!(ls >> a >> b)) throw ParseError("bad edge line: " + line);
      td.tree_edges.emplace_back(a, b);
    } else {
      throw ParseError("unknown decomposition line: " + line);
    }
  }
  for (const auto& b : td.bags)
    if (!b.empty()) td.width = std::max(td.width, b.size() - 1);
  return td;
}

}  // namespace kcp
