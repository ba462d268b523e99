#include "kcp/zoo.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <random>
#include <set>

namespace kcp {

std::string role_name(Role r) {
  switch (r) {
    case Role::original: return "x";
    case Role::control: return "y";
    case Role::chain: return "z";
    default: return "w";
  }
}

namespace {

LiftedFormula lift(const CnfFormula& phi, bool with_chain) {
  const std::size_t n = phi.n_vars(), m = phi.size();
  LiftedFormula out{phi, {}, {}};
  for (std::size_t v = 1; v <= n; ++v) out.roles.push_back({Role::original, v});
  for (std::size_t i = 1; i <= m; ++i) out.roles.push_back({Role::control, i});
  std::vector<Clause> clauses;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Literal> lits(phi.clause(i).begin(), phi.clause(i).end());
    lits.push_back(Literal(out.y(i + 1), true));
    clauses.emplace_back(std::move(lits));
  }
  if (!with_chain) {
    out.result = CnfFormula(n + m, std::move(clauses));
    return out;
  }
  for (std::size_t i = 1; i <= m + 1; ++i) out.roles.push_back({Role::chain, i});
  for (std::size_t i = 0; i < m; ++i) {
    const Clause& ci = clauses[i];  // C_i ∨ y_i
    for (Literal lam : ci)
      clauses.emplace_back(std::vector<Literal>{~lam, Literal(out.z(i + 1), false), Literal(out.z(i + 2), true)});
  }
  clauses.emplace_back(std::vector<Literal>{Literal(out.z(1), true)});
  clauses.emplace_back(std::vector<Literal>{Literal(out.z(m + 1), false)});
  out.result = CnfFormula(n + m + m + 1, std::move(clauses));
  return out;
}

}  // namespace

LiftedFormula lift_Z(const CnfFormula& phi) {
  if (phi.size() == 0) throw std::invalid_argument("lift_Z needs at least one clause");
  return lift(phi, true);
}

LiftedFormula lift_C(const CnfFormula& phi) { return lift(phi, false); }

Graph complete_graph(std::size_t n) {
  Graph g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
  Graph g(n);
  for (std::size_t v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
  return g;
}

Graph complete_binary_tree(std::size_t h) {
  if (h > 20) throw std::invalid_argument("tree height too large");
  const std::size_t n = (std::size_t{1} << (h + 1)) - 1;
  Graph g(n);
  for (std::size_t v = 1; v < n; ++v) g.add_edge((v - 1) / 2, v);
  return g;
}

Graph path_graph(std::size_t l) {
  Graph g(l + 1);
  for (std::size_t v = 0; v < l; ++v) g.add_edge(v, v + 1);
  return g;
}

Graph graph_product(const Graph& g, const Graph& h) {
  const std::size_t nh = h.n_vertices();
  Graph out(g.n_vertices() * nh);
  for (std::size_t v = 0; v < g.n_vertices(); ++v)
    for (auto [a, b] : h.edges()) out.add_edge(v * nh + a, v * nh + b);
  for (auto [u, v] : g.edges())
    for (std::size_t w = 0; w < nh; ++w) out.add_edge(u * nh + w, v * nh + w);
  return out;
}

Graph grid_family(std::size_t h, std::size_t l) {
  if (h < 1 || l < 1) throw std::invalid_argument("grid family needs h,l >= 1");
  return graph_product(complete_binary_tree(h), path_graph(l));
}

CnfFormula vc_formula(const Graph& g) {
  std::vector<Clause> clauses;
  for (auto [u, v] : g.edges())
    clauses.emplace_back(std::vector<Literal>{Literal(VarId(u + 1), true), Literal(VarId(v + 1), true)});
  return CnfFormula(g.n_vertices(), std::move(clauses));
}

Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed, std::size_t max_tries) {
  if ((n * d) % 2 != 0) throw std::invalid_argument("n*d must be even");
  if (d >= n && n > 0) throw std::invalid_argument("degree must be below n");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> points;
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t k = 0; k < d; ++k) points.push_back(v);
  for (std::size_t attempt = 0; attempt < max_tries; ++attempt) {
    std::shuffle(points.begin(), points.end(), rng);
    Graph g(n);
    bool ok = true;
    for (std::size_t i = 0; i < points.size() && ok; i += 2) {
      const std::size_t u = points[i], v = points[i + 1];
      ok = u != v && g.add_edge(u, v);
    }
    if (ok) return g;
  }
  throw ResourceLimit("random_regular: retry limit exceeded");
}

namespace {

std::vector<std::uint32_t> adjacency_masks(const Graph& g) {
  if (g.n_vertices() > 24) throw std::invalid_argument("expansion_check enumerates subsets; n <= 24");
  std::vector<std::uint32_t> adj(g.n_vertices(), 0);
  for (auto [u, v] : g.edges()) {
    adj[u] |= 1u << v;
    adj[v] |= 1u << u;
  }
  return adj;
}

bool expands(const std::vector<std::uint32_t>& adj, std::uint32_t s, double c) {
  const int size = std::popcount(s);
  if (size == 0 || 2 * std::size_t(size) > adj.size()) return true;
  std::uint32_t nb = 0;
  for (std::uint32_t rest = s; rest; rest &= rest - 1) nb |= adj[std::countr_zero(rest)];
  return std::popcount(nb & ~s) >= c * size;
}

}  // namespace

namespace serial {
bool expansion_check(const Graph& g, double c) {
  auto adj = adjacency_masks(g);
  const std::uint64_t total = std::uint64_t{1} << g.n_vertices();
  for (std::uint64_t s = 1; s < total; ++s)
    if (!expands(adj, static_cast<std::uint32_t>(s), c)) return false;
  return true;
}
}  // namespace serial

namespace parallel {
bool expansion_check(const Graph& g, double c) {
  auto adj = adjacency_masks(g);
  const std::int64_t total = std::int64_t{1} << g.n_vertices();
  std::atomic<bool> ok{true};
#pragma omp parallel for schedule(static, 4096)
  for (std::int64_t s = 1; s < total; ++s) {
    if (!ok.load(std::memory_order_relaxed)) continue;
    if (!expands(adj, static_cast<std::uint32_t>(s), c)) ok.store(false, std::memory_order_relaxed);
  }
  return ok.load();
}
}  // namespace parallel

CnfFormula tseitin(const Graph& g, const std::vector<bool>& charge, std::size_t degree_cap) {
  if (charge.size() != g.n_vertices()) throw std::invalid_argument("tseitin: one charge per vertex");
  std::vector<std::vector<std::size_t>> incident(g.n_vertices());
  for (std::size_t e = 0; e < g.n_edges(); ++e) {
    incident[g.edges()[e].first].push_back(e);
    incident[g.edges()[e].second].push_back(e);
  }
  std::vector<Clause> clauses;
  std::set<std::vector<Literal>> seen;
  for (std::size_t v = 0; v < g.n_vertices(); ++v) {
    const auto& es = incident[v];
    if (es.size() > degree_cap)
      throw std::invalid_argument("tseitin: vertex " + std::to_string(v) + " exceeds degree cap");
    // forbid every local assignment of the wrong parity
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << es.size()); ++a) {
      if ((std::popcount(a) % 2 == 1) == charge[v]) continue;
      std::vector<Literal> lits;
      for (std::size_t k = 0; k < es.size(); ++k) lits.push_back(Literal(VarId(es[k] + 1), !((a >> k) & 1)));
      std::vector<Literal> key = lits;
      std::sort(key.begin(), key.end());
      if (seen.insert(key).second) clauses.emplace_back(std::move(lits));
    }
  }
  return CnfFormula(g.n_edges(), std::move(clauses));
}

CnfFormula eq_formula(std::size_t n, std::size_t l) {
  if (n == 0 || !std::has_single_bit(n)) throw std::invalid_argument("eq_formula: n must be a power of two");
  if (l >= n) throw std::invalid_argument("eq_formula: shift must be below n");
  std::vector<Clause> clauses;
  for (std::size_t i = 0; i < n; ++i) {
    const VarId x = VarId(i + 1), y = VarId(n + (l + i) % n + 1);
    clauses.emplace_back(std::vector<Literal>{Literal(x, true), Literal(y, false)});
    clauses.emplace_back(std::vector<Literal>{Literal(x, false), Literal(y, true)});
  }
  return CnfFormula(2 * n, std::move(clauses));
}

std::size_t selector_width(std::size_t n_perms) {
  std::size_t w = 1;
  while ((std::size_t{1} << w) < n_perms) ++w;
  return w;
}

PartialAssignment PermFormula::selector_assignment(std::size_t k) const {
  PartialAssignment a;
  for (std::size_t j = 0; j < selectors.size(); ++j) a.set(selectors[j], (codes.at(k) >> j) & 1);
  return a;
}

PermFormula perm_formula(const CnfFormula& phi, const std::vector<VarPermutation>& perms,
                         const std::vector<std::uint64_t>& codes) {
  if (perms.empty() || perms.size() != codes.size())
    throw std::invalid_argument("perm_formula: one code per permutation");
  const std::size_t n = phi.n_vars(), w = selector_width(perms.size());
  if (std::set<std::uint64_t>(codes.begin(), codes.end()).size() != codes.size())
    throw std::invalid_argument("perm_formula: selector encoding not injective");
  for (std::uint64_t c : codes)
    if (c >> w) throw std::invalid_argument("perm_formula: code wider than the selector set");
  PermFormula out;
  out.codes = codes;
  for (std::size_t j = 0; j < w; ++j) out.selectors.push_back(VarId(n + j + 1));
  auto not_term = [&](std::uint64_t code) {
    std::vector<Literal> lits;
    for (std::size_t j = 0; j < w; ++j) lits.push_back(Literal(out.selectors[j], !((code >> j) & 1)));
    return lits;
  };
  std::vector<Clause> clauses;
  for (std::size_t k = 0; k < perms.size(); ++k) {
    const auto& p = perms[k];
    if (p.size() != n) throw std::invalid_argument("perm_formula: permutation size mismatch");
    for (const Clause& c : phi.clauses()) {
      std::vector<Literal> lits;
      for (Literal l : c) lits.push_back(Literal(p[l.var() - 1], l.positive()));
      auto sel = not_term(codes[k]);
      lits.insert(lits.end(), sel.begin(), sel.end());
      clauses.emplace_back(std::move(lits));
    }
  }
  std::set<std::uint64_t> used(codes.begin(), codes.end());
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << w); ++a)
    if (!used.count(a)) clauses.emplace_back(not_term(a));
  out.formula = CnfFormula(n + w, std::move(clauses));
  return out;
}

PermFormula seq_formula(std::size_t n) {
  LiftedFormula z = lift_Z(eq_formula(n, 0));
  const std::size_t total = z.result.n_vars();
  std::vector<VarPermutation> perms;
  std::vector<std::uint64_t> codes;
  for (std::size_t l = 0; l < n; ++l) {
    VarPermutation p(total);
    for (std::size_t v = 1; v <= total; ++v) p[v - 1] = VarId(v);
    for (std::size_t i = 0; i < n; ++i) p[n + i] = VarId(n + (i + l) % n + 1);
    perms.push_back(std::move(p));
    codes.push_back(l);
  }
  return perm_formula(z.result, perms, codes);
}

CnfFormula random_kl_cnf(std::size_t n, std::size_t m, std::size_t k, std::size_t l, std::uint64_t seed) {
  if (n == 0 || k == 0 || l == 0) throw std::invalid_argument("random_kl_cnf: n, k, l must be positive");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> occ(n + 1, 0);
  std::vector<Clause> clauses;
  std::uniform_int_distribution<std::size_t> width(1, std::min(k, n));
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<VarId> free;
    for (VarId v = 1; v <= n; ++v)
      if (occ[v] < l) free.push_back(v);
    if (free.empty()) throw std::invalid_argument("random_kl_cnf: occurrence budget exhausted");
    std::shuffle(free.begin(), free.end(), rng);
    free.resize(std::min(width(rng), free.size()));
    std::vector<Literal> lits;
    for (VarId v : free) {
      ++occ[v];
      lits.push_back(Literal(v, rng() & 1));
    }
    clauses.emplace_back(std::move(lits));
  }
  return CnfFormula(n, std::move(clauses));
}

}  // namespace kcp
