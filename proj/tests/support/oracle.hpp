#pragma once

// Test-side reference semantics. Deliberately naive: loops over total
// assignments and evaluates clauses literal by literal, sharing nothing
// with the packed-mask kernels of the library.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "kcp/cnf.hpp"

namespace oracle {

using kcp::Clause;
using kcp::CnfFormula;
using kcp::Literal;
using kcp::VarId;

inline std::vector<bool> bits_of(std::uint64_t a, std::size_t n) {
  std::vector<bool> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = (a >> i) & 1;
  return b;
}

inline bool clause_holds(const Clause& c, const std::vector<bool>& b) {
  for (Literal l : c)
    if (b[l.var() - 1] == l.positive()) return true;
  return false;
}

inline bool formula_holds(const CnfFormula& f, const std::vector<bool>& b) {
  for (const Clause& c : f.clauses())
    if (!clause_holds(c, b)) return false;
  return true;
}

/// Truth table over variables 1..n (entry a has bit v-1 for variable v).
using Table = std::vector<bool>;

inline Table table_of(std::size_t n, const std::function<bool(const std::vector<bool>&)>& f) {
  Table t(std::size_t{1} << n);
  for (std::uint64_t a = 0; a < t.size(); ++a) t[a] = f(bits_of(a, n));
  return t;
}

inline Table table_of(const CnfFormula& f, std::size_t n) {
  return table_of(n, [&](const std::vector<bool>& b) { return formula_holds(f, b); });
}

inline std::uint64_t count(const Table& t) {
  std::uint64_t c = 0;
  for (bool b : t) c += b;
  return c;
}

inline std::uint64_t count_models(const CnfFormula& f) {
  return count(table_of(f, f.n_vars()));
}

inline bool satisfiable(const CnfFormula& f) { return count_models(f) > 0; }

inline bool minimally_unsat(const CnfFormula& f) {
  if (satisfiable(f)) return false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<Clause> rest;
    for (std::size_t j = 0; j < f.size(); ++j)
      if (j != i) rest.push_back(f.clause(j));
    if (!satisfiable(CnfFormula(f.n_vars(), rest))) return false;
  }
  return true;
}

/// Random clause of width in [1,k] over variables 1..n.
inline Clause random_clause(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::uniform_int_distribution<std::size_t> width(1, std::min(k, n));
  std::uniform_int_distribution<VarId> var(1, static_cast<VarId>(n));
  std::bernoulli_distribution sign(0.5);
  std::size_t w = width(rng);
  std::vector<Literal> lits;
  while (lits.size() < w) {
    VarId v = var(rng);
    bool dup = false;
    for (Literal l : lits) dup = dup || l.var() == v;
    if (!dup) lits.emplace_back(v, sign(rng));
  }
  return Clause(lits);
}

inline CnfFormula random_cnf(std::mt19937_64& rng, std::size_t n, std::size_t m, std::size_t k) {
  std::vector<Clause> cs;
  for (std::size_t i = 0; i < m; ++i) cs.push_back(random_clause(rng, n, k));
  return CnfFormula(n, cs);
}

}  // namespace oracle
