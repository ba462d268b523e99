#include "kcp/brute_force.hpp"

#include <algorithm>

#include <omp.h>

namespace kcp {

std::vector<PackedClause> pack_clauses(const CnfFormula& formula) {
  if (formula.n_vars() > 64) throw ResourceLimit("packed clauses need n_vars <= 64");
  std::vector<PackedClause> out;
  out.reserve(formula.size());
  for (const Clause& c : formula.clauses()) {
    PackedClause p;
    for (Literal l : c) {
      std::uint64_t bit = std::uint64_t{1} << (l.var() - 1);
      (l.positive() ? p.pos : p.neg) |= bit;
    }
    out.push_back(p);
  }
  return out;
}

namespace {

void check_cap(const CnfFormula& f, std::size_t cap) {
  if (f.n_vars() > cap) {
    throw ResourceLimit("brute force over " + std::to_string(f.n_vars()) +
                        " variables exceeds cap " + std::to_string(cap));
  }
}

bool all_satisfied(const std::vector<PackedClause>& cs, std::uint64_t a) {
  for (const PackedClause& c : cs)
    if (!c.satisfied_by(a)) return false;
  return true;
}

// Index of the only falsified clause, -1 if none, -2 if several.
long unique_falsified(const std::vector<PackedClause>& cs, std::uint64_t a) {
  long hit = -1;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].satisfied_by(a)) continue;
    if (hit != -1) return -2;
    hit = static_cast<long>(i);
  }
  return hit;
}

MinimalUnsatResult finish(std::size_t m, bool sat, const std::vector<char>& witnessed) {
  MinimalUnsatResult r;
  r.unsatisfiable = !sat;
  for (std::size_t i = 0; i < m; ++i)
    if (!witnessed[i]) r.redundant.push_back(i);
  r.minimal = r.unsatisfiable && r.redundant.empty();
  return r;
}

}  // namespace

namespace serial {

BigCount count_models(const CnfFormula& formula, std::size_t cap) {
  check_cap(formula, cap);
  auto cs = pack_clauses(formula);
  const std::uint64_t total = std::uint64_t{1} << formula.n_vars();
  std::uint64_t count = 0;
  for (std::uint64_t a = 0; a < total; ++a)
    if (all_satisfied(cs, a)) ++count;
  return BigCount(count);
}

MinimalUnsatResult minimal_unsat(const CnfFormula& formula, std::size_t cap) {
  check_cap(formula, cap);
  auto cs = pack_clauses(formula);
  const std::uint64_t total = std::uint64_t{1} << formula.n_vars();
  std::vector<char> witnessed(cs.size(), 0);
  bool sat = false;
  for (std::uint64_t a = 0; a < total; ++a) {
    long u = unique_falsified(cs, a);
    if (u == -1) sat = true;
    else if (u >= 0) witnessed[static_cast<std::size_t>(u)] = 1;
  }
  return finish(cs.size(), sat, witnessed);
}

}  // namespace serial

namespace parallel {

BigCount count_models(const CnfFormula& formula, std::size_t cap) {
  check_cap(formula, cap);
  auto cs = pack_clauses(formula);
  const std::int64_t total = std::int64_t{1} << formula.n_vars();
  std::uint64_t count = 0;
#pragma omp parallel for reduction(+ : count) schedule(static)
  for (std::int64_t a = 0; a < total; ++a)
    if (all_satisfied(cs, static_cast<std::uint64_t>(a))) ++count;
  return BigCount(count);
}

MinimalUnsatResult minimal_unsat(const CnfFormula& formula, std::size_t cap) {
  check_cap(formula, cap);
  auto cs = pack_clauses(formula);
  const std::int64_t total = std::int64_t{1} << formula.n_vars();
  std::vector<char> witnessed(cs.size(), 0);
  bool sat = false;
#pragma omp parallel
  {
    std::vector<char> local(cs.size(), 0);
    bool local_sat = false;
#pragma omp for schedule(static) nowait
    for (std::int64_t a = 0; a < total; ++a) {
      long u = unique_falsified(cs, static_cast<std::uint64_t>(a));
      if (u == -1) local_sat = true;
      else if (u >= 0) local[static_cast<std::size_t>(u)] = 1;
    }
#pragma omp critical
    {
      sat = sat || local_sat;
      for (std::size_t i = 0; i < local.size(); ++i) witnessed[i] |= local[i];
    }
  }
  return finish(cs.size(), sat, witnessed);
}

}  // namespace parallel

bool is_satisfiable(const CnfFormula& formula, std::size_t cap) {
  check_cap(formula, cap);
  auto cs = pack_clauses(formula);
  const std::uint64_t total = std::uint64_t{1} << formula.n_vars();
  for (std::uint64_t a = 0; a < total; ++a)
    if (all_satisfied(cs, a)) return true;
  return false;
}

bool is_minimally_unsat(const CnfFormula& formula, std::size_t cap) {
  return parallel::minimal_unsat(formula, cap).minimal;
}

std::vector<std::uint64_t> enumerate_models(const CnfFormula& formula, std::size_t cap) {
  check_cap(formula, cap);
  auto cs = pack_clauses(formula);
  const std::uint64_t total = std::uint64_t{1} << formula.n_vars();
  std::vector<std::uint64_t> out;
  for (std::uint64_t a = 0; a < total; ++a)
    if (all_satisfied(cs, a)) out.push_back(a);
  return out;
}

}  // namespace kcp
