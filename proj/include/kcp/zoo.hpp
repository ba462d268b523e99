#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kcp/cnf.hpp"
#include "kcp/graph.hpp"

namespace kcp {

enum class Role { original, control, chain, selector };
std::string role_name(Role r);

struct VarRole {
  Role role;
  std::size_t index;  // original variable, or i of y_i / z_i, or selector position (all 1-based)
};

/// Numbering: originals keep their indices, then y_1..y_m, then z_1..z_{m+1}.
struct LiftedFormula {
  CnfFormula base;
  CnfFormula result;
  std::vector<VarRole> roles;  // roles[v-1]

  std::size_t m() const { return base.size(); }
  VarId y(std::size_t i) const { return static_cast<VarId>(base.n_vars() + i); }
  VarId z(std::size_t i) const { return static_cast<VarId>(base.n_vars() + base.size() + i); }
};

/// (C_i ∨ y_i) for all i, then (¬λ ∨ ¬z_i ∨ z_{i+1}) for λ in C_i ∪ {y_i},
/// then (z_1) and (¬z_{m+1}).
LiftedFormula lift_Z(const CnfFormula& phi);
/// Only the (C_i ∨ y_i) part; variables 1..n+m.
LiftedFormula lift_C(const CnfFormula& phi);

Graph complete_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
/// Height h, 2^(h+1)-1 vertices, heap numbered.
Graph complete_binary_tree(std::size_t h);
/// ℓ edges, ℓ+1 vertices.
Graph path_graph(std::size_t l);
/// Vertex (v,w) is v*|H|+w.
Graph graph_product(const Graph& g, const Graph& h);
Graph grid_family(std::size_t h, std::size_t l);

/// Vertex v is variable v+1, one (u ∨ v) per edge.
CnfFormula vc_formula(const Graph& g);

Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed, std::size_t max_tries = 10000);

namespace serial {
bool expansion_check(const Graph& g, double c);
}
namespace parallel {
bool expansion_check(const Graph& g, double c);
}
/// |N(S) \ S| ≥ c|S| for all nonempty S with |S| ≤ n/2; n ≤ 24.
inline bool expansion_check(const Graph& g, double c) { return parallel::expansion_check(g, c); }

/// Edge e is variable e+1. Identical clauses are emitted once.
CnfFormula tseitin(const Graph& g, const std::vector<bool>& charge, std::size_t degree_cap = 6);

/// x_i = i+1, y_j = n+j+1 for i,j in [0,n).
CnfFormula eq_formula(std::size_t n, std::size_t l);

/// A permutation maps variable v to perm[v-1].
using VarPermutation = std::vector<VarId>;

struct PermFormula {
  CnfFormula formula;
  std::vector<VarId> selectors;       // w_1..w_W, after the base variables
  std::vector<std::uint64_t> codes;   // codes[k]: bit j is the value of selectors[j] for π_k
  PartialAssignment selector_assignment(std::size_t k) const;
};

std::size_t selector_width(std::size_t n_perms);
/// (¬T_{σ(π)} ∨ C) per π and clause C of φ_π, then ¬T_a per unused code a.
PermFormula perm_formula(const CnfFormula& phi, const std::vector<VarPermutation>& perms,
                         const std::vector<std::uint64_t>& codes);

/// perm over Z(EQ_n^0) with the n cyclic y-shifts, σ(ℓ) = binary ℓ.
PermFormula seq_formula(std::size_t n);

/// Random CNF with clause width in [1,k], each variable in at most l clauses.
CnfFormula random_kl_cnf(std::size_t n, std::size_t m, std::size_t k, std::size_t l, std::uint64_t seed);

}  // namespace kcp
