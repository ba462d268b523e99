#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kcp/cnf.hpp"
#include "kcp/obdd.hpp"
#include "kcp/proof.hpp"
#include "kcp/resolution.hpp"
#include "kcp/zoo.hpp"

namespace kcp {

enum class FoldShape { left, balanced };

struct Derivation {
  Proof proof;
  bool refuted = false;  // last line is the constant-false diagram
  std::size_t max_diagram_size = 0;
  std::size_t final_size = 0;
};

/// init every clause (in `clause_order`, default 0..m-1), then join them up.
Derivation naive_conjoin_refute(const CnfFormula& phi, const Structure& s, Format f,
                                FoldShape shape = FoldShape::left,
                                const std::vector<std::size_t>& clause_order = {},
                                std::size_t node_limit = kDefaultNodeLimit);

/// Interleaved init/join left fold: a (∧)-compilation trace whose last line
/// computes phi.
Derivation compile_cnf(const CnfFormula& phi, const Structure& s, Format f,
                       const std::vector<std::size_t>& clause_order = {},
                       std::size_t node_limit = kDefaultNodeLimit);
/// Largest intermediate diagram of the same fold, without writing a proof.
/// Stops early once a diagram reaches `stop_at` (0 = never).
std::size_t compile_max_size(const CnfFormula& phi, const Structure& s, Format f,
                             const std::vector<std::size_t>& clause_order = {}, std::size_t stop_at = 0,
                             std::size_t node_limit = kDefaultNodeLimit);
Derivation sdd_compile_cnf(const CnfFormula& phi, const Vtree& t);

/// Eliminates the literals of each C_i ∨ y_i against its implication
/// clauses, then walks the z chain to the empty clause.
ResolutionProof resolution_refute_lifted(const LiftedFormula& z);

/// Extends a compilation of C(phi) (over a structure that already holds
/// the z variables) to a refutation of Z(phi).
Derivation compilation_to_refutation(const Proof& comp, const LiftedFormula& z,
                                     std::size_t node_limit = kDefaultNodeLimit);

/// Clauses sorted so that each join touches variables eliminated early.
std::vector<std::size_t> elimination_clause_order(const CnfFormula& phi, const std::vector<std::size_t>& elim);

struct TreewidthRefutation {
  Derivation refutation;
  Derivation compilation;
  std::size_t width = 0;
  Vtree vtree;
};
/// decomposition of C(phi) -> vtree (z chain on the right) -> SDD(∧)
/// compilation -> lifted refutation of Z(phi).
TreewidthRefutation treewidth_refute(const CnfFormula& phi, std::size_t node_limit = kDefaultNodeLimit);

/// Block k holds x_k, y_{(l+k) mod n} and the two control variables of
/// its clauses; the chain variables come last.
VarOrder eq_order(std::size_t n, std::size_t l);
struct EqRefutation {
  Derivation refutation;
  Derivation compilation;
};
EqRefutation obdd_refute_eq(std::size_t n, std::size_t l, std::size_t node_limit = kDefaultNodeLimit);

struct Extraction {
  Format format = Format::obdd;
  std::optional<Structure> structure;
  std::vector<std::string> records;
  std::size_t size = 0;
  std::size_t p = 0, q = 0;                  // lines joined into ⊥
  std::size_t missing_p = 0, missing_q = 0;  // clause indices of Z
  std::vector<std::size_t> kept;             // I_p ∪ I_q, indices into phi
};

/// Kept-clause width cap for the brute-force tail.
inline constexpr std::size_t kExtractionVarCap = 22;

/// A diagram computing phi, read off an accepted weakening-free refutation
/// of Z(phi).
Extraction extract_representation(const Proof& p, const LiftedFormula& z,
                                  std::size_t node_limit = kDefaultNodeLimit);

}  // namespace kcp
