#pragma once

#include <cstdint>
#include <vector>

#include "kcp/cnf.hpp"

namespace kcp {

inline constexpr std::size_t kDefaultBruteForceCap = 24;

/// Clause bitmasks for word-level evaluation over at most 64 variables.
/// Bit v-1 stands for variable v.
struct PackedClause {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
  bool satisfied_by(std::uint64_t assignment) const {
    return ((assignment & pos) | (~assignment & neg)) != 0;
  }
};

std::vector<PackedClause> pack_clauses(const CnfFormula& formula);

struct MinimalUnsatResult {
  bool unsatisfiable = false;
  bool minimal = false;
  /// Clauses that are never the unique falsified clause.
  std::vector<std::size_t> redundant;
};

// The serial versions are the reference; parallel ones split the assignment
// space over OpenMP threads and must agree exactly.
namespace serial {
BigCount count_models(const CnfFormula& formula,
                      std::size_t cap = kDefaultBruteForceCap);
MinimalUnsatResult minimal_unsat(const CnfFormula& formula,
                                 std::size_t cap = kDefaultBruteForceCap);
}  // namespace serial

namespace parallel {
BigCount count_models(const CnfFormula& formula,
                      std::size_t cap = kDefaultBruteForceCap);
MinimalUnsatResult minimal_unsat(const CnfFormula& formula,
                                 std::size_t cap = kDefaultBruteForceCap);
}  // namespace parallel

inline BigCount brute_force_models(const CnfFormula& formula,
                                   std::size_t cap = kDefaultBruteForceCap) {
  return parallel::count_models(formula, cap);
}

bool is_satisfiable(const CnfFormula& formula,
                    std::size_t cap = kDefaultBruteForceCap);
bool is_minimally_unsat(const CnfFormula& formula,
                        std::size_t cap = kDefaultBruteForceCap);

/// All models as bit vectors (bit v-1 is variable v), ascending.
std::vector<std::uint64_t> enumerate_models(const CnfFormula& formula,
                                            std::size_t cap = kDefaultBruteForceCap);

}  // namespace kcp
