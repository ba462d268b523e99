#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kcp/checker.hpp"
#include "kcp/cnf.hpp"
#include "kcp/proof.hpp"

namespace kcp {

struct ResolutionStep {
  enum class Kind { input, res } kind = Kind::input;
  std::size_t clause = 0;  // input: 0-based clause index
  std::size_t i = 0, j = 0;  // res: 1-based step numbers
  VarId pivot = 0;
};

struct ResolutionProof {
  std::vector<ResolutionStep> steps;
  std::size_t n_resolutions() const;
};

/// `r <n> input <clause-idx>` / `r <n> res <i> <j> <pivot>`.
ResolutionProof parse_resolution(std::string_view text);
std::string format_resolution(const ResolutionProof& r);

/// Clause derived at each step. Throws std::invalid_argument naming the
/// first bad step (dangling reference, pivot not clashing, tautology).
std::vector<Clause> resolution_clauses(const CnfFormula& phi, const ResolutionProof& r);

/// Accepted iff every step is valid and the last clause is empty.
Verdict check_resolution(const CnfFormula& phi, const ResolutionProof& r);

/// OBDD(∧,w) proof over `order`: init per input step, join + weaken per
/// resolvent. Throws if `r` is not a valid refutation.
Proof resolution_to_obddw(const CnfFormula& phi, const ResolutionProof& r, const VarOrder& order);

}  // namespace kcp
