#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kcp/cnf.hpp"
#include "kcp/obdd.hpp"
#include "kcp/proof.hpp"

namespace kcp {

enum class VerdictStatus { accepted, rejected, resource, malformed };
std::string status_name(VerdictStatus s);

struct CheckStats {
  std::size_t lines = 0;
  std::size_t max_diagram_size = 0;
  std::size_t total_nodes = 0;  // summed over distinct diagrams used by lines
};

struct Verdict {
  bool accepted = false;
  VerdictStatus status = VerdictStatus::rejected;
  std::optional<std::size_t> failing_line;  // 1-based
  std::string reason;
  CheckStats stats;
};

inline constexpr int kVerdictSchemaVersion = 1;
std::string verdict_json(const Verdict& v);

struct CheckOptions {
  std::size_t jobs = 1;
  /// Demand that the last line is the constant-false diagram.
  bool refutation = true;
  std::size_t node_limit = kDefaultNodeLimit;
};

/// Per line, the sorted clause indices whose conjunction it computes.
/// Throws std::invalid_argument on a weaken line.
std::vector<std::vector<std::size_t>> track_clause_sets(const CnfFormula& phi, const Proof& p);

namespace serial {
Verdict check_proof(const CnfFormula& phi, const Proof& p, const CheckOptions& opts = {});
}
namespace parallel {
/// Lines verified concurrently with thread-local stores; the smallest
/// failing line wins, so verdicts match the serial checker.
Verdict check_proof(const CnfFormula& phi, const Proof& p, const CheckOptions& opts = {});
}
Verdict check_proof(const CnfFormula& phi, const Proof& p, const CheckOptions& opts = {});
/// Parses first; a malformed file yields status `malformed`.
Verdict check_proof_text(const CnfFormula& phi, std::string_view text, const CheckOptions& opts = {});

/// Every diagram restricted by `a`; init lines renumbered against
/// restrict_cnf(phi, a), lines of satisfied clauses dropped and their uses
/// rerouted. Appends join(k,k,⊥) if the last surviving line is not
/// literally false.
Proof restrict_proof(const CnfFormula& phi, const Proof& p, const PartialAssignment& a,
                     std::size_t node_limit = kDefaultNodeLimit);

}  // namespace kcp
