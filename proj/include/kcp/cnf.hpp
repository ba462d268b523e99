#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace kcp {

/// Exact model counts; counts routinely reach 2^n.
using BigCount = boost::multiprecision::cpp_int;

/// Variables are numbered densely from 1.
using VarId = std::uint32_t;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a configurable size cap (nodes, gates, brute-force width) is hit.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Literal {
 public:
  constexpr Literal() = default;
  constexpr Literal(VarId var, bool positive)
      : value_(positive ? static_cast<std::int32_t>(var)
                        : -static_cast<std::int32_t>(var)) {}

  static Literal from_dimacs(std::int64_t value);

  constexpr VarId var() const {
    return static_cast<VarId>(value_ < 0 ? -value_ : value_);
  }
  constexpr bool positive() const { return value_ > 0; }
  constexpr std::int32_t to_dimacs() const { return value_; }
  constexpr Literal operator~() const { return Literal(var(), !positive()); }

  /// True iff the literal is satisfied when `var()` takes `value`.
  constexpr bool satisfied_by(bool value) const { return value == positive(); }

  friend constexpr auto operator<=>(const Literal&, const Literal&) = default;

 private:
  std::int32_t value_ = 0;
};

/// A disjunction of literals. Literal order is preserved (it names the
/// implication clauses of lifted formulas); duplicates are dropped and
/// complementary pairs are rejected.
class Clause {
 public:
  Clause() = default;
  explicit Clause(std::vector<Literal> literals);
  Clause(std::initializer_list<int> dimacs);

  std::span<const Literal> literals() const { return literals_; }
  std::size_t size() const { return literals_.size(); }
  bool empty() const { return literals_.empty(); }
  const Literal& operator[](std::size_t i) const { return literals_[i]; }
  auto begin() const { return literals_.begin(); }
  auto end() const { return literals_.end(); }

  bool contains(Literal lit) const;
  bool mentions(VarId var) const;
  VarId max_var() const;

  friend bool operator==(const Clause&, const Clause&) = default;

 private:
  std::vector<Literal> literals_;
};

class PartialAssignment {
 public:
  PartialAssignment() = default;
  PartialAssignment(std::initializer_list<std::pair<const VarId, bool>> init)
      : values_(init) {}

  void set(VarId var, bool value) { values_[var] = value; }
  bool contains(VarId var) const { return values_.count(var) != 0; }
  bool value(VarId var) const { return values_.at(var); }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::map<VarId, bool>& values() const { return values_; }
  std::vector<VarId> support() const;

  /// Union of two assignments with disjoint supports.
  PartialAssignment merged(const PartialAssignment& other) const;

  /// The assignment falsifying every literal of `clause`.
  static PartialAssignment falsifying(const Clause& clause);

  friend bool operator==(const PartialAssignment&,
                         const PartialAssignment&) = default;

 private:
  std::map<VarId, bool> values_;
};

class CnfFormula {
 public:
  CnfFormula() = default;
  CnfFormula(std::size_t n_vars, std::vector<Clause> clauses);

  std::size_t n_vars() const { return n_vars_; }
  std::size_t size() const { return clauses_.size(); }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const Clause& clause(std::size_t i) const { return clauses_.at(i); }
  bool has_empty_clause() const;

  /// Variables that occur in some clause, ascending.
  std::vector<VarId> mentioned_vars() const;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

 private:
  std::size_t n_vars_ = 0;
  std::vector<Clause> clauses_;
};

CnfFormula parse_dimacs(std::string_view text);
std::string to_dimacs(const CnfFormula& formula);

/// Removes satisfied clauses and falsified literals. An emptied clause is
/// kept as the empty clause. Variable numbering is unchanged.
CnfFormula restrict_cnf(const CnfFormula& formula, const PartialAssignment& a);

/// Maximum clause width and maximum number of clauses a variable occurs in.
struct KlProfile {
  std::size_t k = 0;
  std::size_t l = 0;
  friend bool operator==(const KlProfile&, const KlProfile&) = default;
};
KlProfile kl_profile(const CnfFormula& formula);

/// Truth value of `formula` under a total assignment (`bits[v-1]` is v).
bool evaluate(const CnfFormula& formula, const std::vector<bool>& bits);

}  // namespace kcp
