#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kcp/cnf.hpp"
#include "kcp/obdd.hpp"
#include "kcp/structure.hpp"

namespace kcp {

using SddId = std::uint32_t;
inline constexpr SddId kSddFalse = 0;
inline constexpr SddId kSddTrue = 1;

/// Compressed, trimmed SDDs over a fixed vtree. Each decision node is bound
/// to the vtree node whose left subtree holds its primes and whose right
/// subtree holds its subs.
class SddManager {
 public:
  using Element = std::pair<SddId, SddId>;  // (prime, sub)
  enum class Kind : std::uint8_t { constant, literal, decision };

  explicit SddManager(Vtree vtree, std::size_t node_limit = kDefaultNodeLimit);

  const Vtree& vtree() const { return vtree_; }
  std::size_t n_nodes() const { return nodes_.size(); }

  Kind kind(SddId a) const { return nodes_[a].kind; }
  bool is_constant(SddId a) const { return a <= kSddTrue; }
  /// Bound vtree node; -1 for constants.
  int vnode(SddId a) const { return nodes_[a].vnode; }
  Literal lit(SddId a) const { return nodes_[a].lit; }
  const std::vector<Element>& elements(SddId a) const { return nodes_[a].elements; }

  SddId literal(Literal l);
  SddId clause(const Clause& c);
  SddId term(const PartialAssignment& a);

  SddId conjoin(SddId a, SddId b) { return apply(Op::conj, a, b); }
  SddId disjoin(SddId a, SddId b) { return apply(Op::disj, a, b); }
  SddId negate(SddId a);
  SddId restrict(SddId a, const PartialAssignment& assignment);

  /// Models over all vtree variables.
  BigCount count(SddId a);
  /// Models over `over`, which must contain every variable `a` mentions.
  BigCount count(SddId a, const std::vector<VarId>& over);

  /// Count-based semantic checks (same vtree by construction).
  bool equivalent(SddId a, SddId b);
  bool entails(SddId a, SddId b);

  /// Decision nodes + elements + literal atoms reachable from `a`.
  std::size_t size(SddId a) const;
  std::vector<SddId> reachable(SddId a) const;  // children first
  std::vector<VarId> mentioned_vars(SddId a) const;
  bool evaluate(SddId a, const std::vector<bool>& bits) const;

  /// Rebuilds a diagram of another manager (possibly another vtree).
  SddId import(const SddManager& src, SddId root);

  /// Atom records (`a <id> lit <l>`, `a <id> true|false`), decision records
  /// (`s <id> <path> (p s)(p s)...`), then `root <id>`.
  std::vector<std::string> serialize(SddId a) const;
  /// Inverse of serialize. Checks binding, prime partition, compression and
  /// trimming of every decision record.
  SddId load(const std::vector<std::string>& records);

  /// Empty if the node satisfies the decision-node invariants.
  std::string check_decision(int v, const std::vector<Element>& elems);

 private:
  enum class Op : std::uint8_t { conj, disj };
  struct Node {
    Kind kind;
    int vnode;
    Literal lit;
    std::vector<Element> elements;
  };
  struct KeyHash {
    std::size_t operator()(const std::pair<int, std::vector<Element>>& k) const;
  };

  SddId apply(Op op, SddId a, SddId b);
  std::vector<Element> lift(SddId a, int v);
  SddId make_decision(int v, std::vector<Element> elems);
  SddId intern(int v, std::vector<Element> elems);
  BigCount scaled(SddId a, std::size_t n_vars);
  std::size_t vars_at(int vnode) const { return vnode < 0 ? 0 : vtree_.n_leaves_under(vnode); }

  Vtree vtree_;
  std::size_t node_limit_;
  std::vector<Node> nodes_;
  std::unordered_map<std::int64_t, SddId> literals_;
  std::unordered_map<std::pair<int, std::vector<Element>>, SddId, KeyHash> unique_;
  std::unordered_map<std::uint64_t, SddId> apply_cache_;
  std::unordered_map<SddId, SddId> negate_cache_;
  std::unordered_map<SddId, BigCount> count_cache_;
};

std::string sdd_to_text(SddManager& m, SddId a);
/// Reads a stand-alone SDD file into a new manager.
std::pair<std::shared_ptr<SddManager>, SddId> sdd_from_text(const std::string& text);

}  // namespace kcp
