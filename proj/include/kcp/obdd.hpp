#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "kcp/cnf.hpp"
#include "kcp/structure.hpp"

namespace kcp {

using NodeId = std::uint32_t;
inline constexpr NodeId kObddFalse = 0;
inline constexpr NodeId kObddTrue = 1;

inline constexpr std::size_t kDefaultNodeLimit = std::size_t{1} << 24;

/// Node store for reduced OBDDs over one fixed order. Nodes are never
/// freed; the unique table keeps every function at a single id.
class ObddManager {
 public:
  explicit ObddManager(VarOrder order, std::size_t node_limit = kDefaultNodeLimit);

  const VarOrder& order() const { return order_; }
  std::size_t n_nodes() const { return nodes_.size(); }
  std::size_t node_limit() const { return node_limit_; }

  bool is_terminal(NodeId n) const { return n <= kObddTrue; }
  VarId var(NodeId n) const { return nodes_[n].var; }
  NodeId lo(NodeId n) const { return nodes_[n].lo; }
  NodeId hi(NodeId n) const { return nodes_[n].hi; }
  /// Position of the node's variable; terminals sit below every variable.
  std::size_t level(NodeId n) const;
  std::size_t level_of_var(VarId v) const;

  NodeId mk(VarId var, NodeId lo, NodeId hi);
  NodeId literal(Literal l);
  NodeId clause(const Clause& c);
  NodeId term(const PartialAssignment& a);

  NodeId conjoin(NodeId a, NodeId b) { return apply(Op::conj, a, b); }
  NodeId disjoin(NodeId a, NodeId b) { return apply(Op::disj, a, b); }
  NodeId negate(NodeId a);
  NodeId ite(VarId x, NodeId hi, NodeId lo);
  NodeId restrict(NodeId a, const PartialAssignment& assignment);

  bool entails(NodeId a, NodeId b) { return conjoin(a, negate(b)) == kObddFalse; }

  /// Models over the order's variables.
  BigCount count(NodeId a);
  /// Models over `over`, which must contain every variable `a` depends on.
  BigCount count(NodeId a, const std::vector<VarId>& over);

  /// Internal nodes reachable from `a`.
  std::size_t size(NodeId a) const;
  std::vector<NodeId> reachable(NodeId a) const;  // children before parents
  bool evaluate(NodeId a, const std::vector<bool>& bits) const;

  /// Rebuilds a diagram of another manager in this one.
  NodeId import(const ObddManager& src, NodeId root);

  /// `n <id> <var> <lo> <hi>` records followed by `root <id>`.
  std::vector<std::string> serialize(NodeId a) const;
  /// Inverse of serialize; rejects non-reduced or misordered diagrams.
  NodeId load(const std::vector<std::string>& records);

  /// Empty if every stored node is reduced and respects the order.
  std::string validate() const;

 private:
  enum class Op : std::uint8_t { conj, disj };
  struct Node {
    VarId var;
    NodeId lo;
    NodeId hi;
  };
  NodeId apply(Op op, NodeId a, NodeId b);

  VarOrder order_;
  std::vector<std::size_t> level_;  // by variable; npos if absent
  std::size_t node_limit_;
  std::vector<Node> nodes_;
  struct NodeHash {
    std::size_t operator()(const Node& n) const {
      return (std::size_t{n.var} * 0x9E3779B97F4A7C15ull) ^ (std::size_t{n.lo} << 21) ^ n.hi;
    }
  };
  struct NodeEq {
    bool operator()(const Node& a, const Node& b) const {
      return a.var == b.var && a.lo == b.lo && a.hi == b.hi;
    }
  };
  std::unordered_map<Node, NodeId, NodeHash, NodeEq> unique_;
  std::unordered_map<std::uint64_t, NodeId> apply_cache_;
  std::unordered_map<NodeId, NodeId> negate_cache_;
  std::unordered_map<NodeId, BigCount> count_cache_;
};

/// A diagram handle: a manager plus a root.
struct Obdd {
  std::shared_ptr<ObddManager> mgr;
  NodeId root = kObddFalse;

  const VarOrder& order() const { return mgr->order(); }
  std::size_t size() const { return mgr->size(root); }
  bool is_false() const { return root == kObddFalse; }
  bool is_true() const { return root == kObddTrue; }
};

/// Shares one manager per order.
class ObddRegistry {
 public:
  explicit ObddRegistry(std::size_t node_limit = kDefaultNodeLimit) : node_limit_(node_limit) {}
  std::shared_ptr<ObddManager> manager(const VarOrder& o);

 private:
  std::size_t node_limit_;
  std::map<VarOrder, std::shared_ptr<ObddManager>> managers_;
};

Obdd obdd_from_clause(const Clause& c, const std::shared_ptr<ObddManager>& mgr);
Obdd obdd_and(const Obdd& a, const Obdd& b);
Obdd obdd_or(const Obdd& a, const Obdd& b);
Obdd obdd_negate(const Obdd& a);
Obdd obdd_restrict(const Obdd& a, const PartialAssignment& assignment);
BigCount obdd_count(const Obdd& a, const std::vector<VarId>& over);
bool obdd_entails(const Obdd& a, const Obdd& b);
bool obdd_is_unsat(const Obdd& a);
/// Canonical equality: same manager and same root.
bool obdd_equal(const Obdd& a, const Obdd& b);

/// Same function under single_variable_move(order, x, pos), built by
/// restricting on x and recombining in the target manager.
Obdd obdd_move_var(const Obdd& d, VarId x, std::size_t pos, ObddRegistry& registry);

/// Variable whose relocation turns order `a` into order `b`; 0 if the
/// orders are equal. Throws if they differ by more than one relocation.
VarId moved_variable(const VarOrder& a, const VarOrder& b);

/// True iff d and e agree on both cofactors of x (compared canonically in
/// d's manager). Orders must coincide once x is deleted.
bool obdd_check_move(const Obdd& d, const Obdd& e, VarId x);

/// Single-variable moves from d's order to `target` (moving target[i] to
/// position i in turn). The last element is in the target order.
std::vector<Obdd> obdd_reorder_chain(const Obdd& d, const VarOrder& target,
                                     ObddRegistry& registry);

/// Stand-alone text form: `o <order>` line, node records, root line.
std::string obdd_to_text(const Obdd& d);
Obdd obdd_from_text(const std::string& text, ObddRegistry& registry);

}  // namespace kcp
