#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "kcp/cnf.hpp"
#include "kcp/graph.hpp"

namespace kcp {

class VarOrder {
 public:
  VarOrder() = default;
  explicit VarOrder(std::vector<VarId> sequence);
  static VarOrder identity(std::size_t n);
  static VarOrder parse(std::string_view text);

  const std::vector<VarId>& sequence() const { return seq_; }
  std::size_t size() const { return seq_.size(); }
  VarId operator[](std::size_t i) const { return seq_[i]; }
  bool contains(VarId v) const;
  /// Position of `v`, or size() if absent.
  std::size_t position(VarId v) const;
  std::string to_string() const;

  friend auto operator<=>(const VarOrder&, const VarOrder&) = default;

 private:
  std::vector<VarId> seq_;
};

/// Left/right steps from the root; the empty path is the root itself.
struct VtreePath {
  std::string steps;  // 'l' and 'r'
  static VtreePath parse(std::string_view text);
  std::string to_string() const { return steps.empty() ? "." : steps; }
  friend bool operator==(const VtreePath&, const VtreePath&) = default;
};

enum class Side { left, right };

class Vtree {
 public:
  struct Node {
    int left = -1;
    int right = -1;
    int parent = -1;
    VarId var = 0;  // leaves only
  };

  Vtree() = default;
  static Vtree leaf(VarId v);
  static Vtree join(const Vtree& l, const Vtree& r);
  /// Unchecked construction, for validators and tests.
  static Vtree from_nodes(std::vector<Node> nodes, int root);
  static Vtree parse(std::string_view text);

  int root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }
  const Node& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  bool is_leaf(int i) const { return node(i).left < 0; }
  std::size_t n_leaves() const { return leaf_order_.size(); }

  /// In-order leaf variables.
  const std::vector<VarId>& leaves() const { return leaf_order_; }
  std::vector<VarId> leaves_under(int i) const;
  /// Leaf node of `v`, or -1.
  int leaf_of(VarId v) const;
  bool contains(VarId v) const { return leaf_of(v) >= 0; }

  /// -1 if the path leaves the tree.
  int at(const VtreePath& p) const;
  VtreePath path_of(int i) const;

  // Leaf-position interval [first, last] of each node (in-order).
  std::size_t first_leaf(int i) const { return span_.at(static_cast<std::size_t>(i)).first; }
  std::size_t last_leaf(int i) const { return span_.at(static_cast<std::size_t>(i)).second; }
  std::size_t n_leaves_under(int i) const { return last_leaf(i) - first_leaf(i) + 1; }
  /// a lies in the subtree rooted at b (a == b allowed).
  bool within(int a, int b) const {
    return first_leaf(b) <= first_leaf(a) && last_leaf(a) <= last_leaf(b);
  }
  int lca(int a, int b) const;
  /// Lowest node whose subtree holds all of `vars`; -1 if vars is empty.
  int lca_of_vars(const std::vector<VarId>& vars) const;

  std::string to_string() const;
  bool is_right_linear() const;

  friend bool operator==(const Vtree& a, const Vtree& b) { return a.to_string() == b.to_string(); }

 private:
  void index();
  int copy_from(const Vtree& other, int n);

  std::vector<Node> nodes_;
  int root_ = -1;
  std::vector<VarId> leaf_order_;
  std::vector<std::pair<std::size_t, std::size_t>> span_;
  std::vector<int> leaf_by_var_;
  std::vector<int> depth_;
};

Vtree right_linear_vtree(const VarOrder& o);
/// Leaf order of a right-linear vtree.
VarOrder as_right_linear_order(const Vtree& t);

/// Full binary, parent links consistent, leaves biject onto `vars`.
bool validate_vtree(const Vtree& t, const std::vector<VarId>& vars);

/// The move(T, x, w, d) restructuring. `w` is resolved after x's leaf has
/// been cut out.
Vtree move(const Vtree& t, VarId x, const VtreePath& w, Side d);

VarOrder single_variable_move(const VarOrder& o, VarId x, std::size_t pos);

struct VtreeMove {
  VtreePath w;
  Side d = Side::left;
};
/// The vtree move that turns right_linear_vtree(o) into
/// right_linear_vtree(single_variable_move(o, x, pos)).
VtreeMove order_move_as_vtree_move(const VarOrder& o, VarId x, std::size_t pos);

/// Vtree over vars 1..n_vars of `formula` following a decomposition of its
/// primal graph.
Vtree vtree_from_decomposition(const TreeDecomposition& td, const CnfFormula& formula);

}  // namespace kcp
