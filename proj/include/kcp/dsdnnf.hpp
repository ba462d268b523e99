#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "kcp/cnf.hpp"
#include "kcp/obdd.hpp"
#include "kcp/sdd.hpp"
#include "kcp/structure.hpp"

namespace kcp {

using GateId = std::uint32_t;
inline constexpr GateId kGateFalse = 0;
inline constexpr GateId kGateTrue = 1;

inline constexpr std::size_t kDefaultProductCap = 10'000'000;

/// Binary NNF circuits over a vtree, negations folded into literal leaves.
/// Gates are hash-consed; `mk_*` simplify constants, `raw_*` do not.
class DnnfManager {
 public:
  enum class Kind : std::uint8_t { constant, literal, conj, disj };
  using VarSet = boost::dynamic_bitset<>;

  explicit DnnfManager(Vtree vtree, std::size_t gate_limit = kDefaultNodeLimit);

  const Vtree& vtree() const { return vtree_; }
  /// Companion SDD manager on the same vtree (clause and table circuits).
  SddManager& sdd() { return *sdd_; }
  std::size_t n_gates() const { return gates_.size(); }
  std::size_t gate_limit() const { return gate_limit_; }

  Kind kind(GateId g) const { return gates_[g].kind; }
  GateId left(GateId g) const { return gates_[g].a; }
  GateId right(GateId g) const { return gates_[g].b; }
  Literal lit(GateId g) const { return gates_[g].lit; }
  const VarSet& vars(GateId g) const { return gates_[g].vars; }
  /// Lowest vtree node covering var(g); -1 for constants.
  int vnode(GateId g) const { return gates_[g].vnode; }

  GateId literal(Literal l);
  GateId raw_and(GateId a, GateId b);
  GateId raw_or(GateId a, GateId b);
  GateId mk_and(GateId a, GateId b);
  GateId mk_or(GateId a, GateId b);

  GateId clause(const Clause& c);
  GateId from_sdd(const SddManager& m, SddId root);
  /// OBDD over order o becomes a circuit on right_linear_vtree(o), which
  /// must be this manager's vtree.
  GateId from_obdd(const ObddManager& m, NodeId root);
  GateId import(const DnnfManager& src, GateId root);
  /// Rebuilds `a` through mk_and/mk_or, dropping constant inputs.
  GateId simplify(GateId a);

  GateId conjoin(GateId a, GateId b);
  /// Same function, rebuilt through the SDD on this vtree. Conjoin never
  /// merges or-branches, so long folds grow without this.
  GateId compact(GateId a);
  GateId restrict(GateId a, const PartialAssignment& assignment);

  /// Models over all vtree variables; needs a deterministic, decomposable input.
  BigCount count(GateId a);
  BigCount count(GateId a, const std::vector<VarId>& over);
  bool is_unsat(GateId a);
  bool clausal_entails(GateId a, const Clause& c);
  bool implies(GateId a, GateId b);
  bool equiv(GateId a, GateId b);
  bool join_check(GateId a, GateId b, GateId c);

  /// Empty string if every gate under `a` respects the vtree; otherwise the
  /// first offending gate and why. `smooth` additionally demands equal
  /// variable sets under or-gates.
  std::string validate_structured(GateId a, bool smooth = false) const;
  /// Empty string if every or-gate's children are mutually exclusive.
  /// Throws ResourceLimit if the pairwise products exceed `product_cap` gates.
  std::string validate_deterministic(GateId a, std::size_t product_cap = kDefaultProductCap);

  /// Gates reachable from `a`, leaves and constants included.
  std::size_t size(GateId a) const;
  std::vector<GateId> reachable(GateId a) const;  // children first
  bool evaluate(GateId a, const std::vector<bool>& bits) const;

  /// `g <id> AND|OR <a> <b>`, `g <id> LIT <l>`, `g <id> TRUE|FALSE`, `root <id>`.
  std::vector<std::string> serialize(GateId a) const;
  /// Builds raw gates, so the structure on file is what gets validated.
  GateId load(const std::vector<std::string>& records);

 private:
  struct Gate {
    Kind kind;
    GateId a;
    GateId b;
    Literal lit;
    int vnode;
    VarSet vars;
  };
  struct Key {
    Kind kind;
    GateId a, b;
    std::int32_t lit;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return (std::size_t(k.kind) * 0x9E3779B97F4A7C15ull) ^ (std::size_t{k.a} << 32) ^ k.b ^
             (std::size_t(std::uint32_t(k.lit)) << 16);
    }
  };
  GateId intern(Kind kind, GateId a, GateId b, Literal lit);
  std::pair<GateId, GateId> oriented(GateId g) const;

  Vtree vtree_;
  std::size_t gate_limit_;
  std::unique_ptr<SddManager> sdd_;
  std::vector<Gate> gates_;
  std::unordered_map<Key, GateId, KeyHash> unique_;
  std::unordered_map<std::uint64_t, GateId> conjoin_cache_;
  std::unordered_map<GateId, BigCount> count_cache_;
  std::unordered_map<GateId, bool> sat_cache_;
};

std::string dnnf_to_text(const DnnfManager& m, GateId a);
/// Stand-alone circuit file; the vtree line is required here.
std::pair<std::shared_ptr<DnnfManager>, GateId> dnnf_from_text(const std::string& text);

}  // namespace kcp
