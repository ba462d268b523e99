#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kcp/cnf.hpp"
#include "kcp/structure.hpp"

namespace kcp {

enum class Format { obdd, sdd, dsdnnf };
enum class Rule { init, join, weaken, reorder, move };

std::string format_name(Format f);
Format parse_format(std::string_view s);
std::string rule_name(Rule r);

/// A variable order (OBDD proofs) or a vtree (SDD and d-SDNNF proofs).
class Structure {
 public:
  explicit Structure(VarOrder o) : is_order_(true), order_(std::move(o)), vtree_(right_linear_vtree(order_)) {}
  explicit Structure(Vtree t) : is_order_(false), vtree_(std::move(t)) {}

  bool is_order() const { return is_order_; }
  const VarOrder& order() const;
  /// The vtree itself, or the right-linear vtree of the order.
  const Vtree& vtree() const { return vtree_; }
  std::vector<VarId> vars() const;  // ascending
  /// `order 1 2 3` or `vtree (1 (2 3))`.
  std::string payload() const;
  static Structure parse(std::string_view payload);

  friend bool operator==(const Structure& a, const Structure& b) { return a.payload() == b.payload(); }

 private:
  bool is_order_;
  VarOrder order_;
  Vtree vtree_;
};

struct ProofLine {
  std::size_t n = 0;  // 1-based, sequential
  Rule rule = Rule::init;
  std::size_t clause = 0;  // init: 0-based clause index
  std::size_t i = 0, j = 0;  // referenced line numbers
  VarId var = 0;             // move
  VtreePath w;               // move
  Side side = Side::left;    // move
  std::string sid;           // move/reorder target structure
  std::string did;
  std::vector<std::string> certs;  // reorder
};

struct DiagramEntry {
  std::string id;
  std::string sid;
  std::vector<std::string> records;
};

struct Proof {
  Format format = Format::obdd;
  std::set<Rule> rules;  // init is implicit
  std::vector<std::pair<std::string, Structure>> structures;
  std::vector<DiagramEntry> diagrams;
  std::vector<ProofLine> lines;

  const Structure& structure(const std::string& id) const;
  const DiagramEntry& diagram(const std::string& id) const;
  bool allows(Rule r) const { return r == Rule::init || rules.count(r) != 0; }
  bool weakening_free() const { return !rules.count(Rule::weaken); }
};

/// Line-oriented text: `p kcp <format> <rules>`, `s`, `d`, `L` records.
Proof parse_proof(std::string_view text);
std::string format_proof(const Proof& p);

/// Builds proofs line by line, sharing identical structures and diagrams.
class ProofWriter {
 public:
  ProofWriter(Format f, std::set<Rule> rules);
  /// Continues an existing proof; new rules are added to its header.
  ProofWriter(Proof seed, const std::set<Rule>& more_rules);

  std::string structure(const Structure& s);
  std::string diagram(const std::string& sid, std::vector<std::string> records);

  std::size_t init(std::size_t clause, const std::string& did);
  std::size_t join(std::size_t i, std::size_t j, const std::string& did);
  std::size_t weaken(std::size_t i, const std::string& did);
  std::size_t reorder(std::size_t i, const std::string& sid, const std::string& did,
                      std::vector<std::string> certs = {});
  std::size_t move(std::size_t i, VarId x, const VtreePath& w, Side d, const std::string& sid,
                   const std::string& did);

  std::size_t n_lines() const { return proof_.lines.size(); }
  const Proof& proof() const { return proof_; }
  Proof take() { return std::move(proof_); }

 private:
  std::size_t push(ProofLine line);
  Proof proof_;
  std::map<std::string, std::string> structure_ids_;
  std::map<std::pair<std::string, std::vector<std::string>>, std::string> diagram_ids_;
};

}  // namespace kcp
