#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "kcp/cnf.hpp"
#include "kcp/obdd.hpp"
#include "kcp/proof.hpp"

namespace kcp {

/// A diagram living in one of the kit's per-structure stores.
struct Dia {
  std::size_t slot = 0;
  std::uint32_t id = 0;
  friend bool operator==(const Dia&, const Dia&) = default;
};

/// Uniform access to OBDD / SDD / d-SDNNF stores, one store per distinct
/// structure. The constant false diagram has id 0 in every format.
class DiagramKit {
 public:
  virtual ~DiagramKit() = default;
  virtual Format format() const = 0;

  /// Store for `s`, shared between equal structures.
  std::size_t slot(const Structure& s);
  const Structure& structure(std::size_t slot) const { return structures_.at(slot); }

  /// Parses and validates; throws ParseError naming the defect.
  virtual Dia load(std::size_t slot, const std::vector<std::string>& records) = 0;
  virtual Dia clause(std::size_t slot, const Clause& c) = 0;
  virtual Dia literal(std::size_t slot, Literal l) = 0;
  virtual Dia constant(std::size_t slot, bool value) = 0;
  virtual Dia conjoin(Dia a, Dia b) = 0;
  /// Smaller diagram for the same function where the format allows it.
  virtual Dia compact(Dia a) { return a; }
  virtual bool equivalent(Dia a, Dia b) = 0;
  virtual bool implies(Dia a, Dia b) = 0;
  virtual Dia restrict(Dia a, const PartialAssignment& pa) = 0;
  virtual bool entails_clause(Dia a, const Clause& c) = 0;
  /// The same function re-expressed in another store (same variables).
  virtual Dia transfer(Dia a, std::size_t slot) = 0;
  /// Models over the structure's variables.
  virtual BigCount count(Dia a) = 0;
  virtual std::size_t size(Dia a) const = 0;
  virtual std::vector<std::string> serialize(Dia a) const = 0;
  virtual bool evaluate(Dia a, const std::vector<bool>& bits) const = 0;

  bool is_false(Dia a) const { return a.id == 0; }
  bool is_true(Dia a) const { return a.id == 1; }

  /// OBDD only: e is d with one variable relocated, agreeing on both cofactors.
  virtual bool check_move_certificate(Dia d, Dia e, VarId x);

 protected:
  virtual void open_slot(const Structure& s) = 0;
  void same_slot(Dia a, Dia b) const;

 private:
  std::vector<Structure> structures_;
};

std::unique_ptr<DiagramKit> make_kit(Format f, std::size_t node_limit = kDefaultNodeLimit);

}  // namespace kcp
