#include "kcp/kit.hpp"

#include "kcp/dsdnnf.hpp"
#include "kcp/obdd.hpp"
#include "kcp/sdd.hpp"

namespace kcp {

std::size_t DiagramKit::slot(const Structure& s) {
  for (std::size_t k = 0; k < structures_.size(); ++k)
    if (structures_[k] == s) return k;
  open_slot(s);
  structures_.push_back(s);
  return structures_.size() - 1;
}

void DiagramKit::same_slot(Dia a, Dia b) const {
  if (a.slot != b.slot) throw std::invalid_argument("diagrams live in different structures");
}

bool DiagramKit::check_move_certificate(Dia, Dia, VarId) {
  throw std::logic_error("move certificates exist for OBDDs only");
}

namespace {

class ObddKit final : public DiagramKit {
 public:
  explicit ObddKit(std::size_t limit) : limit_(limit) {}
  Format format() const override { return Format::obdd; }

  Dia load(std::size_t s, const std::vector<std::string>& records) override {
    return {s, m(s).load(records)};
  }
  Dia clause(std::size_t s, const Clause& c) override { return {s, m(s).clause(c)}; }
  Dia literal(std::size_t s, Literal l) override { return {s, m(s).literal(l)}; }
  Dia constant(std::size_t s, bool v) override { return {s, v ? kObddTrue : kObddFalse}; }
  Dia conjoin(Dia a, Dia b) override {
    same_slot(a, b);
    return {a.slot, m(a.slot).conjoin(a.id, b.id)};
  }
  bool equivalent(Dia a, Dia b) override {
    same_slot(a, b);
    return a.id == b.id;
  }
  bool implies(Dia a, Dia b) override {
    same_slot(a, b);
    return m(a.slot).conjoin(a.id, b.id) == a.id;
  }
  Dia restrict(Dia a, const PartialAssignment& pa) override { return {a.slot, m(a.slot).restrict(a.id, pa)}; }
  bool entails_clause(Dia a, const Clause& c) override {
    return m(a.slot).restrict(a.id, PartialAssignment::falsifying(c)) == kObddFalse;
  }
  Dia transfer(Dia a, std::size_t s) override { return {s, m(s).import(m(a.slot), a.id)}; }
  BigCount count(Dia a) override { return m(a.slot).count(a.id); }
  std::size_t size(Dia a) const override { return managers_[a.slot]->size(a.id); }
  std::vector<std::string> serialize(Dia a) const override { return managers_[a.slot]->serialize(a.id); }
  bool evaluate(Dia a, const std::vector<bool>& bits) const override {
    return managers_[a.slot]->evaluate(a.id, bits);
  }
  bool check_move_certificate(Dia d, Dia e, VarId x) override {
    return obdd_check_move(Obdd{managers_[d.slot], d.id}, Obdd{managers_[e.slot], e.id}, x);
  }

 protected:
  void open_slot(const Structure& s) override {
    if (!s.is_order()) throw ParseError("OBDD proofs need variable orders, got a vtree");
    managers_.push_back(std::make_shared<ObddManager>(s.order(), limit_));
  }

 private:
  ObddManager& m(std::size_t s) { return *managers_.at(s); }
  std::size_t limit_;
  std::vector<std::shared_ptr<ObddManager>> managers_;
};

class SddKit final : public DiagramKit {
 public:
  explicit SddKit(std::size_t limit) : limit_(limit) {}
  Format format() const override { return Format::sdd; }

  Dia load(std::size_t s, const std::vector<std::string>& records) override {
    return {s, m(s).load(records)};
  }
  Dia clause(std::size_t s, const Clause& c) override { return {s, m(s).clause(c)}; }
  Dia literal(std::size_t s, Literal l) override { return {s, m(s).literal(l)}; }
  Dia constant(std::size_t s, bool v) override { return {s, v ? kSddTrue : kSddFalse}; }
  Dia conjoin(Dia a, Dia b) override {
    same_slot(a, b);
    return {a.slot, m(a.slot).conjoin(a.id, b.id)};
  }
  bool equivalent(Dia a, Dia b) override {
    same_slot(a, b);
    return m(a.slot).equivalent(a.id, b.id);
  }
  bool implies(Dia a, Dia b) override {
    same_slot(a, b);
    return m(a.slot).entails(a.id, b.id);
  }
  Dia restrict(Dia a, const PartialAssignment& pa) override { return {a.slot, m(a.slot).restrict(a.id, pa)}; }
  bool entails_clause(Dia a, const Clause& c) override {
    SddManager& mm = m(a.slot);
    return mm.count(mm.restrict(a.id, PartialAssignment::falsifying(c))) == 0;
  }
  Dia transfer(Dia a, std::size_t s) override { return {s, m(s).import(m(a.slot), a.id)}; }
  BigCount count(Dia a) override { return m(a.slot).count(a.id); }
  std::size_t size(Dia a) const override { return managers_[a.slot]->size(a.id); }
  std::vector<std::string> serialize(Dia a) const override { return managers_[a.slot]->serialize(a.id); }
  bool evaluate(Dia a, const std::vector<bool>& bits) const override {
    return managers_[a.slot]->evaluate(a.id, bits);
  }

 protected:
  void open_slot(const Structure& s) override {
    if (s.is_order()) throw ParseError("SDD proofs need vtrees, got a variable order");
    managers_.push_back(std::make_unique<SddManager>(s.vtree(), limit_));
  }

 private:
  SddManager& m(std::size_t s) { return *managers_.at(s); }
  std::size_t limit_;
  std::vector<std::unique_ptr<SddManager>> managers_;
};

class DnnfKit final : public DiagramKit {
 public:
  explicit DnnfKit(std::size_t limit) : limit_(limit) {}
  Format format() const override { return Format::dsdnnf; }

  Dia load(std::size_t s, const std::vector<std::string>& records) override {
    DnnfManager& mm = m(s);
    GateId raw = mm.load(records);
    if (std::string why = mm.validate_structured(raw); !why.empty()) throw ParseError(why);
    GateId g = mm.simplify(raw);
    if (std::string why = mm.validate_deterministic(g); !why.empty()) throw ParseError(why);
    return {s, g};
  }
  Dia clause(std::size_t s, const Clause& c) override { return {s, m(s).clause(c)}; }
  Dia literal(std::size_t s, Literal l) override { return {s, m(s).literal(l)}; }
  Dia constant(std::size_t s, bool v) override { return {s, v ? kGateTrue : kGateFalse}; }
  Dia conjoin(Dia a, Dia b) override {
    same_slot(a, b);
    GateId g = m(a.slot).conjoin(a.id, b.id);
    // products can be unsatisfiable without collapsing to the constant
    return {a.slot, m(a.slot).is_unsat(g) ? kGateFalse : g};
  }
  Dia compact(Dia a) override { return {a.slot, m(a.slot).compact(a.id)}; }
  bool equivalent(Dia a, Dia b) override {
    same_slot(a, b);
    return m(a.slot).equiv(a.id, b.id);
  }
  bool implies(Dia a, Dia b) override {
    same_slot(a, b);
    return m(a.slot).implies(a.id, b.id);
  }
  Dia restrict(Dia a, const PartialAssignment& pa) override { return {a.slot, m(a.slot).restrict(a.id, pa)}; }
  bool entails_clause(Dia a, const Clause& c) override { return m(a.slot).clausal_entails(a.id, c); }
  Dia transfer(Dia a, std::size_t s) override {
    GateId g = m(s).import(m(a.slot), a.id);
    if (std::string why = m(s).validate_structured(g); !why.empty())
      throw std::invalid_argument("circuit does not respect the target vtree: " + why);
    return {s, g};
  }
  BigCount count(Dia a) override { return m(a.slot).count(a.id); }
  std::size_t size(Dia a) const override { return managers_[a.slot]->size(a.id); }
  std::vector<std::string> serialize(Dia a) const override { return managers_[a.slot]->serialize(a.id); }
  bool evaluate(Dia a, const std::vector<bool>& bits) const override {
    return managers_[a.slot]->evaluate(a.id, bits);
  }

 protected:
  void open_slot(const Structure& s) override {
    if (s.is_order()) throw ParseError("d-SDNNF proofs need vtrees, got a variable order");
    managers_.push_back(std::make_unique<DnnfManager>(s.vtree(), limit_));
  }

 private:
  DnnfManager& m(std::size_t s) { return *managers_.at(s); }
  std::size_t limit_;
  std::vector<std::unique_ptr<DnnfManager>> managers_;
};

}  // namespace

std::unique_ptr<DiagramKit> make_kit(Format f, std::size_t node_limit) {
  switch (f) {
    case Format::obdd: return std::make_unique<ObddKit>(node_limit);
    case Format::sdd: return std::make_unique<SddKit>(node_limit);
    default: return std::make_unique<DnnfKit>(node_limit);
  }
}

}  // namespace kcp
