#include "kcp/cnf.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

namespace kcp {

Literal Literal::from_dimacs(std::int64_t value) {
  if (value == 0 || value > INT32_MAX || value < -INT32_MAX) {
    throw std::invalid_argument("literal out of range: " + std::to_string(value));
  }
  return Literal(static_cast<VarId>(value < 0 ? -value : value), value > 0);
}

Clause::Clause(std::vector<Literal> literals) {
  literals_.reserve(literals.size());
  for (Literal lit : literals) {
    if (lit.var() == 0) throw std::invalid_argument("literal with variable 0");
    if (contains(~lit)) {
      throw std::invalid_argument("tautological clause on variable " +
                                  std::to_string(lit.var()));
    }
    if (!contains(lit)) literals_.push_back(lit);
  }
}

Clause::Clause(std::initializer_list<int> dimacs) {
  std::vector<Literal> lits;
  for (int v : dimacs) lits.push_back(Literal::from_dimacs(v));
  *this = Clause(std::move(lits));
}

bool Clause::contains(Literal lit) const {
  return std::find(literals_.begin(), literals_.end(), lit) != literals_.end();
}

bool Clause::mentions(VarId var) const {
  return std::any_of(literals_.begin(), literals_.end(),
                     [var](Literal l) { return l.var() == var; });
}

VarId Clause::max_var() const {
  VarId m = 0;
  for (Literal l : literals_) m = std::max(m, l.var());
  return m;
}

std::vector<VarId> PartialAssignment::support() const {
  std::vector<VarId> out;
  out.reserve(values_.size());
  for (const auto& [v, _] : values_) out.push_back(v);
  return out;
}

PartialAssignment PartialAssignment::merged(const PartialAssignment& other) const {
  PartialAssignment out = *this;
  for (const auto& [v, b] : other.values_) {
    if (out.contains(v)) {
      throw std::invalid_argument("assignments overlap on variable " +
                                  std::to_string(v));
    }
    out.set(v, b);
  }
  return out;
}

PartialAssignment PartialAssignment::falsifying(const Clause& clause) {
  PartialAssignment out;
  for (Literal l : clause) out.set(l.var(), !l.positive());
  return out;
}

CnfFormula::CnfFormula(std::size_t n_vars, std::vector<Clause> clauses)
    : n_vars_(n_vars), clauses_(std::move(clauses)) {
  for (const Clause& c : clauses_) {
    if (c.max_var() > n_vars_) {
      throw std::invalid_argument("literal variable " + std::to_string(c.max_var()) +
                                  " exceeds n_vars " + std::to_string(n_vars_));
    }
  }
}

bool CnfFormula::has_empty_clause() const {
  return std::any_of(clauses_.begin(), clauses_.end(),
                     [](const Clause& c) { return c.empty(); });
}

std::vector<VarId> CnfFormula::mentioned_vars() const {
  std::set<VarId> vars;
  for (const Clause& c : clauses_)
    for (Literal l : c) vars.insert(l.var());
  return {vars.begin(), vars.end()};
}

namespace {

std::int64_t parse_int(std::string_view token, std::size_t line_no) {
  std::int64_t value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("line " + std::to_string(line_no) + ": expected integer, got '" +
                     std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

CnfFormula parse_dimacs(std::string_view text) {
  bool have_header = false;
  std::int64_t n_vars = 0;
  std::int64_t n_clauses = 0;
  std::vector<Clause> clauses;
  std::vector<Literal> pending;
  std::size_t line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0][0] == 'c' || tokens[0][0] == '%') continue;
    if (tokens[0] == "p") {
      if (have_header) throw ParseError("line " + std::to_string(line_no) + ": duplicate header");
      if (tokens.size() != 4 || tokens[1] != "cnf") {
        throw ParseError("line " + std::to_string(line_no) + ": malformed header");
      }
      n_vars = parse_int(tokens[2], line_no);
      n_clauses = parse_int(tokens[3], line_no);
      if (n_vars < 0 || n_clauses < 0) {
        throw ParseError("line " + std::to_string(line_no) + ": malformed header");
      }
      have_header = true;
      continue;
    }
    if (!have_header) {
      throw ParseError("line " + std::to_string(line_no) + ": clause before header");
    }
    for (std::string_view tok : tokens) {
      std::int64_t v = parse_int(tok, line_no);
      if (v == 0) {
        try {
          clauses.emplace_back(std::move(pending));
        } catch (const std::invalid_argument& e) {
          throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        pending.clear();
        continue;
      }
      if (v > n_vars || -v > n_vars) {
        throw ParseError("line " + std::to_string(line_no) + ": literal " +
                         std::to_string(v) + " out of range");
      }
      pending.push_back(Literal::from_dimacs(v));
    }
  }
  if (!have_header) throw ParseError("missing 'p cnf' header");
  if (!pending.empty()) throw ParseError("last clause not terminated by 0");
  if (static_cast<std::int64_t>(clauses.size()) != n_clauses) {
    throw ParseError("header announces " + std::to_string(n_clauses) + " clauses, found " +
                     std::to_string(clauses.size()));
  }
  return CnfFormula(static_cast<std::size_t>(n_vars), std::move(clauses));
}

std::string to_dimacs(const CnfFormula& formula) {
  std::ostringstream out;
  out << "p cnf " << formula.n_vars() << ' ' << formula.size() << '\n';
  for (const Clause& c : formula.clauses()) {
    for (Literal l : c) out << l.to_dimacs() << ' ';
    out << "0\n";
  }
  return out.str();
}

CnfFormula restrict_cnf(const CnfFormula& formula, const PartialAssignment& a) {
  std::vector<Clause> out;
  for (const Clause& c : formula.clauses()) {
    bool satisfied = false;
    std::vector<Literal> kept;
    for (Literal l : c) {
      if (!a.contains(l.var())) {
        kept.push_back(l);
      } else if (l.satisfied_by(a.value(l.var()))) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied) out.emplace_back(std::move(kept));
  }
  return CnfFormula(formula.n_vars(), std::move(out));
}

KlProfile kl_profile(const CnfFormula& formula) {
  KlProfile p;
  std::vector<std::size_t> occ(formula.n_vars() + 1, 0);
  for (const Clause& c : formula.clauses()) {
    p.k = std::max(p.k, c.size());
    for (Literal l : c) p.l = std::max(p.l, ++occ[l.var()]);
  }
  return p;
}

bool evaluate(const CnfFormula& formula, const std::vector<bool>& bits) {
  for (const Clause& c : formula.clauses()) {
    bool sat = false;
    for (Literal l : c) {
      if (l.satisfied_by(bits.at(l.var() - 1))) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

}  // namespace kcp
