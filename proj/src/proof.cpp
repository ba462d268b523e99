#include "kcp/proof.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace kcp {

std::string format_name(Format f) {
  switch (f) {
    case Format::obdd: return "obdd";
    case Format::sdd: return "sdd";
    default: return "dsdnnf";
  }
}

Format parse_format(std::string_view s) {
  if (s == "obdd") return Format::obdd;
  if (s == "sdd") return Format::sdd;
  if (s == "dsdnnf") return Format::dsdnnf;
  throw ParseError("unknown diagram format '" + std::string(s) + "'");
}

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::init: return "init";
    case Rule::join: return "join";
    case Rule::weaken: return "weaken";
    case Rule::reorder: return "reorder";
    default: return "move";
  }
}

const VarOrder& Structure::order() const {
  if (!is_order_) throw std::logic_error("structure is a vtree, not an order");
  return order_;
}

std::vector<VarId> Structure::vars() const {
  std::vector<VarId> v = vtree_.leaves();
  std::sort(v.begin(), v.end());
  return v;
}

std::string Structure::payload() const {
  return is_order_ ? "order " + order_.to_string() : "vtree " + vtree_.to_string();
}

Structure Structure::parse(std::string_view payload) {
  auto sp = payload.find(' ');
  std::string_view kind = payload.substr(0, sp);
  std::string_view rest = sp == std::string_view::npos ? std::string_view{} : payload.substr(sp + 1);
  try {
    if (kind == "order") return Structure(VarOrder::parse(rest));
    if (kind == "vtree") return Structure(Vtree::parse(rest));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("bad structure: ") + e.what());
  }
  throw ParseError("structure must be 'order ...' or 'vtree ...'");
}

const Structure& Proof::structure(const std::string& id) const {
  for (const auto& [sid, s] : structures)
    if (sid == id) return s;
  throw ParseError("unknown structure id " + id);
}

const DiagramEntry& Proof::diagram(const std::string& id) const {
  for (const DiagramEntry& d : diagrams)
    if (d.id == id) return d;
  throw ParseError("unknown diagram id " + id);
}

namespace {

std::vector<std::string> tokens(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

std::size_t to_index(const std::string& t, std::size_t line_no) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size())
    throw ParseError("line " + std::to_string(line_no) + ": expected a number, got '" + t + "'");
  return v;
}

std::string trim(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

// Splits off the first `k` whitespace tokens and returns the remainder verbatim.
std::pair<std::vector<std::string>, std::string> head_tokens(std::string_view s, std::size_t k) {
  std::vector<std::string> head;
  std::size_t i = 0;
  while (head.size() < k) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j == i) break;
    head.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return {head, trim(s.substr(std::min(i, s.size())))};
}

}  // namespace

Proof parse_proof(std::string_view text) {
  Proof p;
  bool header = false;
  std::set<std::string> sids, dids;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == 'c') continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line[0] == 'p') {
      auto t = tokens(line);
      if (header || t.size() < 3 || t.size() > 4 || t[1] != "kcp") throw ParseError(where + "bad header");
      p.format = parse_format(t[2]);
      if (t.size() == 4 && t[3] != "-") {
        std::stringstream rs(t[3]);
        for (std::string r; std::getline(rs, r, ',');) {
          if (r == "join") p.rules.insert(Rule::join);
          else if (r == "weaken" || r == "w") p.rules.insert(Rule::weaken);
          else if (r == "reorder" || r == "r") p.rules.insert(Rule::reorder);
          else if (r == "move" || r == "r*") p.rules.insert(Rule::move);
          else if (r != "init") throw ParseError(where + "unknown rule '" + r + "'");
        }
      }
      header = true;
      continue;
    }
    if (!header) throw ParseError(where + "record before header");
    if (line[0] == 's') {
      auto [h, rest] = head_tokens(line, 2);
      if (h.size() < 2 || h[0] != "s" || rest.empty()) throw ParseError(where + "bad structure record");
      if (!sids.insert(h[1]).second) throw ParseError(where + "duplicate structure id " + h[1]);
      p.structures.emplace_back(h[1], Structure::parse(rest));
      continue;
    }
    if (line[0] == 'd') {
      auto [h, rest] = head_tokens(line, 3);
      if (h.size() < 3 || h[0] != "d") throw ParseError(where + "bad diagram record");
      if (!sids.count(h[2])) throw ParseError(where + "diagram refers to unknown structure " + h[2]);
      if (!dids.insert(h[1]).second) throw ParseError(where + "duplicate diagram id " + h[1]);
      DiagramEntry d{h[1], h[2], {}};
      std::stringstream rs(rest);
      for (std::string r; std::getline(rs, r, ';');)
        if (auto tr = trim(r); !tr.empty()) d.records.push_back(tr);
      p.diagrams.push_back(std::move(d));
      continue;
    }
    if (line[0] != 'L') throw ParseError(where + "unknown record");
    auto t = tokens(line);
    if (t.size() < 3 || t[0] != "L") throw ParseError(where + "bad proof line");
    ProofLine l;
    l.n = to_index(t[1], line_no);
    if (l.n != p.lines.size() + 1) throw ParseError(where + "proof lines must be numbered 1,2,3,...");
    const std::string& r = t[2];
    auto need = [&](std::size_t k) {
      if (t.size() != k) throw ParseError(where + r + " line has the wrong number of fields");
    };
    auto ref = [&](const std::string& tok) {
      std::size_t k = to_index(tok, line_no);
      if (k == 0 || k >= l.n) throw ParseError(where + "reference to line " + tok + " is not an earlier line");
      return k;
    };
    auto diag = [&](const std::string& tok) {
      if (!dids.count(tok)) throw ParseError(where + "unknown diagram id " + tok);
      return tok;
    };
    if (r == "init") {
      need(5);
      l.rule = Rule::init;
      l.clause = to_index(t[3], line_no);
      l.did = diag(t[4]);
    } else if (r == "join") {
      need(6);
      l.rule = Rule::join;
      l.i = ref(t[3]);
      l.j = ref(t[4]);
      l.did = diag(t[5]);
    } else if (r == "weaken") {
      need(5);
      l.rule = Rule::weaken;
      l.i = ref(t[3]);
      l.did = diag(t[4]);
    } else if (r == "move") {
      need(9);
      l.rule = Rule::move;
      l.i = ref(t[3]);
      l.var = static_cast<VarId>(to_index(t[4], line_no));
      try {
        l.w = VtreePath::parse(t[5]);
      } catch (const std::invalid_argument& e) {
        throw ParseError(where + e.what());
      }
      if (t[6] != "l" && t[6] != "r") throw ParseError(where + "move direction must be l or r");
      l.side = t[6] == "l" ? Side::left : Side::right;
      if (!sids.count(t[7])) throw ParseError(where + "unknown structure id " + t[7]);
      l.sid = t[7];
      l.did = diag(t[8]);
    } else if (r == "reorder") {
      if (t.size() < 6 || (t.size() > 6 && t[6] != "cert")) throw ParseError(where + "bad reorder line");
      l.rule = Rule::reorder;
      l.i = ref(t[3]);
      if (!sids.count(t[4])) throw ParseError(where + "unknown structure id " + t[4]);
      l.sid = t[4];
      l.did = diag(t[5]);
      for (std::size_t k = 7; k < t.size(); ++k) l.certs.push_back(diag(t[k]));
    } else {
      throw ParseError(where + "unknown rule '" + r + "'");
    }
    p.lines.push_back(std::move(l));
  }
  if (!header) throw ParseError("missing 'p kcp' header");
  return p;
}

std::string format_proof(const Proof& p) {
  std::ostringstream out;
  out << "p kcp " << format_name(p.format) << ' ';
  if (p.rules.empty()) {
    out << "-";
  } else {
    bool first = true;
    for (Rule r : p.rules) {
      out << (first ? "" : ",") << rule_name(r);
      first = false;
    }
  }
  out << '\n';
  for (const auto& [id, s] : p.structures) out << "s " << id << ' ' << s.payload() << '\n';
  for (const DiagramEntry& d : p.diagrams) {
    out << "d " << d.id << ' ' << d.sid << ' ';
    for (std::size_t k = 0; k < d.records.size(); ++k) out << (k ? " ; " : "") << d.records[k];
    out << '\n';
  }
  for (const ProofLine& l : p.lines) {
    out << "L " << l.n << ' ' << rule_name(l.rule) << ' ';
    switch (l.rule) {
      case Rule::init: out << l.clause << ' ' << l.did; break;
      case Rule::join: out << l.i << ' ' << l.j << ' ' << l.did; break;
      case Rule::weaken: out << l.i << ' ' << l.did; break;
      case Rule::move:
        out << l.i << ' ' << l.var << ' ' << l.w.to_string() << ' ' << (l.side == Side::left ? 'l' : 'r') << ' '
            << l.sid << ' ' << l.did;
        break;
      case Rule::reorder:
        out << l.i << ' ' << l.sid << ' ' << l.did;
        if (!l.certs.empty()) {
          out << " cert";
          for (const std::string& c : l.certs) out << ' ' << c;
        }
        break;
    }
    out << '\n';
  }
  return out.str();
}

ProofWriter::ProofWriter(Format f, std::set<Rule> rules) {
  proof_.format = f;
  rules.erase(Rule::init);
  proof_.rules = std::move(rules);
}

ProofWriter::ProofWriter(Proof seed, const std::set<Rule>& more_rules) : proof_(std::move(seed)) {
  proof_.rules.insert(more_rules.begin(), more_rules.end());
  proof_.rules.erase(Rule::init);
  for (const auto& [id, s] : proof_.structures) structure_ids_.emplace(s.payload(), id);
  for (const DiagramEntry& d : proof_.diagrams) diagram_ids_.emplace(std::make_pair(d.sid, d.records), d.id);
}

std::string ProofWriter::structure(const Structure& s) {
  auto [it, fresh] = structure_ids_.emplace(s.payload(), "");
  if (fresh) {
    it->second = "s" + std::to_string(proof_.structures.size());
    while (std::any_of(proof_.structures.begin(), proof_.structures.end(),
                       [&](const auto& e) { return e.first == it->second; }))
      it->second += "_";
    proof_.structures.emplace_back(it->second, s);
  }
  return it->second;
}

std::string ProofWriter::diagram(const std::string& sid, std::vector<std::string> records) {
  auto [it, fresh] = diagram_ids_.emplace(std::make_pair(sid, records), "");
  if (fresh) {
    it->second = "d" + std::to_string(proof_.diagrams.size());
    while (std::any_of(proof_.diagrams.begin(), proof_.diagrams.end(),
                       [&](const DiagramEntry& e) { return e.id == it->second; }))
      it->second += "_";
    proof_.diagrams.push_back({it->second, sid, std::move(records)});
  }
  return it->second;
}

std::size_t ProofWriter::push(ProofLine line) {
  line.n = proof_.lines.size() + 1;
  proof_.lines.push_back(std::move(line));
  return proof_.lines.size();
}

std::size_t ProofWriter::init(std::size_t clause, const std::string& did) {
  ProofLine l;
  l.rule = Rule::init;
  l.clause = clause;
  l.did = did;
  return push(std::move(l));
}

std::size_t ProofWriter::join(std::size_t i, std::size_t j, const std::string& did) {
  ProofLine l;
  l.rule = Rule::join;
  l.i = i;
  l.j = j;
  l.did = did;
  return push(std::move(l));
}

std::size_t ProofWriter::weaken(std::size_t i, const std::string& did) {
  ProofLine l;
  l.rule = Rule::weaken;
  l.i = i;
  l.did = did;
  return push(std::move(l));
}

std::size_t ProofWriter::reorder(std::size_t i, const std::string& sid, const std::string& did,
                                 std::vector<std::string> certs) {
  ProofLine l;
  l.rule = Rule::reorder;
  l.i = i;
  l.sid = sid;
  l.did = did;
  l.certs = std::move(certs);
  return push(std::move(l));
}

std::size_t ProofWriter::move(std::size_t i, VarId x, const VtreePath& w, Side d, const std::string& sid,
                              const std::string& did) {
  ProofLine l;
  l.rule = Rule::move;
  l.i = i;
  l.var = x;
  l.w = w;
  l.side = d;
  l.sid = sid;
  l.did = did;
  return push(std::move(l));
}

}  // namespace kcp
