#include "kcp/resolution.hpp"

#include <sstream>

#include "kcp/obdd.hpp"

namespace kcp {

std::size_t ResolutionProof::n_resolutions() const {
  std::size_t k = 0;
  for (const ResolutionStep& s : steps) k += s.kind == ResolutionStep::Kind::res;
  return k;
}

ResolutionProof parse_resolution(std::string_view text) {
  ResolutionProof r;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag, kind;
    if (!(ls >> tag) || tag[0] == 'c') continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    std::size_t n = 0;
    if (tag != "r" || !(ls >> n >> kind)) throw ParseError(where + "expected 'r <n> input|res ...'");
    if (n != r.steps.size() + 1) throw ParseError(where + "steps must be numbered 1,2,3,...");
    ResolutionStep s;
    if (kind == "input") {
      if (!(ls >> s.clause)) throw ParseError(where + "input step needs a clause index");
    } else if (kind == "res") {
      s.kind = ResolutionStep::Kind::res;
      if (!(ls >> s.i >> s.j >> s.pivot)) throw ParseError(where + "res step needs <i> <j> <pivot>");
    } else {
      throw ParseError(where + "unknown step kind '" + kind + "'");
    }
    std::string junk;
    if (ls >> junk) throw ParseError(where + "trailing tokens");
    r.steps.push_back(s);
  }
  return r;
}

std::string format_resolution(const ResolutionProof& r) {
  std::ostringstream out;
  for (std::size_t k = 0; k < r.steps.size(); ++k) {
    const ResolutionStep& s = r.steps[k];
    out << "r " << k + 1;
    if (s.kind == ResolutionStep::Kind::input) out << " input " << s.clause << '\n';
    else out << " res " << s.i << ' ' << s.j << ' ' << s.pivot << '\n';
  }
  return out.str();
}

std::vector<Clause> resolution_clauses(const CnfFormula& phi, const ResolutionProof& r) {
  std::vector<Clause> out;
  for (std::size_t k = 0; k < r.steps.size(); ++k) {
    const ResolutionStep& s = r.steps[k];
    const std::string where = "step " + std::to_string(k + 1) + ": ";
    if (s.kind == ResolutionStep::Kind::input) {
      if (s.clause >= phi.size()) throw std::invalid_argument(where + "clause index out of range");
      out.push_back(phi.clause(s.clause));
      continue;
    }
    if (s.i == 0 || s.j == 0 || s.i > k || s.j > k) throw std::invalid_argument(where + "dangling reference");
    const Clause& a = out[s.i - 1];
    const Clause& b = out[s.j - 1];
    const Literal p(s.pivot, true);
    const Clause* pos = nullptr;
    const Clause* neg = nullptr;
    if (a.contains(p) && b.contains(~p)) pos = &a, neg = &b;
    else if (b.contains(p) && a.contains(~p)) pos = &b, neg = &a;
    else throw std::invalid_argument(where + "bad pivot " + std::to_string(s.pivot));
    std::vector<Literal> lits;
    for (Literal l : *pos)
      if (l != p) lits.push_back(l);
    for (Literal l : *neg)
      if (l != ~p) lits.push_back(l);
    try {
      out.emplace_back(std::move(lits));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument(where + "resolvent is tautological");
    }
  }
  return out;
}

Verdict check_resolution(const CnfFormula& phi, const ResolutionProof& r) {
  Verdict v;
  v.stats.lines = r.steps.size();
  try {
    auto clauses = resolution_clauses(phi, r);
    if (clauses.empty() || !clauses.back().empty()) {
      v.failing_line = r.steps.size();
      v.reason = "last clause is not empty";
      return v;
    }
    for (const Clause& c : clauses) v.stats.max_diagram_size = std::max(v.stats.max_diagram_size, c.size());
  } catch (const std::invalid_argument& e) {
    std::string what = e.what();
    v.reason = what;
    if (what.rfind("step ", 0) == 0) v.failing_line = std::stoul(what.substr(5));
    return v;
  }
  v.accepted = true;
  v.status = VerdictStatus::accepted;
  return v;
}

Proof resolution_to_obddw(const CnfFormula& phi, const ResolutionProof& r, const VarOrder& order) {
  auto clauses = resolution_clauses(phi, r);
  if (clauses.empty() || !clauses.back().empty())
    throw std::invalid_argument("resolution proof does not end in the empty clause");
  ObddManager m(order);
  ProofWriter w(Format::obdd, {Rule::join, Rule::weaken});
  const std::string sid = w.structure(Structure(order));
  auto put = [&](NodeId n) { return w.diagram(sid, m.serialize(n)); };
  std::vector<std::size_t> line(r.steps.size());
  std::vector<NodeId> node(r.steps.size());
  for (std::size_t k = 0; k < r.steps.size(); ++k) {
    const ResolutionStep& s = r.steps[k];
    node[k] = m.clause(clauses[k]);
    if (s.kind == ResolutionStep::Kind::input) {
      line[k] = w.init(s.clause, put(node[k]));
    } else {
      NodeId both = m.conjoin(node[s.i - 1], node[s.j - 1]);
      std::size_t joined = w.join(line[s.i - 1], line[s.j - 1], put(both));
      line[k] = w.weaken(joined, put(node[k]));
    }
  }
  return w.take();
}

}  // namespace kcp
