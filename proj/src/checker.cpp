#include "kcp/checker.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>

#include <nlohmann/json.hpp>
#include <omp.h>

#include "kcp/kit.hpp"

namespace kcp {

std::string status_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::accepted: return "accepted";
    case VerdictStatus::rejected: return "rejected";
    case VerdictStatus::resource: return "resource";
    default: return "malformed";
  }
}

std::string verdict_json(const Verdict& v) {
  nlohmann::json j;
  j["schema_version"] = kVerdictSchemaVersion;
  j["accepted"] = v.accepted;
  j["status"] = status_name(v.status);
  j["failing_line"] = v.failing_line ? nlohmann::json(*v.failing_line) : nlohmann::json(nullptr);
  j["reason"] = v.reason;
  j["stats"] = {{"lines", v.stats.lines},
                {"max_diagram_size", v.stats.max_diagram_size},
                {"total_nodes", v.stats.total_nodes}};
  return j.dump();
}

std::vector<std::vector<std::size_t>> track_clause_sets(const CnfFormula&, const Proof& p) {
  std::vector<std::vector<std::size_t>> sets;
  for (const ProofLine& l : p.lines) {
    switch (l.rule) {
      case Rule::init: sets.push_back({l.clause}); break;
      case Rule::join: {
        const auto& a = sets.at(l.i - 1);
        const auto& b = sets.at(l.j - 1);
        std::vector<std::size_t> u;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
        sets.push_back(std::move(u));
        break;
      }
      case Rule::weaken:
        throw std::invalid_argument("clause sets are undefined after weakening (line " + std::to_string(l.n) + ")");
      default: sets.push_back(sets.at(l.i - 1)); break;
    }
  }
  return sets;
}

namespace {

struct Failure {
  VerdictStatus status;
  std::string reason;
};

struct LineResult {
  std::optional<Failure> failure;
  std::size_t size = 0;
};

// Shared read-only facts computed once before the line checks.
struct Context {
  const CnfFormula& phi;
  const Proof& p;
  const CheckOptions& opts;
  std::vector<std::vector<std::size_t>> clause_sets;  // empty unless weakening-free
};

class Loader {
 public:
  Loader(const Context& ctx) : ctx_(ctx), kit_(make_kit(ctx.p.format, ctx.opts.node_limit)) {}
  DiagramKit& kit() { return *kit_; }

  Dia get(const std::string& did) {
    if (auto it = cache_.find(did); it != cache_.end()) return it->second;
    const DiagramEntry& e = ctx_.p.diagram(did);
    std::size_t s = kit_->slot(ctx_.p.structure(e.sid));
    Dia d;
    try {
      d = kit_->load(s, e.records);
    } catch (const ParseError& err) {
      throw ParseError("diagram " + did + " invalid: " + err.what());
    }
    cache_.emplace(did, d);
    return d;
  }
  Dia line(std::size_t n) { return get(ctx_.p.lines.at(n - 1).did); }
  const Structure& structure_of(const std::string& did) const {
    return ctx_.p.structure(ctx_.p.diagram(did).sid);
  }

 private:
  const Context& ctx_;
  std::unique_ptr<DiagramKit> kit_;
  std::map<std::string, Dia> cache_;
};

std::optional<Failure> reject(std::string why) { return Failure{VerdictStatus::rejected, std::move(why)}; }

std::optional<Failure> check_move(const Context& ctx, Loader& ld, const ProofLine& l, Dia di, Dia d) {
  DiagramKit& kit = ld.kit();
  const Structure& from = kit.structure(di.slot);
  const Structure& target = ctx.p.structure(l.sid);
  if (!(ld.structure_of(l.did) == target)) return reject("move: diagram is not over the line's structure");
  Vtree moved = move(from.vtree(), l.var, l.w, l.side);
  if (!(moved == target.vtree())) return reject("move: structure is not the moved vtree");
  const VarId x = l.var;
  Dia d0 = kit.transfer(kit.restrict(di, {{x, false}}), d.slot);
  Dia d1 = kit.transfer(kit.restrict(di, {{x, true}}), d.slot);
  Dia d0p = kit.conjoin(d0, kit.literal(d.slot, Literal(x, false)));
  Dia d1p = kit.conjoin(d1, kit.literal(d.slot, Literal(x, true)));
  const BigCount c0 = kit.count(d0p), c1 = kit.count(d1p);
  if (c0 != kit.count(kit.conjoin(d0p, d)) || c1 != kit.count(kit.conjoin(d1p, d)) || c0 + c1 != kit.count(d))
    return reject("move: count check failed");
  return std::nullopt;
}

std::optional<Failure> check_reorder(const Context& ctx, Loader& ld, const ProofLine& l, Dia di, Dia d) {
  DiagramKit& kit = ld.kit();
  const Structure& target = ctx.p.structure(l.sid);
  if (!(ld.structure_of(l.did) == target)) return reject("reorder: diagram is not over the line's structure");
  if (di.slot == d.slot) return reject("reorder: structure unchanged");
  if (kit.structure(di.slot).vars() != target.vars()) return reject("reorder: variable sets differ");
  // A bare reorder in a weakening system is a chain of one move.
  if (!l.certs.empty() || !ctx.p.weakening_free()) {
    if (ctx.p.format != Format::obdd) return reject("reorder: certificates exist for OBDD proofs only");
    std::vector<Dia> chain{di};
    for (const std::string& c : l.certs) chain.push_back(ld.get(c));
    chain.push_back(d);
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      VarId x = 0;
      try {
        x = moved_variable(kit.structure(chain[k].slot).order(), kit.structure(chain[k + 1].slot).order());
      } catch (const std::invalid_argument&) {
        return reject("reorder: certificate step " + std::to_string(k + 1) + " moves more than one variable");
      }
      if (x == 0) return reject("reorder: certificate step " + std::to_string(k + 1) + " does not move anything");
      if (!kit.check_move_certificate(chain[k], chain[k + 1], x))
        return reject("reorder: certificate step " + std::to_string(k + 1) + " changes the function");
    }
    return std::nullopt;
  }
  if (kit.count(di) != kit.count(d)) return reject("reorder: model counts differ");
  for (std::size_t c : ctx.clause_sets.at(l.n - 1))
    if (!kit.entails_clause(d, ctx.phi.clause(c)))
      return reject("reorder: new diagram does not entail clause " + std::to_string(c));
  return std::nullopt;
}

LineResult check_line(const Context& ctx, Loader& ld, const ProofLine& l) {
  LineResult out;
  try {
    if (!ctx.p.allows(l.rule)) {
      out.failure = reject("rule " + rule_name(l.rule) + " not allowed by the header");
      return out;
    }
    DiagramKit& kit = ld.kit();
    Dia d = ld.get(l.did);
    out.size = kit.size(d);
    switch (l.rule) {
      case Rule::init:
        if (l.clause >= ctx.phi.size()) out.failure = reject("init: clause index out of range");
        else if (!kit.equivalent(d, kit.clause(d.slot, ctx.phi.clause(l.clause))))
          out.failure = reject("init diagram is not the clause");
        break;
      case Rule::join: {
        Dia a = ld.line(l.i), b = ld.line(l.j);
        if (a.slot != d.slot || b.slot != d.slot) out.failure = reject("join: structures differ");
        else if (!kit.equivalent(kit.conjoin(a, b), d)) out.failure = reject("join mismatch");
        break;
      }
      case Rule::weaken: {
        Dia a = ld.line(l.i);
        if (a.slot != d.slot) out.failure = reject("weaken: structures differ");
        else if (!kit.implies(a, d)) out.failure = reject("weakening not implied");
        break;
      }
      case Rule::reorder: out.failure = check_reorder(ctx, ld, l, ld.line(l.i), d); break;
      case Rule::move: out.failure = check_move(ctx, ld, l, ld.line(l.i), d); break;
    }
    if (!out.failure && ctx.opts.refutation && l.n == ctx.p.lines.size() && !kit.is_false(d))
      out.failure = reject("final line is not the constant-false diagram");
  } catch (const ResourceLimit& e) {
    out.failure = Failure{VerdictStatus::resource, e.what()};
  } catch (const ParseError& e) {
    out.failure = reject(e.what());
  } catch (const std::invalid_argument& e) {
    out.failure = reject(e.what());
  }
  return out;
}

// Checks that do not need any diagram.
std::optional<Verdict> static_checks(const CnfFormula& phi, const Proof& p, Context& ctx) {
  auto bad = [](std::string why) {
    Verdict v;
    v.status = VerdictStatus::malformed;
    v.reason = std::move(why);
    return v;
  };
  if (p.format != Format::obdd && p.rules.count(Rule::reorder) && p.rules.count(Rule::weaken))
    return bad("reorder together with weakening is only verifiable for OBDD proofs");
  const auto mentioned = phi.mentioned_vars();
  for (const auto& [id, s] : p.structures) {
    if (s.is_order() != (p.format == Format::obdd))
      return bad("structure " + id + " has the wrong kind for " + format_name(p.format) + " proofs");
    auto vars = s.vars();
    if (!std::includes(vars.begin(), vars.end(), mentioned.begin(), mentioned.end()))
      return bad("structure " + id + " misses variables of the formula");
  }
  if (p.lines.empty() && ctx.opts.refutation) return bad("empty proof");
  if (p.weakening_free()) ctx.clause_sets = track_clause_sets(phi, p);
  return std::nullopt;
}

Verdict aggregate(const Proof& p, const std::vector<LineResult>& results) {
  Verdict v;
  v.stats.lines = p.lines.size();
  std::set<std::string> seen;
  for (std::size_t k = 0; k < results.size(); ++k) {
    if (results[k].failure) {
      v.status = results[k].failure->status;
      v.failing_line = k + 1;
      v.reason = results[k].failure->reason;
      return v;
    }
    v.stats.max_diagram_size = std::max(v.stats.max_diagram_size, results[k].size);
    if (seen.insert(p.lines[k].did).second) v.stats.total_nodes += results[k].size;
  }
  v.accepted = true;
  v.status = VerdictStatus::accepted;
  return v;
}

}  // namespace

namespace serial {
Verdict check_proof(const CnfFormula& phi, const Proof& p, const CheckOptions& opts) {
  Context ctx{phi, p, opts, {}};
  if (auto v = static_checks(phi, p, ctx)) return *v;
  Loader ld(ctx);
  std::vector<LineResult> results;
  for (const ProofLine& l : p.lines) {
    results.push_back(check_line(ctx, ld, l));
    if (results.back().failure) break;
  }
  return aggregate(p, results);
}
}  // namespace serial

namespace parallel {
Verdict check_proof(const CnfFormula& phi, const Proof& p, const CheckOptions& opts) {
  Context ctx{phi, p, opts, {}};
  if (auto v = static_checks(phi, p, ctx)) return *v;
  const std::int64_t n = static_cast<std::int64_t>(p.lines.size());
  std::vector<LineResult> results(p.lines.size());
  std::atomic<std::int64_t> first_fail{n};
#pragma omp parallel num_threads(static_cast<int>(std::max<std::size_t>(1, opts.jobs)))
  {
    Loader ld(ctx);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t k = 0; k < n; ++k) {
      if (k > first_fail.load(std::memory_order_relaxed)) continue;
      results[k] = check_line(ctx, ld, p.lines[k]);
      if (results[k].failure) {
        std::int64_t cur = first_fail.load();
        while (k < cur && !first_fail.compare_exchange_weak(cur, k)) {
        }
      }
    }
  }
  results.resize(static_cast<std::size_t>(std::min(n, first_fail.load() + 1)));
  return aggregate(p, results);
}
}  // namespace parallel

Verdict check_proof(const CnfFormula& phi, const Proof& p, const CheckOptions& opts) {
  return opts.jobs <= 1 ? serial::check_proof(phi, p, opts) : parallel::check_proof(phi, p, opts);
}

Verdict check_proof_text(const CnfFormula& phi, std::string_view text, const CheckOptions& opts) {
  Proof p;
  try {
    p = parse_proof(text);
  } catch (const ParseError& e) {
    Verdict v;
    v.status = VerdictStatus::malformed;
    v.reason = e.what();
    return v;
  }
  return check_proof(phi, p, opts);
}

Proof restrict_proof(const CnfFormula& phi, const Proof& p, const PartialAssignment& a, std::size_t node_limit) {
  auto kit = make_kit(p.format, node_limit);
  std::map<std::string, Dia> loaded;
  auto get = [&](const std::string& did) {
    if (auto it = loaded.find(did); it != loaded.end()) return it->second;
    const DiagramEntry& e = p.diagram(did);
    Dia d = kit->load(kit->slot(p.structure(e.sid)), e.records);
    loaded.emplace(did, d);
    return d;
  };
  // old clause index -> index in restrict_cnf(phi, a), or none if satisfied
  std::vector<std::optional<std::size_t>> renumber;
  std::size_t next = 0;
  for (const Clause& c : phi.clauses()) {
    bool sat = std::any_of(c.begin(), c.end(), [&](Literal l) {
      return a.contains(l.var()) && l.satisfied_by(a.value(l.var()));
    });
    renumber.push_back(sat ? std::nullopt : std::optional<std::size_t>(next++));
  }

  ProofWriter w(p.format, p.rules);
  std::vector<Dia> produced(1);  // per new line, the restricted diagram
  Dia last_emitted;
  auto emit = [&](Dia d) {
    last_emitted = kit->restrict(d, a);
    return w.diagram(w.structure(kit->structure(last_emitted.slot)), kit->serialize(last_emitted));
  };
  auto record = [&](std::size_t line) {
    produced.resize(line + 1);
    produced[line] = last_emitted;
    return line;
  };
  constexpr std::size_t kTop = 0;
  std::vector<std::size_t> alias(p.lines.size() + 1, kTop);  // old line -> new line, kTop = dropped
  for (const ProofLine& l : p.lines) {
    std::size_t& out = alias[l.n];
    switch (l.rule) {
      case Rule::init:
        if (l.clause >= renumber.size()) throw std::invalid_argument("init: clause index out of range");
        if (renumber[l.clause]) {
          std::string did = emit(get(l.did));
          out = record(w.init(*renumber[l.clause], did));
        }
        break;
      case Rule::join: {
        std::size_t i = alias[l.i], j = alias[l.j];
        if (i == kTop) {
          out = j;
        } else if (j == kTop) {
          out = i;
        } else {
          std::string did = emit(get(l.did));
          out = record(w.join(i, j, did));
        }
        break;
      }
      case Rule::weaken:
        if (alias[l.i] != kTop) {
          std::string did = emit(get(l.did));
          out = record(w.weaken(alias[l.i], did));
        }
        break;
      case Rule::reorder: {
        if (alias[l.i] == kTop) break;
        std::vector<std::string> certs;
        for (const std::string& c : l.certs) certs.push_back(emit(get(c)));
        std::string did = emit(get(l.did));
        out = record(w.reorder(alias[l.i], w.structure(p.structure(l.sid)), did, std::move(certs)));
        break;
      }
      case Rule::move:
        if (alias[l.i] != kTop) {
          std::string did = emit(get(l.did));
          out = record(w.move(alias[l.i], l.var, l.w, l.side, w.structure(p.structure(l.sid)), did));
        }
        break;
    }
  }
  if (!p.lines.empty()) {
    const std::size_t last = alias[p.lines.size()];
    if (last == kTop) throw std::invalid_argument("restricted proof collapses to the constant-true diagram");
    const Dia d = produced[last];
    if (last != w.n_lines() || !kit->is_false(d)) {
      Dia f = kit->constant(d.slot, false);
      w.join(last, last, w.diagram(w.structure(kit->structure(d.slot)), kit->serialize(f)));
    }
  }
  return w.take();
}

}  // namespace kcp
