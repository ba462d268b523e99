// kcp: generators, compilers, refuters and checkers on the command line.
//
// Exit status: 0 success/accepted, 1 logical rejection, 2 usage or bad
// input, 3 resource cap.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kcp/checker.hpp"
#include "kcp/graph.hpp"
#include "kcp/kit.hpp"
#include "kcp/refuters.hpp"
#include "kcp/resolution.hpp"
#include "kcp/zoo.hpp"

using namespace kcp;
using nlohmann::json;

namespace {

constexpr int kReportSchemaVersion = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

CnfFormula read_cnf(const std::string& path) {
  try {
    return parse_dimacs(read_file(path));
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

// RunReport: every sidecar and every --json output shares this shape.
json report(const std::string& command, std::vector<std::string> argv_echo) {
  json r;
  r["schema_version"] = kReportSchemaVersion;
  r["command"] = command;
  r["argv"] = std::move(argv_echo);
  r["parameters"] = json::object();
  r["sizes"] = json::object();
  r["timings"] = json::object();
  return r;
}

void emit_report(const json& r, const std::string& out_path, const std::string& explicit_path) {
  std::string p = explicit_path;
  if (p.empty() && !out_path.empty() && out_path != "-") p = out_path + ".json";
  if (p.empty()) return;
  write_file(p, r.dump(2) + "\n");
}

// ---- diagram files: `kcp-diagram <fmt>`, `s <payload>`, records ----

std::string diagram_text(Format f, const Structure& s, const std::vector<std::string>& records) {
  std::string out = "kcp-diagram " + format_name(f) + "\ns " + s.payload() + "\n";
  for (const auto& r : records) out += r + "\n";
  return out;
}

struct LoadedDiagram {
  std::unique_ptr<DiagramKit> kit;
  Dia d;
  Structure s;
};

LoadedDiagram read_diagram(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string head, fmt, sline, line;
  std::getline(in, line);
  std::istringstream h(line);
  h >> head >> fmt;
  if (head != "kcp-diagram") throw UsageError(path + ": not a diagram file");
  std::getline(in, sline);
  if (sline.rfind("s ", 0) != 0) throw UsageError(path + ": missing structure line");
  std::vector<std::string> records;
  while (std::getline(in, line))
    if (!line.empty()) records.push_back(line);
  try {
    Format f = parse_format(fmt);
    Structure s = Structure::parse(std::string_view(sline).substr(2));
    LoadedDiagram out{make_kit(f), {}, s};
    out.d = out.kit->load(out.kit->slot(s), records);
    return out;
  } catch (const std::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// ---- lifted formulas: `<file>.json` sidecar carries the base and roles ----

json lifting_block(const LiftedFormula& z, const std::string& kind) {
  json roles = json::array();
  for (std::size_t v = 0; v < z.roles.size(); ++v)
    roles.push_back({{"var", v + 1}, {"role", role_name(z.roles[v].role)}, {"index", z.roles[v].index}});
  return {{"kind", kind}, {"base_dimacs", to_dimacs(z.base)}, {"roles", roles}};
}

LiftedFormula read_lifted(const std::string& path, const CnfFormula& phi) {
  std::string side = path + ".json";
  json j;
  try {
    j = json::parse(read_file(side));
  } catch (const json::exception& e) {
    throw UsageError(side + ": " + e.what());
  }
  if (!j.contains("lifting") || j["lifting"].value("kind", "") != "z")
    throw UsageError(path + " was not produced by `lift z` (sidecar " + side + " has no z lifting)");
  CnfFormula base;
  try {
    base = parse_dimacs(j["lifting"]["base_dimacs"].get<std::string>());
  } catch (const std::exception& e) {
    throw UsageError(side + ": " + e.what());
  }
  LiftedFormula z = lift_Z(base);
  if (!(z.result == phi)) throw UsageError(path + " does not match the lifting recorded in " + side);
  return z;
}

Structure parse_structure_arg(const std::string& arg, Format f, const CnfFormula& phi) {
  const std::size_t n = std::max<std::size_t>(phi.n_vars(), 1);
  if (arg == "auto" || arg == "identity" || arg == "right-linear") {
    if (f == Format::obdd) return Structure(VarOrder::identity(n));
    return Structure(right_linear_vtree(VarOrder::identity(n)));
  }
  if (arg == "decomposition") {
    Vtree t = vtree_from_decomposition(tree_decomposition(primal_graph(phi)), phi);
    if (f == Format::obdd) return Structure(VarOrder(t.leaves()));
    return Structure(t);
  }
  try {
    if (arg.rfind("order", 0) == 0 || arg.rfind("vtree", 0) == 0) return Structure::parse(arg);
    if (!arg.empty() && arg[0] == '(') return Structure(Vtree::parse(arg));
    return Structure(VarOrder::parse(arg));
  } catch (const std::exception& e) {
    throw UsageError("bad structure '" + arg + "': " + e.what());
  }
}

std::string proof_or_resolution_kind(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    return line.rfind("r ", 0) == 0 ? "resolution" : "kcp";
  }
  return "kcp";
}

int exit_for(const Verdict& v) {
  switch (v.status) {
    case VerdictStatus::accepted: return 0;
    case VerdictStatus::resource: return 3;
    default: return 1;
  }
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string family, out, report_path;
  std::size_t n = 4, d = 3, h = 1, l = 1, m = 8, k = 3, occ = 3;
  std::uint64_t seed = 1;
  std::string graph = "grid";
};

CnfFormula generate(const GenArgs& a, json& params) {
  params["family"] = a.family;
  auto graph_of = [&](const std::string& name) -> Graph {
    if (name == "grid") {
      params["h"] = a.h;
      params["l"] = a.l;
      return grid_family(a.h, a.l);
    }
    if (name == "tree") {
      params["h"] = a.h;
      return complete_binary_tree(a.h);
    }
    if (name == "path") {
      params["l"] = a.l;
      return path_graph(a.l);
    }
    if (name == "complete") {
      params["n"] = a.n;
      return complete_graph(a.n);
    }
    if (name == "cycle") {
      params["n"] = a.n;
      return cycle_graph(a.n);
    }
    if (name == "regular") {
      params["n"] = a.n;
      params["d"] = a.d;
      params["seed"] = a.seed;
      return random_regular(a.n, a.d, a.seed);
    }
    throw UsageError("unknown graph '" + name + "'");
  };
  if (a.family == "vc-grid") return vc_formula(graph_of("grid"));
  if (a.family == "vc-tree") return vc_formula(graph_of("tree"));
  if (a.family == "vc-path") return vc_formula(graph_of("path"));
  if (a.family == "vc-complete") return vc_formula(graph_of("complete"));
  if (a.family == "vc-regular") return vc_formula(graph_of("regular"));
  if (a.family == "tseitin") {
    Graph g = graph_of(a.graph);
    params["graph"] = a.graph;
    std::vector<bool> charge(g.n_vertices(), false);
    if (!charge.empty()) charge[0] = true;  // odd total charge
    return tseitin(g, charge);
  }
  if (a.family == "eq") {
    params["n"] = a.n;
    params["l"] = a.l;
    return eq_formula(a.n, a.l);
  }
  if (a.family == "seq") {
    params["n"] = a.n;
    return seq_formula(a.n).formula;
  }
  if (a.family == "random-kl") {
    params["n"] = a.n;
    params["m"] = a.m;
    params["k"] = a.k;
    params["occ"] = a.occ;
    params["seed"] = a.seed;
    return random_kl_cnf(a.n, a.m, a.k, a.occ, a.seed);
  }
  throw UsageError("unknown family '" + a.family + "'");
}

// ---------------------------------------------------------------- main

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> echo(argv, argv + argc);
  CLI::App app{"Structured-circuit proof systems: generate, lift, compile, refute, check."};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a formula family as DIMACS");
  gen_cmd->set_help_flag("--help", "Print this help message and exit");  // -h is taken by --h
  gen_cmd->add_option("family", gen.family,
                      "vc-grid | vc-tree | vc-path | vc-complete | vc-regular | tseitin | eq | seq | random-kl")
      ->required();
  gen_cmd->add_option("--n", gen.n, "size parameter (vertices, EQ width, variables)");
  gen_cmd->add_option("--d", gen.d, "degree for random regular graphs");
  gen_cmd->add_option("--h", gen.h, "tree height");
  gen_cmd->add_option("--l", gen.l, "path length or EQ shift");
  gen_cmd->add_option("--m", gen.m, "clauses (random-kl)");
  gen_cmd->add_option("--k", gen.k, "clause width (random-kl)");
  gen_cmd->add_option("--occ", gen.occ, "max occurrences per variable (random-kl)");
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_option("--graph", gen.graph, "graph for tseitin: grid | tree | path | complete | cycle | regular");
  gen_cmd->add_option("-o,--output", gen.out, "output file (default stdout)");
  gen_cmd->add_option("--report", gen.report_path, "report path (default <output>.json)");

  std::string lift_kind, lift_in, lift_out, lift_report;
  auto* lift_cmd = app.add_subcommand("lift", "Lift a formula: z (unsatisfiable) or c (control variables)");
  lift_cmd->add_option("kind", lift_kind, "z | c")->required()->check(CLI::IsMember({"z", "c"}));
  lift_cmd->add_option("input", lift_in, "DIMACS file")->required();
  lift_cmd->add_option("-o,--output", lift_out, "output file (sidecar <output>.json carries the roles)");
  lift_cmd->add_option("--report", lift_report, "report path");

  std::string comp_format = "sdd", comp_vtree = "auto", comp_in, comp_out, comp_trace, comp_report;
  std::size_t node_limit = kDefaultNodeLimit;
  auto* comp_cmd = app.add_subcommand("compile", "Compile a CNF by left-fold conjunction");
  comp_cmd->add_option("--format", comp_format, "obdd | sdd | dsdnnf");
  comp_cmd->add_option("--vtree,--order", comp_vtree,
                       "auto (decomposition) | right-linear | '(1 (2 3))' | '1 2 3'");
  comp_cmd->add_option("input", comp_in, "DIMACS file")->required();
  comp_cmd->add_option("-o,--output", comp_out, "diagram file");
  comp_cmd->add_option("--trace", comp_trace, "also write the compilation as a derivation");
  comp_cmd->add_option("--report", comp_report, "report path");
  comp_cmd->add_option("--node-limit", node_limit, "node/gate cap per manager");

  std::string ref_method = "naive", ref_format = "sdd", ref_structure = "auto", ref_shape = "left";
  std::string ref_in, ref_out, ref_report;
  auto* ref_cmd = app.add_subcommand("refute", "Produce a refutation");
  ref_cmd->add_option("--method", ref_method, "naive | resolution | compile2ref | treewidth | eq")
      ->check(CLI::IsMember({"naive", "resolution", "compile2ref", "treewidth", "eq"}));
  ref_cmd->add_option("--format", ref_format, "obdd | sdd | dsdnnf (naive, compile2ref)");
  ref_cmd->add_option("--structure", ref_structure, "auto | decomposition | order or vtree text");
  ref_cmd->add_option("--shape", ref_shape, "left | balanced (naive)")->check(CLI::IsMember({"left", "balanced"}));
  ref_cmd->add_option("input", ref_in, "DIMACS file (lifted methods need the `lift z` sidecar)")->required();
  ref_cmd->add_option("-o,--output", ref_out, "proof file");
  ref_cmd->add_option("--report", ref_report, "report path");
  ref_cmd->add_option("--node-limit", node_limit, "node/gate cap per manager");

  std::string chk_in, chk_proof;
  bool chk_json = false, chk_derivation = false;
  std::size_t jobs = 1;
  auto* chk_cmd = app.add_subcommand("check", "Check a proof (kcp or resolution format)");
  chk_cmd->add_option("formula", chk_in, "DIMACS file")->required();
  chk_cmd->add_option("proof", chk_proof, "proof file")->required();
  chk_cmd->add_flag("--json", chk_json, "print the verdict as JSON");
  chk_cmd->add_flag("--derivation", chk_derivation, "do not require the last line to be false");
  chk_cmd->add_option("--jobs", jobs, "threads for line checks")->check(CLI::PositiveNumber);
  chk_cmd->add_option("--node-limit", node_limit, "node/gate cap per manager");

  std::string ex_in, ex_proof, ex_out, ex_report;
  auto* ex_cmd = app.add_subcommand("extract", "Read a representation of the base formula off a refutation");
  ex_cmd->add_option("formula", ex_in, "lifted DIMACS file (with `lift z` sidecar)")->required();
  ex_cmd->add_option("proof", ex_proof, "weakening-free refutation")->required();
  ex_cmd->add_option("-o,--output", ex_out, "diagram file");
  ex_cmd->add_option("--report", ex_report, "report path");

  std::string cnt_in;
  bool cnt_json = false;
  auto* cnt_cmd = app.add_subcommand("count", "Model count of a diagram file");
  cnt_cmd->add_option("diagram", cnt_in, "diagram file")->required();
  cnt_cmd->add_flag("--json", cnt_json, "print as JSON");

  std::string st_in;
  auto* st_cmd = app.add_subcommand("stats", "Summary of a proof file");
  st_cmd->add_option("proof", st_in, "proof file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Timer timer;
    if (*gen_cmd) {
      json r = report("gen", echo);
      CnfFormula f = generate(gen, r["parameters"]);
      r["sizes"] = {{"variables", f.n_vars()}, {"clauses", f.size()}};
      write_file(gen.out, to_dimacs(f));
      r["timings"]["wall_s"] = timer.seconds();
      emit_report(r, gen.out, gen.report_path);
      return 0;
    }

    if (*lift_cmd) {
      CnfFormula phi = read_cnf(lift_in);
      if (phi.size() == 0) throw UsageError("cannot lift a formula without clauses");
      LiftedFormula z = lift_kind == "z" ? lift_Z(phi) : lift_C(phi);
      json r = report("lift", echo);
      r["parameters"] = {{"kind", lift_kind}, {"input", lift_in}};
      r["sizes"] = {{"variables", z.result.n_vars()}, {"clauses", z.result.size()}, {"base_clauses", phi.size()}};
      r["lifting"] = lifting_block(z, lift_kind);
      write_file(lift_out, to_dimacs(z.result));
      r["timings"]["wall_s"] = timer.seconds();
      std::string side = lift_report;
      if (side.empty() && !lift_out.empty() && lift_out != "-") side = lift_out + ".json";
      if (side.empty()) throw UsageError("lift needs -o or --report so the roles can be recorded");
      write_file(side, r.dump(2) + "\n");
      return 0;
    }

    if (*comp_cmd) {
      CnfFormula phi = read_cnf(comp_in);
      if (phi.size() == 0) throw UsageError("nothing to compile");
      Format f = parse_format(comp_format);
      std::string which = comp_vtree == "auto" ? "decomposition" : comp_vtree;
      Structure s = parse_structure_arg(which, f, phi);
      std::vector<std::size_t> order;
      if (which == "decomposition")
        order = elimination_clause_order(phi, min_fill_order(primal_graph(phi)));
      Derivation d = compile_cnf(phi, s, f, order, node_limit);
      const DiagramEntry& last = d.proof.diagram(d.proof.lines.back().did);
      write_file(comp_out, diagram_text(f, d.proof.structure(last.sid), last.records));
      if (!comp_trace.empty()) write_file(comp_trace, format_proof(d.proof));
      auto kit = make_kit(f, node_limit);
      Dia root = kit->load(kit->slot(s), last.records);
      json r = report("compile", echo);
      r["parameters"] = {{"format", comp_format}, {"structure", s.payload()}, {"input", comp_in}};
      r["sizes"] = {{"variables", phi.n_vars()},
                    {"clauses", phi.size()},
                    {"proof_lines", d.proof.lines.size()},
                    {"max_diagram_size", d.max_diagram_size},
                    {"final_size", d.final_size}};
      r["model_count"] = kit->count(root).str();
      r["timings"]["wall_s"] = timer.seconds();
      emit_report(r, comp_out, comp_report);
      return 0;
    }

    if (*ref_cmd) {
      CnfFormula phi = read_cnf(ref_in);
      json r = report("refute", echo);
      r["parameters"] = {{"method", ref_method}, {"input", ref_in}};
      std::string text;
      std::size_t lines = 0, max_size = 0;
      bool refuted = false;
      if (ref_method == "naive") {
        Format f = parse_format(ref_format);
        Structure s = parse_structure_arg(ref_structure, f, phi);
        Derivation d = naive_conjoin_refute(phi, s, f, ref_shape == "left" ? FoldShape::left : FoldShape::balanced,
                                            {}, node_limit);
        r["parameters"]["format"] = ref_format;
        r["parameters"]["structure"] = s.payload();
        r["parameters"]["shape"] = ref_shape;
        text = format_proof(d.proof);
        lines = d.proof.lines.size();
        max_size = d.max_diagram_size;
        refuted = d.refuted;
      } else {
        LiftedFormula z = read_lifted(ref_in, phi);
        if (ref_method == "resolution") {
          ResolutionProof rp = resolution_refute_lifted(z);
          text = format_resolution(rp);
          lines = rp.steps.size();
          refuted = true;
          r["sizes"]["resolutions"] = rp.n_resolutions();
        } else {
          Derivation d;
          if (ref_method == "compile2ref") {
            Format f = parse_format(ref_format);
            Structure s = parse_structure_arg(ref_structure, f, phi);
            CnfFormula c(z.result.n_vars(), lift_C(z.base).result.clauses());
            Derivation comp = compile_cnf(c, s, f, {}, node_limit);
            d = compilation_to_refutation(comp.proof, z, node_limit);
            r["parameters"]["format"] = ref_format;
            r["parameters"]["structure"] = s.payload();
            r["sizes"]["compilation_max_diagram_size"] = comp.max_diagram_size;
          } else if (ref_method == "treewidth") {
            TreewidthRefutation t = treewidth_refute(z.base, node_limit);
            d = std::move(t.refutation);
            r["sizes"]["width"] = t.width;
            r["sizes"]["compilation_max_diagram_size"] = t.compilation.max_diagram_size;
          } else {
            // recover n and the shift from the base formula
            const CnfFormula& base = z.base;
            std::optional<std::size_t> shift;
            const std::size_t n = base.n_vars() / 2;
            for (std::size_t l = 0; l < n && !shift; ++l)
              if (eq_formula(n, l) == base) shift = l;
            if (!shift) throw UsageError("--method eq needs the lifting of an EQ formula");
            EqRefutation e = obdd_refute_eq(n, *shift, node_limit);
            d = std::move(e.refutation);
            r["parameters"]["n"] = n;
            r["parameters"]["l"] = *shift;
            r["sizes"]["compilation_max_diagram_size"] = e.compilation.max_diagram_size;
          }
          text = format_proof(d.proof);
          lines = d.proof.lines.size();
          max_size = d.max_diagram_size;
          refuted = d.refuted;
        }
      }
      write_file(ref_out, text);
      r["sizes"]["variables"] = phi.n_vars();
      r["sizes"]["clauses"] = phi.size();
      r["sizes"]["proof_lines"] = lines;
      r["sizes"]["max_diagram_size"] = max_size;
      r["refuted"] = refuted;
      r["timings"]["wall_s"] = timer.seconds();
      emit_report(r, ref_out, ref_report);
      if (!refuted) std::cerr << "final line is not the constant-false diagram\n";
      return refuted ? 0 : 1;
    }

    if (*chk_cmd) {
      CnfFormula phi = read_cnf(chk_in);
      std::string text = read_file(chk_proof);
      Verdict v;
      if (proof_or_resolution_kind(text) == "resolution") {
        try {
          v = check_resolution(phi, parse_resolution(text));
        } catch (const ParseError& e) {
          v.status = VerdictStatus::malformed;
          v.reason = e.what();
        }
      } else {
        CheckOptions o;
        o.jobs = jobs;
        o.refutation = !chk_derivation;
        o.node_limit = node_limit;
        v = check_proof_text(phi, text, o);
      }
      if (chk_json) std::cout << verdict_json(v) << "\n";
      else {
        std::cout << status_name(v.status);
        if (v.failing_line) std::cout << " at line " << *v.failing_line;
        if (!v.reason.empty()) std::cout << ": " << v.reason;
        std::cout << "\n";
      }
      return exit_for(v);
    }

    if (*ex_cmd) {
      CnfFormula phi = read_cnf(ex_in);
      LiftedFormula z = read_lifted(ex_in, phi);
      Proof p;
      try {
        p = parse_proof(read_file(ex_proof));
      } catch (const ParseError& e) {
        throw UsageError(ex_proof + ": " + e.what());
      }
      Verdict v = check_proof(phi, p);
      if (!v.accepted) {
        std::cerr << "proof not accepted: " << v.reason << "\n";
        return exit_for(v);
      }
      Extraction e = extract_representation(p, z);
      write_file(ex_out, diagram_text(e.format, *e.structure, e.records));
      json r = report("extract", echo);
      r["parameters"] = {{"input", ex_in}, {"proof", ex_proof}};
      r["sizes"] = {{"variables", z.base.n_vars()},
                    {"clauses", z.base.size()},
                    {"proof_lines", p.lines.size()},
                    {"max_diagram_size", v.stats.max_diagram_size},
                    {"final_size", e.size}};
      r["extraction"] = {{"p", e.p}, {"q", e.q}, {"missing_p", e.missing_p}, {"missing_q", e.missing_q},
                         {"kept_clauses", e.kept}};
      r["timings"]["wall_s"] = timer.seconds();
      emit_report(r, ex_out, ex_report);
      return 0;
    }

    if (*cnt_cmd) {
      LoadedDiagram d = read_diagram(cnt_in);
      std::string c = d.kit->count(d.d).str();
      if (cnt_json)
        std::cout << json{{"schema_version", kReportSchemaVersion}, {"count", c},
                          {"variables", d.s.vars().size()}, {"size", d.kit->size(d.d)}}
                         .dump()
                  << "\n";
      else std::cout << c << "\n";
      return 0;
    }

    if (*st_cmd) {
      std::string text = read_file(st_in);
      json r = report("stats", echo);
      r["parameters"] = {{"input", st_in}};
      if (proof_or_resolution_kind(text) == "resolution") {
        ResolutionProof rp = parse_resolution(text);
        r["sizes"] = {{"proof_lines", rp.steps.size()}, {"resolutions", rp.n_resolutions()}};
        r["parameters"]["format"] = "resolution";
      } else {
        Proof p = parse_proof(text);
        std::map<std::string, std::size_t> hist;
        std::size_t records = 0;
        for (const auto& l : p.lines) ++hist[rule_name(l.rule)];
        for (const auto& d : p.diagrams) records = std::max(records, d.records.size());
        std::vector<std::string> rules;
        for (Rule x : p.rules) rules.push_back(rule_name(x));
        r["parameters"]["format"] = format_name(p.format);
        r["parameters"]["rules"] = rules;
        r["sizes"] = {{"proof_lines", p.lines.size()},
                      {"structures", p.structures.size()},
                      {"diagrams", p.diagrams.size()},
                      {"max_diagram_records", records},
                      {"rules", hist}};
      }
      r["timings"]["wall_s"] = timer.seconds();
      std::cout << r.dump(2) << "\n";
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "kcp: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "kcp: " << e.what() << "\n";
    return 2;
  } catch (const ResourceLimit& e) {
    std::cerr << "kcp: resource cap: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "kcp: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
