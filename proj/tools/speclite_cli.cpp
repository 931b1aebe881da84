// speclite command-line front end: parse, analyze, test, path, impls.
//
// Exit codes: 0 all checks pass, 1 violation found, 2 spec error,
// 3 usage or configuration error.

#ifdef SPECLITE_CLI11_SINGLE_HEADER
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "speclite/corpus/adapters.hpp"
#include "speclite/corpus/path.hpp"
#include "speclite/parser.hpp"
#include "speclite/printer.hpp"
#include "speclite/stm.hpp"

using json = nlohmann::json;
using namespace speclite;

namespace {

enum Exit { kOk = 0, kViolation = 1, kSpecError = 2, kUsage = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A bare corpus file name also resolves against the bundled specs/.
std::string resolve_spec(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::exists(path)) return path;
  fs::path bundled = fs::path(SPECLITE_SOURCE_DIR) / "specs" / path;
  if (fs::exists(bundled)) return bundled.string();
  throw UsageError("cannot read '" + path + "'");
}

json span_json(const Span& s) { return {{"file", s.file}, {"line", s.line}, {"column", s.column}}; }

json value_json(const Value& v) {
  if (v.kind == Value::Kind::Instance) return "s" + std::to_string(v.num);
  return v.to_string();
}

json type_error_json(const TypeError& e) {
  json j = {{"kind", to_string(e.kind)}, {"span", span_json(e.span)}, {"message", e.message}};
  j["expected"] = e.expected ? json(print_type(*e.expected)) : json(nullptr);
  j["actual"] = e.actual ? json(print_type(*e.actual)) : json(nullptr);
  return j;
}

json exec_json(const ExecVerdict& v) {
  json findings = json::array();
  for (const auto& f : v.findings) findings.push_back({{"span", span_json(f.span)}, {"reason", to_string(f.reason)}});
  return {{"executable", v.executable()}, {"findings", findings}};
}

json stm_json(const StmVerdict& v) {
  return {{"compatible", v.compatible()},
          {"constructor", v.constructor},
          {"reason", v.reason ? json(to_string(*v.reason)) : json(nullptr)}};
}

json verdict_json(const Verdict& v) {
  json args = json::array();
  for (const auto& a : v.args) args.push_back(value_json(a));
  return {{"kind", to_string(v.kind)},
          {"summary", v.summary()},
          {"span", span_json(v.span)},
          {"clause", v.clause},
          {"exception", v.exception},
          {"field", v.field},
          {"type", v.type},
          {"instance", v.instance},
          {"error", v.error ? json(to_string(*v.error)) : json(nullptr)},
          {"detail", v.detail},
          {"args", args},
          {"result", v.result ? value_json(*v.result) : json(nullptr)},
          {"old_model", v.old_model},
          {"new_model", v.new_model}};
}

json trace_json(const Trace& t) {
  json cmds = json::array();
  for (const auto& c : t) {
    json args = json::array();
    for (const auto& a : c.args) args.push_back(value_json(a));
    cmds.push_back({{"op", c.op}, {"args", args}, {"creates", c.creates}});
  }
  return cmds;
}

json failure_json(const Failure& f) {
  return {{"trace_index", f.trace_index},
          {"command_index", f.command_index},
          {"trace", trace_json(f.trace)},
          {"text", to_string(f.trace)},
          {"verdict", verdict_json(f.verdict)}};
}

SpecInterface load_spec(const std::string& path) {
  std::string text = read_text(path);
  try {
    return parse_interface(text, std::filesystem::path(path).filename().string());
  } catch (const ParseError& e) {
    throw SpecError(std::string("parse error: ") + e.what());
  }
}

std::string default_sut(const SpecInterface& spec) {
  for (const auto& t : spec.type_decls)
    if (t.has_mutable_model()) return t.name;
  return spec.type_decls.empty() ? std::string() : spec.type_decls.front().name;
}

json analyze_json(const TypedSpec& typed, const std::string& sut) {
  json decls = json::array();
  for (const auto& ref : typed.spec.order) {
    if (ref.kind == DeclKind::Val) {
      const ValDecl& val = typed.spec.val_decls[ref.index];
      json d = {{"kind", "val"}, {"name", val.name}, {"span", span_json(val.span)}};
      d["exec"] = exec_json(classify_executable(typed, val));
      d["stm"] = sut.empty() ? json(nullptr) : stm_json(stm_compatibility(typed, val, sut));
      decls.push_back(d);
    } else if (ref.kind == DeclKind::Logic) {
      const LogicDecl& l = typed.spec.logic_decls[ref.index];
      json d = {{"kind", l.is_predicate ? "predicate" : "function"}, {"name", l.name}, {"span", span_json(l.span)}};
      ExecVerdict v;
      if (l.body) v = classify_executable(typed, *l.body);
      else v.findings.push_back({l.span, NonExecReason::AbstractPredicate});
      d["exec"] = exec_json(v);
      d["stm"] = nullptr;
      decls.push_back(d);
    }
  }
  return decls;
}

struct Report {
  json j;
  Clock::time_point start = Clock::now();

  explicit Report(const std::string& sub) {
    j = {{"tool", "speclite"}, {"version", SPECLITE_VERSION}, {"subcommand", sub}, {"config", json::object()}};
  }

  int finish(int code, bool as_json, const std::string& human) {
    j["exit_code"] = code;
    j["timing"]["total_seconds"] = since(start);
    if (as_json) std::cout << j.dump(2) << "\n";
    else std::cout << human;
    return code;
  }
};

// ---- subcommands -------------------------------------------------------------

int cmd_parse(const std::string& path, bool as_json) {
  Report rep("parse");
  rep.j["config"]["spec"] = path;
  SpecInterface spec = load_spec(resolve_spec(path));
  std::string text = pretty_print(spec);
  json decls = json::array();
  for (const auto& t : spec.type_decls) decls.push_back({{"kind", "type"}, {"name", t.name}, {"span", span_json(t.span)}});
  for (const auto& v : spec.val_decls) decls.push_back({{"kind", "val"}, {"name", v.name}, {"span", span_json(v.span)}});
  for (const auto& e : spec.exn_decls)
    decls.push_back({{"kind", "exception"}, {"name", e.name}, {"span", span_json(e.span)}});
  for (const auto& l : spec.logic_decls)
    decls.push_back({{"kind", l.is_predicate ? "predicate" : "function"}, {"name", l.name}, {"span", span_json(l.span)}});
  rep.j["parse"] = {{"declarations", decls}, {"printed", text}};
  return rep.finish(kOk, as_json, text);
}

int cmd_analyze(const std::string& path, std::string sut, bool as_json) {
  Report rep("analyze");
  rep.j["config"]["spec"] = path;
  SpecInterface spec = load_spec(resolve_spec(path));
  if (sut.empty()) sut = default_sut(spec);
  rep.j["config"]["sut"] = sut;
  std::vector<TypeError> errors = type_errors(spec);
  json errs = json::array();
  std::ostringstream out;
  for (const auto& e : errors) {
    errs.push_back(type_error_json(e));
    out << e.span.to_string() << ": type error (" << to_string(e.kind) << "): " << e.message << "\n";
  }
  rep.j["analysis"]["type_errors"] = errs;
  if (!errors.empty()) {
    rep.j["analysis"]["declarations"] = nullptr;
    std::cerr << out.str();
    return rep.finish(kSpecError, as_json, out.str());
  }
  TypedSpec typed = typecheck(spec);
  json decls = analyze_json(typed, sut);
  rep.j["analysis"]["declarations"] = decls;
  for (const auto& d : decls) {
    out << d["kind"].get<std::string>() << " " << d["name"].get<std::string>() << ": "
        << (d["exec"]["executable"].get<bool>() ? "executable" : "NON-EXECUTABLE");
    for (const auto& f : d["exec"]["findings"])
      out << " [" << f["reason"].get<std::string>() << " at line " << f["span"]["line"].get<int>() << "]";
    if (!d["stm"].is_null()) {
      if (d["stm"]["compatible"].get<bool>())
        out << ", STM-compatible" << (d["stm"]["constructor"].get<bool>() ? " (constructor)" : "");
      else out << ", STM-incompatible (" << d["stm"]["reason"].get<std::string>() << ")";
    }
    out << "\n";
  }
  return rep.finish(kOk, as_json, out.str());
}

struct TestArgs {
  std::string spec, impl;
  std::uint64_t seed = 0;
  int count = 100, max_len = 20, jobs = 1;
  std::int64_t int_min = -100, int_max = 100;
};

int cmd_test(const TestArgs& a, bool as_json) {
  Report rep("test");
  rep.j["config"] = {{"spec", a.spec},       {"impl", a.impl},       {"seed", a.seed},
                     {"count", a.count},     {"max_len", a.max_len}, {"int_min", a.int_min},
                     {"int_max", a.int_max}, {"jobs", a.jobs}};
  const corpus::ImplEntry* entry = corpus::find_impl(a.impl);
  if (!entry) throw UsageError("unknown implementation '" + a.impl + "' (see `speclite impls`)");
  std::string spec_path = resolve_spec(a.spec);
  if (a.count < 1 || a.max_len < 1 || a.jobs < 1 || a.int_min > a.int_max)
    throw UsageError("count, max-len and jobs must be positive and int-min <= int-max");
  SpecInterface spec = load_spec(spec_path);
  std::vector<TypeError> errors = type_errors(spec);
  if (!errors.empty()) {
    std::string msg;
    for (const auto& e : errors) msg += e.span.to_string() + ": " + e.message + "\n";
    throw SpecError("type errors:\n" + msg);
  }
  TypedSpec typed = typecheck(spec);
  auto adapter = entry->make();
  if (!typed.spec.find_type(adapter->sut_type()))
    throw UsageError("implementation '" + a.impl + "' implements type '" + adapter->sut_type() +
                     "', which the spec does not declare");
  rep.j["analysis"]["type_errors"] = json::array();
  rep.j["analysis"]["declarations"] = analyze_json(typed, adapter->sut_type());

  StmPlan plan;
  try {
    plan = plan_stm(typed, *adapter);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  std::ostringstream out;
  std::vector<const ValDecl*> used = plan.constructors;
  used.insert(used.end(), plan.operations.begin(), plan.operations.end());
  for (const ValDecl* v : used) {
    ExecVerdict ev = classify_executable(typed, *v);
    if (!ev.executable())
      throw SpecError("'" + v->name + "' is not executable (" + to_string(ev.findings[0].reason) + " at " +
                      ev.findings[0].span.to_string() + ")");
  }

  GenConfig cfg;
  cfg.seed = a.seed;
  cfg.trace_count = a.count;
  cfg.max_trace_len = a.max_len;
  cfg.int_min = a.int_min;
  cfg.int_max = a.int_max;
  cfg.jobs = a.jobs;
  TestReport tr;
  try {
    tr = run_tests(typed, *adapter, cfg);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  json t = {{"impl", a.impl},
            {"mutant", entry->mutant},
            {"traces_run", tr.traces_run},
            {"passed", tr.passed},
            {"commands_run", tr.commands_run},
            {"commands_skipped", tr.commands_skipped},
            {"seed", tr.seed}};
  json skipped = json::array();
  for (const auto& [val, v] : plan.rejected) skipped.push_back({{"name", val->name}, {"reason", to_string(*v.reason)}});
  for (const ValDecl* val : plan.unsupported) skipped.push_back({{"name", val->name}, {"reason", "not implemented"}});
  t["excluded_operations"] = skipped;
  t["failure"] = tr.failure ? failure_json(*tr.failure) : json(nullptr);
  t["shrunk"] = tr.shrunk ? failure_json(*tr.shrunk) : json(nullptr);
  rep.j["test"] = t;
  rep.j["timing"]["test_seconds"] = tr.seconds;

  out << a.impl << " against " << a.spec << " (seed " << a.seed << "): " << tr.passed << "/" << tr.traces_run
      << " traces passed\n";
  for (const auto& s : skipped)
    out << "  excluded " << s["name"].get<std::string>() << ": " << s["reason"].get<std::string>() << "\n";
  int code = kOk;
  if (tr.failure) {
    out << "FAILURE in trace " << tr.failure->trace_index << " at command " << tr.failure->command_index << ": "
        << tr.failure->verdict.summary() << "\n  trace:  " << to_string(tr.failure->trace) << "\n";
    out << "  shrunk: " << to_string(tr.shrunk->trace) << "\n  verdict: " << tr.shrunk->verdict.summary() << "\n";
    code = tr.failure->verdict.kind == VerdictKind::SpecRuntimeError ? kSpecError : kViolation;
  }
  return rep.finish(code, as_json, out.str());
}

struct PathArgs {
  std::string graph, from, to, mutant;
  bool monitors = false;
};

Vertex resolve_vertex(const GraphModel& g, const std::string& name) {
  if (auto v = g.find(name)) return *v;
  throw UsageError("unknown vertex '" + name + "'");
}

int cmd_path(const PathArgs& a, bool as_json) {
  Report rep("path");
  rep.j["config"] = {{"graph", a.graph}, {"from", a.from}, {"to", a.to}, {"monitors", a.monitors},
                     {"mutant", a.mutant}};
  GraphModel g;
  try {
    g = GraphModel::parse(read_text(a.graph));
  } catch (const GraphError& e) {
    throw UsageError(a.graph + ": " + e.what());
  }
  Vertex v1 = resolve_vertex(g, a.from), v2 = resolve_vertex(g, a.to);
  corpus::PathOptions o;
  o.monitors = a.monitors;
  if (a.mutant == "G1") o.fault = corpus::PathFault::ForgetsToMark;
  else if (a.mutant == "G2") o.fault = corpus::PathFault::SkipsFirstSuccessor;
  else if (!a.mutant.empty()) throw UsageError("unknown graph mutant '" + a.mutant + "' (G1 or G2)");
  ReachTree oracle = reach_tree(g, v1);
  corpus::PathResult r = corpus::check_path(g, v1, v2, o, &oracle);
  bool expected = oracle.reaches(v2);
  bool decided = r.status == corpus::PathStatus::Found || r.status == corpus::PathStatus::NotFound;
  bool agrees = decided && r.answer() == expected;
  rep.j["path"] = {{"vertices", g.size()},
                   {"edges", g.edge_count()},
                   {"status", to_string(r.status)},
                   {"answer", decided ? json(r.answer()) : json(nullptr)},
                   {"oracle", expected},
                   {"agrees", agrees},
                   {"monitor", r.monitor ? json(to_string(*r.monitor)) : json(nullptr)},
                   {"detail", r.detail},
                   {"steps", r.steps},
                   {"loop_heads", r.loop_heads},
                   {"bridges", r.bridges}};
  std::ostringstream out;
  out << "check_path " << a.from << " " << a.to << ": " << to_string(r.status);
  if (r.monitor) out << " (" << to_string(*r.monitor) << ": " << r.detail << ")";
  else if (!r.detail.empty()) out << " (" << r.detail << ")";
  out << "; oracle says " << (expected ? "reachable" : "unreachable") << (agrees ? "" : " -- MISMATCH") << "\n";
  out << "  steps " << r.steps << ", loop heads " << r.loop_heads;
  if (a.monitors) out << ", bridges validated " << r.bridges;
  out << "\n";
  return rep.finish(agrees ? kOk : kViolation, as_json, out.str());
}

int cmd_impls(bool as_json) {
  Report rep("impls");
  json list = json::array();
  std::ostringstream out;
  for (const auto& e : corpus::registry()) {
    list.push_back({{"name", e.name}, {"mutant", e.mutant}, {"spec", e.default_spec}, {"description", e.description}});
    out << e.name << (e.mutant.empty() ? "" : " [" + e.mutant + "]") << ": " << e.description << " ("
        << e.default_spec << ")\n";
  }
  out << "graph mutants for `path --mutant`: G1 (forgets to mark), G2 (skips first successor)\n";
  rep.j["impls"] = list;
  return rep.finish(kOk, as_json, out.str());
}

std::uint64_t env_seed() {
  const char* s = std::getenv("SPECLITE_SEED");
  if (!s || !*s) return 0;
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(s, &used, 0);
    if (used != std::string(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("SPECLITE_SEED is not a number: ") + s);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"speclite: behavioural interface specifications, runtime checking and state-machine testing"};
  app.set_version_flag("--version", std::string(SPECLITE_VERSION));
  app.require_subcommand(1);
  bool as_json = false;

  std::string spec_path, sut;
  auto* parse = app.add_subcommand("parse", "Parse a spec and print it in canonical form");
  parse->add_option("spec", spec_path, "Annotated interface file")->required();
  parse->add_flag("--json", as_json, "Emit a JSON report");

  auto* analyze = app.add_subcommand("analyze", "Typecheck, executability and STM compatibility");
  analyze->add_option("spec", spec_path, "Annotated interface file")->required();
  analyze->add_option("--sut", sut, "System-under-test type (default: first type with a mutable model)");
  analyze->add_flag("--json", as_json, "Emit a JSON report");

  TestArgs targs;
  std::optional<std::uint64_t> seed_flag;
  auto* test = app.add_subcommand("test", "State-machine testing of an implementation against a spec");
  test->add_option("spec", targs.spec, "Annotated interface file")->required();
  test->add_option("--impl", targs.impl, "Implementation name (see `impls`)")->required();
  test->add_option("--seed", seed_flag, "Generator seed (default: $SPECLITE_SEED or 0)");
  test->add_option("--count", targs.count, "Number of traces")->capture_default_str();
  test->add_option("--max-len", targs.max_len, "Maximum commands per trace")->capture_default_str();
  test->add_option("--int-min", targs.int_min, "Smallest generated integer")->capture_default_str();
  test->add_option("--int-max", targs.int_max, "Largest generated integer")->capture_default_str();
  test->add_option("--jobs", targs.jobs, "Traces run concurrently")->capture_default_str();
  test->add_flag("--json", as_json, "Emit a JSON report");

  PathArgs pargs;
  auto* path = app.add_subcommand("path", "Run the BFS path checker with the oracle cross-check");
  path->add_option("graph", pargs.graph, "Graph file")->required();
  path->add_option("--from", pargs.from, "Source vertex")->required();
  path->add_option("--to", pargs.to, "Target vertex")->required();
  path->add_flag("--monitors", pargs.monitors, "Check the loop invariants at every loop head");
  path->add_option("--mutant", pargs.mutant, "Run a faulty variant (G1 or G2)");
  path->add_flag("--json", as_json, "Emit a JSON report");

  auto* impls = app.add_subcommand("impls", "List the compiled-in implementations");
  impls->add_flag("--json", as_json, "Emit a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*parse) return cmd_parse(spec_path, as_json);
    if (*analyze) return cmd_analyze(spec_path, sut, as_json);
    if (*test) {
      targs.seed = seed_flag ? *seed_flag : env_seed();
      return cmd_test(targs, as_json);
    }
    if (*path) return cmd_path(pargs, as_json);
    if (*impls) return cmd_impls(as_json);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kSpecError;
  } catch (const TypeCheckFailure& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kSpecError;
  }
  return kUsage;
}
