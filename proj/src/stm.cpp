#include "speclite/stm.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace speclite {

std::string to_string(const Command& c) {
  std::string s = c.op;
  for (const auto& a : c.args) {
    s += ' ';
    if (a.kind == Value::Kind::Instance) {
      s += "s" + std::to_string(a.num);
    } else {
      std::string v = a.to_string();
      bool wrap = (a.kind == Value::Kind::Int && a.num < 0);
      s += wrap ? "(" + v + ")" : v;
    }
  }
  return s;
}

std::string to_string(const Trace& t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += "; ";
    s += to_string(t[i]);
  }
  return s + "]";
}

StmPlan plan_stm(const TypedSpec& typed, const ImplAdapter& adapter) {
  StmPlan plan;
  plan.sut_type = adapter.sut_type();
  for (const auto& val : typed.spec.val_decls) {
    StmVerdict v = stm_compatibility(typed, val, plan.sut_type);
    if (!v.compatible()) plan.rejected.emplace_back(&val, v);
    else if (!adapter.supports(val.name)) plan.unsupported.push_back(&val);
    else if (v.constructor) plan.constructors.push_back(&val);
    else plan.operations.push_back(&val);
  }
  if (plan.constructors.empty())
    throw ConfigError("no STM-compatible constructor of type '" + plan.sut_type + "' is implemented by " +
                      adapter.name());
  return plan;
}

namespace {

using Subst = std::map<std::string, LogicalType>;

// Binds the type variables of the SUT type occurrence in `val` to the
// configured instantiations, by position.
Subst instantiate(const ValDecl& val, const std::string& sut, const GenConfig& config) {
  Subst s;
  const LogicalType* t = nullptr;
  for (const auto& p : val.params)
    if (is_named_type(p.type, sut)) t = &p.type;
  if (!t && is_named_type(val.result, sut)) t = &val.result;
  if (t)
    for (std::size_t i = 0; i < t->args.size(); ++i)
      if (t->args[i].kind == LogicalType::Kind::Var && i < config.type_args.size())
        s.emplace(t->args[i].name, config.type_args[i]);
  return s;
}

LogicalType resolve(const LogicalType& t, const Subst& s) {
  if (t.kind == LogicalType::Kind::Var) {
    auto it = s.find(t.name);
    return it == s.end() ? LogicalType::integer() : it->second;
  }
  LogicalType r = t;
  for (auto& a : r.args) a = resolve(a, s);
  return r;
}

class Generator {
 public:
  Generator(const GenConfig& config, std::uint64_t index)
      : config_(config), rng_(SplitMix64::stream(config.seed, index)) {}

  const ValDecl* pick(const std::vector<const ValDecl*>& ops) {
    double total = 0;
    for (const auto* op : ops) total += weight(op);
    if (total <= 0) return nullptr;
    double x = rng_.unit() * total;
    for (const auto* op : ops) {
      x -= weight(op);
      if (x < 0 && weight(op) > 0) return op;
    }
    for (auto it = ops.rbegin(); it != ops.rend(); ++it)
      if (weight(*it) > 0) return *it;
    return nullptr;
  }

  std::uint64_t below(std::uint64_t n) { return rng_.below(n); }
  std::int64_t between(std::int64_t lo, std::int64_t hi) { return rng_.between(lo, hi); }

  Value value(const LogicalType& declared, const Subst& s) {
    LogicalType t = resolve(declared, s);
    if (declared.kind != LogicalType::Kind::Var) return fresh(t);
    auto& pool = pools_[t.to_string()];
    if (!pool.empty() && rng_.chance(0.5)) return pool[rng_.below(pool.size())];
    Value v = fresh(t);
    pool.push_back(v);
    return v;
  }

 private:
  double weight(const ValDecl* op) const {
    auto it = config_.weights.find(op->name);
    return it == config_.weights.end() ? 1.0 : std::max(0.0, it->second);
  }

  Value fresh(const LogicalType& t) {
    switch (t.kind) {
      case LogicalType::Kind::Int: return Value::integer(rng_.between(config_.int_min, config_.int_max));
      case LogicalType::Kind::Bool: return Value::boolean(rng_.chance(0.5));
      case LogicalType::Kind::Tuple: {
        std::vector<Value> items;
        for (const auto& a : t.args) items.push_back(fresh(a));
        return Value::tuple(std::move(items));
      }
      case LogicalType::Kind::List:
      case LogicalType::Kind::Seq: {
        std::vector<Value> items(rng_.below(4));
        for (auto& v : items) v = fresh(t.args.at(0));
        return Value::list(std::move(items));
      }
      default: return Value::unit();
    }
  }

  const GenConfig& config_;
  SplitMix64 rng_;
  std::map<std::string, std::vector<Value>> pools_;
};

Command make_command(Generator& gen, const ValDecl& val, const std::string& sut, const GenConfig& config,
                     std::int64_t slot) {
  Command c;
  c.op = val.name;
  Subst s = instantiate(val, sut, config);
  for (const auto& p : val.params) {
    if (is_named_type(p.type, sut)) c.args.push_back(Value::instance(slot));
    else if (p.label == ParamLabel::Optional) c.args.push_back(Value::unit());
    else c.args.push_back(gen.value(p.type, s));
  }
  return c;
}

}  // namespace

Trace generate_trace(const TypedSpec& typed, const StmPlan& plan, const GenConfig& config, std::uint64_t index) {
  if (config.max_trace_len < 1) throw ConfigError("max_trace_len must be positive");
  if (config.int_min > config.int_max) throw ConfigError("empty integer range");
  (void)typed;
  Generator gen(config, index);
  Trace t;
  auto len = static_cast<std::size_t>(gen.between(1, config.max_trace_len));
  const ValDecl* ctor = gen.pick(plan.constructors);
  if (!ctor) throw ConfigError("every constructor has weight 0");
  int slots = 0;
  t.push_back(make_command(gen, *ctor, plan.sut_type, config, 0));
  t.back().creates = slots++;
  std::vector<const ValDecl*> choices = plan.operations;
  if (config.multiple_slots) choices.insert(choices.end(), plan.constructors.begin(), plan.constructors.end());
  while (t.size() < len) {
    const ValDecl* op = gen.pick(choices);
    if (!op) break;
    bool is_ctor = std::find(plan.constructors.begin(), plan.constructors.end(), op) != plan.constructors.end();
    std::int64_t slot = is_ctor ? slots : static_cast<std::int64_t>(gen.below(static_cast<std::uint64_t>(slots)));
    t.push_back(make_command(gen, *op, plan.sut_type, config, slot));
    if (is_ctor) t.back().creates = slots++;
  }
  return t;
}

bool well_formed(const Trace& trace) {
  if (trace.empty() || trace.front().creates < 0) return false;
  std::vector<std::int64_t> live;
  for (const auto& c : trace) {
    for (const auto& a : c.args)
      if (a.kind == Value::Kind::Instance && std::find(live.begin(), live.end(), a.num) == live.end())
        return false;
    if (c.creates >= 0) {
      if (std::find(live.begin(), live.end(), c.creates) != live.end()) return false;
      live.push_back(c.creates);
    }
  }
  return true;
}

TraceRun run_trace(const TypedSpec& typed, const ImplAdapter& prototype, const Trace& trace) {
  if (!well_formed(trace)) throw std::invalid_argument("ill-formed trace " + to_string(trace));
  std::unique_ptr<ImplAdapter> adapter = prototype.fresh();
  TraceRun run;
  std::map<std::int64_t, Value> slots;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const Command& c = trace[i];
    const ValDecl* val = typed.spec.find_val(c.op);
    if (!val) throw std::invalid_argument("unknown operation '" + c.op + "'");
    std::vector<Value> args;
    bool dead = false;
    for (const auto& a : c.args) {
      if (a.kind != Value::Kind::Instance) {
        args.push_back(a);
        continue;
      }
      auto it = slots.find(a.num);
      if (it == slots.end()) dead = true;
      else args.push_back(it->second);
    }
    if (dead) {  // the constructor of this slot did not produce an instance
      run.skipped.push_back(true);
      continue;
    }
    CallResult r = check_call(typed, *val, *adapter, run.state, args);
    bool skip = r.verdict.kind == VerdictKind::PreViolation;
    run.skipped.push_back(skip);
    if (skip) {
      run.calls.push_back(std::move(r));
      continue;
    }
    if (!r.verdict.pass()) {
      run.failed_at = i;
      run.verdict = r.verdict;
      run.calls.push_back(std::move(r));
      return run;
    }
    run.state = r.state;
    if (c.creates >= 0 && r.result && r.result->kind == Value::Kind::Instance) slots[c.creates] = *r.result;
    run.calls.push_back(std::move(r));
  }
  return run;
}

namespace {

std::vector<Value> reductions(const Value& v) {
  std::vector<Value> out;
  auto add = [&](Value r) {
    if (r != v && std::find(out.begin(), out.end(), r) == out.end()) out.push_back(std::move(r));
  };
  switch (v.kind) {
    case Value::Kind::Int: {
      std::int64_t n = v.num;
      if (n == 0) break;
      add(Value::integer(0));
      add(Value::integer(n / 2));
      add(Value::integer(n > 0 ? n - 1 : n + 1));
      break;
    }
    case Value::Kind::Bool:
      if (v.num) add(Value::boolean(false));
      break;
    case Value::Kind::List:
      if (v.items.empty()) break;
      add(Value::list({}));
      for (std::size_t i = 0; i < v.items.size(); ++i) {
        auto items = v.items;
        items.erase(items.begin() + static_cast<std::ptrdiff_t>(i));
        add(Value::list(std::move(items)));
      }
      for (std::size_t i = 0; i < v.items.size(); ++i)
        for (auto& r : reductions(v.items[i])) {
          auto items = v.items;
          items[i] = r;
          add(Value::list(std::move(items)));
        }
      break;
    case Value::Kind::Tuple:
      for (std::size_t i = 0; i < v.items.size(); ++i)
        for (auto& r : reductions(v.items[i])) {
          auto items = v.items;
          items[i] = r;
          add(Value::tuple(std::move(items)));
        }
      break;
    default: break;
  }
  return out;
}

}  // namespace

std::vector<Trace> shrink_candidates(const Trace& trace) {
  std::vector<Trace> out;
  for (std::size_t i = trace.size(); i-- > 0;) {
    Trace t = trace;
    t.erase(t.begin() + static_cast<std::ptrdiff_t>(i));
    if (well_formed(t)) out.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < trace.size(); ++i)
    for (std::size_t j = 0; j < trace[i].args.size(); ++j)
      for (auto& r : reductions(trace[i].args[j])) {
        Trace t = trace;
        t[i].args[j] = std::move(r);
        out.push_back(std::move(t));
      }
  return out;
}

Trace shrink(const TypedSpec& typed, const ImplAdapter& prototype, const Trace& trace) {
  TraceRun first = run_trace(typed, prototype, trace);
  if (first.passed()) return trace;
  VerdictKind kind = first.verdict.kind;
  Trace best(trace.begin(), trace.begin() + static_cast<std::ptrdiff_t>(*first.failed_at + 1));
  for (bool progress = true; progress;) {
    progress = false;
    for (auto& c : shrink_candidates(best)) {
      TraceRun r = run_trace(typed, prototype, c);
      if (r.passed() || r.verdict.kind != kind) continue;
      c.resize(*r.failed_at + 1);
      best = std::move(c);
      progress = true;
      break;
    }
  }
  return best;
}

TestReport run_tests(const TypedSpec& typed, const ImplAdapter& prototype, const GenConfig& config) {
  auto start = std::chrono::steady_clock::now();
  if (config.trace_count < 1) throw ConfigError("trace_count must be positive");
  StmPlan plan = plan_stm(typed, prototype);
  TestReport report;
  report.seed = config.seed;

  struct Slot {
    bool done = false;
    std::size_t commands = 0, skipped = 0;
    std::optional<Failure> failure;
  };
  auto count = static_cast<std::size_t>(config.trace_count);
  std::vector<Slot> slots(count);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> first_fail{count};
  std::mutex error_mu;
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count || i > first_fail.load()) return;
      try {
        Trace t = generate_trace(typed, plan, config, i);
        TraceRun r = run_trace(typed, prototype, t);
        Slot& s = slots[i];
        s.commands = r.calls.size();
        s.skipped = static_cast<std::size_t>(std::count(r.skipped.begin(), r.skipped.end(), true));
        if (!r.passed()) {
          s.failure = Failure{i, std::move(t), *r.failed_at, r.verdict};
          std::size_t cur = first_fail.load();
          while (i < cur && !first_fail.compare_exchange_weak(cur, i)) {
          }
        }
        s.done = true;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        first_fail.store(0);
        return;
      }
    }
  };
  int jobs = std::max(1, config.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  for (std::size_t i = 0; i < count; ++i) {
    Slot& s = slots[i];
    ++report.traces_run;
    report.commands_run += s.commands;
    report.commands_skipped += s.skipped;
    if (s.failure) {
      report.failure = std::move(s.failure);
      break;
    }
    ++report.passed;
  }
  if (report.failure) {
    Trace small = shrink(typed, prototype, report.failure->trace);
    TraceRun r = run_trace(typed, prototype, small);
    report.shrunk = Failure{report.failure->trace_index, small, r.failed_at.value_or(0), r.verdict};
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace speclite
