#include <gtest/gtest.h>

#include <deque>
#include <set>

#include "speclite/corpus/adapters.hpp"
#include "speclite/parser.hpp"
#include "speclite/stm.hpp"
#include "test_support.hpp"

using namespace speclite;
using namespace speclite::corpus;

namespace {

TypedSpec load(const std::string& file) { return typecheck(parse_interface(speclite::testing::read_spec(file), file)); }

Value I(std::int64_t i) { return Value::integer(i); }
Value S(std::int64_t slot) { return Value::instance(slot); }

Command ctor() { return Command{"create", {Value::unit()}, 0}; }
Command op(std::string name, std::vector<Value> args) { return Command{std::move(name), std::move(args), -1}; }

// Queue commands in the argument order of queue.mli.spec.
Command push(std::int64_t x) { return op("push", {S(0), I(x)}); }
Command pop() { return op("pop", {S(0)}); }
Command is_empty() { return op("is_empty", {S(0)}); }

// Queue commands in the argument order of queue_ortac.mli.spec.
Command opush(std::int64_t x) { return op("push", {I(x), S(0)}); }

std::unique_ptr<ImplAdapter> impl(const std::string& name) { return find_impl(name)->make(); }

std::vector<std::string> shape(const Trace& t) {
  std::vector<std::string> s;
  for (const auto& c : t) s.push_back(c.op);
  return s;
}

// Direct reading of the queue contracts: elems as a deque, Empty on pop of [].
struct QueueOracle {
  std::deque<std::int64_t> elems;
  struct Step {
    std::optional<Value> result;
    bool raised = false;
  };
  Step apply(const Command& c) {
    if (c.op == "create") return {S(1), false};
    if (c.op == "push") {
      elems.push_back(c.args[1].num);
      return {Value::unit(), false};
    }
    if (c.op == "is_empty") return {Value::boolean(elems.empty()), false};
    if (elems.empty()) return {std::nullopt, true};
    std::int64_t x = elems.front();
    elems.pop_front();
    return {I(x), false};
  }
  Value model() const {
    std::vector<Value> v;
    for (auto x : elems) v.push_back(I(x));
    return Value::list(std::move(v));
  }
};

// Independent 1-minimality check: no single deletion keeping the trace
// well-formed, and no single argument set to 0 / false / [], fails with
// the same verdict kind.
::testing::AssertionResult one_minimal(const TypedSpec& typed, const ImplAdapter& a, const Trace& t,
                                       VerdictKind kind) {
  auto fails = [&](const Trace& c) {
    TraceRun r = run_trace(typed, a, c);
    return !r.passed() && r.verdict.kind == kind;
  };
  auto creates_ok = [](const Trace& c) {
    std::set<std::int64_t> live;
    if (c.empty() || c[0].creates < 0) return false;
    for (const auto& cmd : c) {
      for (const auto& v : cmd.args)
        if (v.kind == Value::Kind::Instance && !live.count(v.num)) return false;
      if (cmd.creates >= 0) live.insert(cmd.creates);
    }
    return true;
  };
  for (std::size_t i = 0; i < t.size(); ++i) {
    Trace c = t;
    c.erase(c.begin() + static_cast<std::ptrdiff_t>(i));
    if (creates_ok(c) && fails(c))
      return ::testing::AssertionFailure() << "deleting command " << i << " of " << to_string(t) << " still fails";
  }
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t[i].args.size(); ++j) {
      const Value& v = t[i].args[j];
      std::optional<Value> zero;
      if (v.kind == Value::Kind::Int && v.num != 0) zero = I(0);
      if (v.kind == Value::Kind::Bool && v.num) zero = Value::boolean(false);
      if (v.kind == Value::Kind::List && !v.items.empty()) zero = Value::list({});
      if (!zero) continue;
      Trace c = t;
      c[i].args[j] = *zero;
      if (fails(c))
        return ::testing::AssertionFailure() << "reducing argument " << j << " of command " << i << " in "
                                             << to_string(t) << " still fails";
    }
  return ::testing::AssertionSuccess();
}

class QueueStm : public ::testing::Test {
 protected:
  TypedSpec typed = load("queue.mli.spec");
  std::unique_ptr<ImplAdapter> ref = impl("queue_two_list");
  StmPlan plan = plan_stm(typed, *ref);
};

TEST_F(QueueStm, PlanExcludesTransfer) {
  ASSERT_EQ(plan.constructors.size(), 1u);
  EXPECT_EQ(plan.constructors[0]->name, "create");
  std::set<std::string> ops;
  for (const auto* v : plan.operations) ops.insert(v->name);
  EXPECT_EQ(ops, (std::set<std::string>{"push", "pop", "is_empty"}));
  ASSERT_EQ(plan.rejected.size(), 1u);
  EXPECT_EQ(plan.rejected[0].first->name, "transfer");
  EXPECT_EQ(plan.rejected[0].second.reason, StmReason::MultipleSut);
}

TEST_F(QueueStm, TraceStartsWithConstructor) {
  GenConfig cfg;
  cfg.seed = 42;
  Trace t = generate_trace(typed, plan, cfg, 0);
  ASSERT_FALSE(t.empty());
  EXPECT_EQ(t[0].op, "create");
  EXPECT_EQ(t[0].creates, 0);
}

TEST_F(QueueStm, GeneratedTracesAreWellFormed) {
  GenConfig cfg;
  cfg.seed = 3;
  for (std::uint64_t i = 0; i < 500; ++i) {
    Trace t = generate_trace(typed, plan, cfg, i);
    ASSERT_TRUE(well_formed(t)) << to_string(t);
    ASSERT_LE(t.size(), 20u);
    for (std::size_t k = 1; k < t.size(); ++k) {
      EXPECT_NE(t[k].op, "transfer");
      EXPECT_NE(t[k].op, "create");
      for (const auto& a : t[k].args) {
        if (a.kind == Value::Kind::Instance) EXPECT_EQ(a.num, 0);
        if (a.kind == Value::Kind::Int) {
          EXPECT_GE(a.num, -100);
          EXPECT_LE(a.num, 100);
        }
      }
    }
  }
}

TEST_F(QueueStm, GenerationIsDeterministic) {
  GenConfig cfg;
  cfg.seed = 99;
  GenConfig other = cfg;
  other.seed = 100;
  bool differs = false;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Trace a = generate_trace(typed, plan, cfg, i);
    EXPECT_EQ(a, generate_trace(typed, plan, cfg, i));
    EXPECT_EQ(to_string(a), to_string(generate_trace(typed, plan, cfg, i)));
    differs |= !(a == generate_trace(typed, plan, other, i));
  }
  EXPECT_TRUE(differs);
}

TEST_F(QueueStm, MaxLengthOneGivesOnlyConstructors) {
  GenConfig cfg;
  cfg.max_trace_len = 1;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Trace t = generate_trace(typed, plan, cfg, i);
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0].op, "create");
  }
}

TEST_F(QueueStm, TransferNeverGenerated) {
  GenConfig cfg;
  cfg.seed = 5;
  for (std::uint64_t i = 0; i < 1000; ++i)
    for (const auto& c : generate_trace(typed, plan, cfg, i)) ASSERT_NE(c.op, "transfer");
}

TEST_F(QueueStm, GeneratorCoversAllShortShapes) {
  std::set<std::vector<std::string>> want;
  const std::vector<std::string> ops = {"push", "pop", "is_empty"};
  want.insert({"create"});
  for (const auto& a : ops) {
    want.insert({"create", a});
    for (const auto& b : ops) want.insert({"create", a, b});
  }
  ASSERT_EQ(want.size(), 13u);
  GenConfig cfg;
  cfg.max_trace_len = 4;
  std::set<std::vector<std::string>> seen;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    cfg.seed = seed;
    seen.insert(shape(generate_trace(typed, plan, cfg, 0)));
  }
  for (const auto& s : want) EXPECT_TRUE(seen.count(s)) << s.size();
}

TEST_F(QueueStm, WeightZeroExcludesOperation) {
  GenConfig cfg;
  cfg.weights["pop"] = 0;
  cfg.weights["is_empty"] = 0;
  for (std::uint64_t i = 0; i < 100; ++i)
    for (const auto& c : generate_trace(typed, plan, cfg, i)) EXPECT_TRUE(c.op == "create" || c.op == "push");
}

TEST_F(QueueStm, RunTraceExamples) {
  TraceRun r = run_trace(typed, *ref, {ctor(), push(1), pop()});
  ASSERT_TRUE(r.passed()) << r.verdict.summary();
  EXPECT_EQ(*r.state.get(1, "elems"), Value::list({}));
  ASSERT_EQ(r.calls.size(), 3u);
  EXPECT_EQ(*r.calls[2].result, I(1));

  r = run_trace(typed, *ref, {ctor(), pop()});
  ASSERT_TRUE(r.passed()) << r.verdict.summary();
  EXPECT_EQ(r.calls[1].raised, std::optional<std::string>("Empty"));
}

TEST_F(QueueStm, RunTraceRecordsFailureIndex) {
  TypedSpec ortac = load("queue_ortac.mli.spec");
  auto q1 = impl("mutant_Q1");
  // One element looks the same at either end; the second push exposes it.
  TraceRun r = run_trace(ortac, *q1, {ctor(), opush(1), op("pop", {S(0)})});
  EXPECT_TRUE(r.passed());
  r = run_trace(ortac, *q1, {ctor(), opush(1), opush(2)});
  ASSERT_FALSE(r.passed());
  EXPECT_EQ(*r.failed_at, 2u);
  // The ensures fixes the model, so the disagreement surfaces as a broken
  // representation invariant of the pushed-to queue.
  EXPECT_EQ(r.verdict.kind, VerdictKind::TypeInvariantViolation) << r.verdict.summary();
}

TEST_F(QueueStm, RunTraceRejectsIllFormed) {
  EXPECT_THROW(run_trace(typed, *ref, {push(1)}), std::invalid_argument);
  EXPECT_THROW(run_trace(typed, *ref, {ctor(), op("push", {S(1), I(1)})}), std::invalid_argument);
  EXPECT_FALSE(well_formed({}));
}

TEST_F(QueueStm, FinalModelMatchesContractOracle) {
  GenConfig cfg;
  cfg.max_trace_len = 5;
  cfg.int_min = -5;
  cfg.int_max = 5;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    cfg.seed = seed;
    for (std::uint64_t i = 0; i < 50; ++i) {
      Trace t = generate_trace(typed, plan, cfg, i);
      ASSERT_LE(t.size(), 5u);
      TraceRun r = run_trace(typed, *ref, t);
      ASSERT_TRUE(r.passed()) << to_string(t) << ": " << r.verdict.summary();
      QueueOracle o;
      for (std::size_t k = 0; k < t.size(); ++k) {
        auto step = o.apply(t[k]);
        EXPECT_EQ(r.calls[k].raised.has_value(), step.raised) << to_string(t);
        if (step.result) EXPECT_EQ(*r.calls[k].result, *step.result) << to_string(t);
      }
      EXPECT_EQ(*r.state.get(1, "elems"), o.model()) << to_string(t);
    }
  }
}

TEST_F(QueueStm, ShrinkCandidatesKeepWellFormedness) {
  Trace t = {ctor(), push(7), pop(), op("push", {S(0), I(-3)})};
  auto cands = shrink_candidates(t);
  for (const auto& c : cands) EXPECT_TRUE(well_formed(c));
  // create cannot be deleted; three deletions, then 7 -> {0, 3, 6} and -3 -> {0, -1, -2}.
  EXPECT_EQ(cands.size(), 3u + 3u + 3u);
  EXPECT_EQ(cands[0].size(), 3u);
  EXPECT_EQ(cands[3][1].args[1], I(0));
}

TEST_F(QueueStm, MinimalTraceIsAFixpoint) {
  TypedSpec ortac = load("queue_ortac.mli.spec");
  auto q3 = impl("mutant_Q3");
  Trace t = {ctor(), op("pop", {S(0)})};
  EXPECT_EQ(shrink(ortac, *q3, t), t);
  // A passing trace has nothing to shrink.
  Trace ok = {ctor(), push(1)};
  EXPECT_EQ(shrink(typed, *ref, ok), ok);
}

TEST(StmShrink, PopOnEmptyShrinksToTwoCommands) {
  TypedSpec ortac = load("queue_ortac.mli.spec");
  auto q3 = impl("mutant_Q3");
  // Brute force over length 2: only [create; pop] fails.
  std::vector<Trace> failing;
  for (std::int64_t x = -3; x <= 3; ++x) {
    for (const Trace& t : {Trace{ctor(), opush(x)}, Trace{ctor(), op("is_empty", {S(0)})}})
      if (!run_trace(ortac, *q3, t).passed()) failing.push_back(t);
  }
  Trace pop2 = {ctor(), op("pop", {S(0)})};
  EXPECT_TRUE(failing.empty());
  EXPECT_FALSE(run_trace(ortac, *q3, pop2).passed());

  Trace longer = {ctor(), opush(4), op("is_empty", {S(0)}), op("pop", {S(0)}), opush(9), op("pop", {S(0)}),
                  op("pop", {S(0)}), opush(1)};
  Trace small = shrink(ortac, *q3, longer);
  EXPECT_EQ(small, pop2) << to_string(small);
}

TEST(StmShrink, PopKeepsShrinksToAtMostFour) {
  TypedSpec ortac = load("queue_ortac.mli.spec");
  auto q2 = impl("mutant_Q2");
  // Shortest failing traces by enumeration over lengths up to 4.
  std::vector<Command> steps = {op("pop", {S(0)}), op("is_empty", {S(0)})};
  for (std::int64_t x = -1; x <= 1; ++x) steps.push_back(opush(x));
  std::size_t shortest = 0;
  std::vector<Trace> layer = {{ctor()}};
  for (std::size_t len = 2; len <= 4 && !shortest; ++len) {
    std::vector<Trace> next;
    for (const auto& t : layer)
      for (const auto& s : steps) {
        Trace u = t;
        u.push_back(s);
        if (!run_trace(ortac, *q2, u).passed()) shortest = len;
        next.push_back(std::move(u));
      }
    layer = std::move(next);
  }
  ASSERT_GT(shortest, 0u);

  GenConfig cfg;
  cfg.seed = 7;
  cfg.trace_count = 5000;
  TestReport rep = run_tests(ortac, *q2, cfg);
  ASSERT_TRUE(rep.failure);
  ASSERT_TRUE(rep.shrunk);
  EXPECT_LE(rep.shrunk->trace.size(), 4u) << to_string(rep.shrunk->trace);
  EXPECT_GE(rep.shrunk->trace.size(), shortest);
}

TEST(StmRun, ReferenceImplementationsPass) {
  struct Case {
    const char* impl;
    const char* spec;
  };
  for (Case c : {Case{"queue_two_list", "queue.mli.spec"}, Case{"queue_linked", "queue.mli.spec"},
                 Case{"queue_two_list", "queue_ortac.mli.spec"}, Case{"queue_linked", "queue_ortac.mli.spec"},
                 Case{"hashtbl_bucket", "hashtbl.mli.spec"}, Case{"hashtbl_bucket", "hashtbl_ext.mli.spec"},
                 Case{"counter", "counter.mli.spec"}}) {
    TypedSpec typed = load(c.spec);
    auto a = impl(c.impl);
    GenConfig cfg;
    cfg.seed = 7;
    cfg.trace_count = 1000;
    TestReport rep = run_tests(typed, *a, cfg);
    EXPECT_EQ(rep.passed, 1000) << c.impl << " / " << c.spec << ": "
                                << (rep.failure ? to_string(rep.failure->trace) + " " + rep.failure->verdict.summary()
                                                : "");
    EXPECT_EQ(rep.traces_run, 1000);
    EXPECT_EQ(rep.seed, 7u);
    EXPECT_GT(rep.commands_run, 1000u);
  }
}

TEST(StmRun, EveryMutantIsCaughtAndShrunk) {
  int mutants = 0;
  for (const auto& e : registry()) {
    if (e.mutant.empty()) continue;
    ++mutants;
    TypedSpec typed = load(e.default_spec);
    auto a = e.make();
    GenConfig cfg;
    cfg.seed = 7;
    cfg.trace_count = 5000;
    TestReport rep = run_tests(typed, *a, cfg);
    ASSERT_TRUE(rep.failure) << e.name;
    ASSERT_TRUE(rep.shrunk) << e.name;
    EXPECT_EQ(rep.traces_run, static_cast<int>(rep.failure->trace_index) + 1);
    TraceRun again = run_trace(typed, *a, rep.shrunk->trace);
    ASSERT_FALSE(again.passed()) << e.name;
    EXPECT_EQ(again.verdict.kind, rep.failure->verdict.kind) << e.name;
    EXPECT_EQ(rep.shrunk->verdict.kind, rep.failure->verdict.kind) << e.name;
    EXPECT_EQ(*again.failed_at + 1, rep.shrunk->trace.size()) << e.name;
    EXPECT_TRUE(one_minimal(typed, *a, rep.shrunk->trace, again.verdict.kind)) << e.name;
  }
  EXPECT_GE(mutants, 7);
}

TEST(StmRun, Q3OnQueueSpecShrinksToCreatePop) {
  TypedSpec typed = load("queue.mli.spec");
  auto q3 = impl("mutant_Q3");
  GenConfig cfg;
  cfg.seed = 7;
  cfg.trace_count = 5000;
  TestReport rep = run_tests(typed, *q3, cfg);
  ASSERT_TRUE(rep.shrunk);
  EXPECT_EQ(to_string(rep.shrunk->trace), "[create (); pop s0]");
}

TEST(StmRun, FrameBugYieldsModifiesViolation) {
  TypedSpec typed = load("counter.mli.spec");
  auto a = impl("counter_frame_bug");
  GenConfig cfg;
  cfg.seed = 7;
  cfg.trace_count = 100;
  TestReport rep = run_tests(typed, *a, cfg);
  ASSERT_TRUE(rep.failure);
  EXPECT_EQ(rep.failure->verdict.kind, VerdictKind::ModifiesViolation);
  EXPECT_EQ(rep.failure->verdict.field, "misses");
  ASSERT_TRUE(rep.shrunk);
  EXPECT_EQ(to_string(rep.shrunk->trace), "[create (); total s0]");
}

TEST(StmRun, ReportIsDeterministicAndIndependentOfJobs) {
  TypedSpec typed = load("queue_ortac.mli.spec");
  auto a = impl("mutant_Q1");
  GenConfig cfg;
  cfg.seed = 11;
  cfg.trace_count = 400;
  TestReport one = run_tests(typed, *a, cfg);
  TestReport two = run_tests(typed, *a, cfg);
  cfg.jobs = 3;
  TestReport par = run_tests(typed, *a, cfg);
  for (const TestReport* r : {&two, &par}) {
    EXPECT_EQ(r->traces_run, one.traces_run);
    EXPECT_EQ(r->passed, one.passed);
    EXPECT_EQ(r->commands_run, one.commands_run);
    ASSERT_TRUE(r->failure && one.failure);
    EXPECT_EQ(r->failure->trace_index, one.failure->trace_index);
    EXPECT_EQ(r->failure->trace, one.failure->trace);
    EXPECT_EQ(r->shrunk->trace, one.shrunk->trace);
  }
}

TEST(StmRun, MissingConstructorIsConfigError) {
  TypedSpec typed = typecheck(parse_interface(R"(
type t
(*@ mutable model n : int *)
val get : t -> int
)", "noctor.mli"));
  auto a = impl("counter");
  EXPECT_THROW(plan_stm(typed, *a), ConfigError);
  GenConfig cfg;
  EXPECT_THROW(run_tests(typed, *a, cfg), ConfigError);
  cfg.trace_count = 0;
  TypedSpec q = load("queue.mli.spec");
  EXPECT_THROW(run_tests(q, *impl("queue_two_list"), cfg), ConfigError);
}

TEST(StmRun, HashtblTracesReuseKeys) {
  TypedSpec typed = load("hashtbl_ext.mli.spec");
  auto a = impl("hashtbl_bucket");
  StmPlan plan = plan_stm(typed, *a);
  GenConfig cfg;
  std::size_t hits = 0, finds = 0;
  for (std::uint64_t i = 0; i < 300; ++i) {
    Trace t = generate_trace(typed, plan, cfg, i);
    EXPECT_EQ(t[0].args.size(), 2u);
    EXPECT_EQ(t[0].args[0], Value::unit());
    TraceRun r = run_trace(typed, *a, t);
    ASSERT_TRUE(r.passed()) << to_string(t) << ": " << r.verdict.summary();
    for (std::size_t k = 0; k < t.size(); ++k)
      if (t[k].op == "find") {
        ++finds;
        if (!r.calls[k].raised) ++hits;
      }
  }
  EXPECT_GT(finds, 0u);
  EXPECT_GT(hits, finds / 10);
}

// Two-list and linked queues agree on results and exceptions for every trace
// of length up to 6 with arguments in -3..3.
TEST(StmEquivalence, QueuesAgreeExhaustively) {
  std::vector<Command> steps = {pop(), is_empty()};
  for (std::int64_t x = -3; x <= 3; ++x) steps.push_back(push(x));
  std::size_t traces = 0;
  std::vector<std::size_t> idx;
  auto observe = [&](ImplAdapter& a) {
    std::vector<std::string> out;
    Value q = a.invoke("create", {Value::unit()}).result;
    for (std::size_t k : idx) {
      std::vector<Value> args = steps[k].args;
      args[0] = q;
      CallOutcome o = a.invoke(steps[k].op, args);
      out.push_back(o.raised ? "!" + *o.raised : o.result.to_string());
    }
    return out;
  };
  std::function<void()> rec = [&] {
    auto two = make_two_list_queue();
    auto linked = make_linked_queue();
    ASSERT_EQ(observe(*two), observe(*linked));
    ++traces;
    if (idx.size() == 5) return;
    for (std::size_t k = 0; k < steps.size(); ++k) {
      idx.push_back(k);
      rec();
      idx.pop_back();
    }
  };
  rec();
  EXPECT_EQ(traces, 1u + 9u + 81u + 729u + 6561u + 59049u);
}

}  // namespace
