#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "speclite/corpus/adapters.hpp"
#include "speclite/corpus/graph_suite.hpp"
#include "speclite/corpus/hashtbl.hpp"
#include "speclite/corpus/path.hpp"
#include "speclite/corpus/queues.hpp"
#include "speclite/parser.hpp"
#include "speclite/stm.hpp"
#include "test_support.hpp"

using namespace speclite;
using namespace speclite::corpus;

namespace {

TypedSpec load(const std::string& file) { return typecheck(parse_interface(speclite::testing::read_spec(file), file)); }

GraphModel chain(int n) {
  GraphModel g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(Vertex{i}, Vertex{i + 1});
  return g;
}

std::vector<bool> set_of(int n, std::initializer_list<int> ids) {
  std::vector<bool> s(static_cast<std::size_t>(n), false);
  for (int i : ids) s[static_cast<std::size_t>(i)] = true;
  return s;
}

// ---- queues ------------------------------------------------------------------

TEST(TwoListQueue, PushGoesOntoRear) {
  TwoListQueue<int> q;
  q.front() = {1};
  q.rear() = {2};
  q.push(3);
  EXPECT_EQ(std::vector<int>(q.front().begin(), q.front().end()), std::vector<int>{1});
  EXPECT_EQ(std::vector<int>(q.rear().begin(), q.rear().end()), (std::vector<int>{3, 2}));
  EXPECT_EQ(q.elems(), (std::vector<int>{1, 2, 3}));
}

TEST(TwoListQueue, PushOnEmptyFillsFront) {
  TwoListQueue<int> q;
  q.push(5);
  EXPECT_EQ(q.front().size(), 1u);
  EXPECT_TRUE(q.rear().empty());
}

TEST(TwoListQueue, PopRefillsFrontFromRear) {
  TwoListQueue<int> q;
  for (int i = 1; i <= 4; ++i) q.push(i);
  EXPECT_EQ(q.pop(), 1);
  EXPECT_EQ(std::vector<int>(q.front().begin(), q.front().end()), (std::vector<int>{2, 3, 4}));
  EXPECT_TRUE(q.rear().empty());
  EXPECT_EQ(q.pop(), 2);
  EXPECT_EQ(q.elems(), (std::vector<int>{3, 4}));
}

TEST(TwoListQueue, PopOnEmptyRaisesAndKeepsState) {
  TwoListQueue<int> q;
  EXPECT_THROW(q.pop(), Empty);
  EXPECT_TRUE(q.is_empty());
  EXPECT_TRUE(q.elems().empty());
}

TEST(TwoListQueue, TransferAppendsAndEmptiesSource) {
  TwoListQueue<int> q1, q2;
  q1.push(1);
  q2.push(2);
  q2.transfer_from(q1);
  EXPECT_TRUE(q1.elems().empty());
  EXPECT_EQ(q2.elems(), (std::vector<int>{2, 1}));
}

TEST(LinkedQueue, ShapeFollowsOperations) {
  LinkedQueue<int> q;
  EXPECT_FALSE(q.shape_error());
  for (int i = 0; i < 5; ++i) q.push(i);
  EXPECT_EQ(q.length(), 5u);
  EXPECT_EQ(q.pop(), 0);
  EXPECT_EQ(q.elems(), (std::vector<int>{1, 2, 3, 4}));
  EXPECT_FALSE(q.shape_error());
  while (!q.is_empty()) q.pop();
  EXPECT_FALSE(q.shape_error());
  EXPECT_THROW(q.pop(), Empty);
}

TEST(LinkedQueue, LongQueueDestroysIteratively) {
  auto q = std::make_unique<LinkedQueue<int>>();
  for (int i = 0; i < 200000; ++i) q->push(i);
  q.reset();
  SUCCEED();
}

// ---- hash table ----------------------------------------------------------------

TEST(BucketHashtbl, CreateIsEmpty) {
  BucketHashtbl<std::int64_t, bool> h(97);
  EXPECT_EQ(h.bucket_count(), 97u);
  EXPECT_TRUE(h.contents().empty());
}

TEST(BucketHashtbl, AddPrependsPerKey) {
  BucketHashtbl<std::int64_t, bool> h(16);
  h.add(1, true);
  h.add(1, false);
  auto c = h.contents();
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], (std::pair<std::int64_t, bool>{1, false}));
  EXPECT_EQ(c[1], (std::pair<std::int64_t, bool>{1, true}));
  EXPECT_FALSE(*h.find(1));
  h.remove(1);
  EXPECT_TRUE(*h.find(1));
  EXPECT_FALSE(h.shape_error());
}

TEST(BucketHashtbl, MemOfAbsentKey) {
  BucketHashtbl<std::int64_t, bool> h(4);
  h.add(1, true);
  EXPECT_FALSE(h.mem(2));
  EXPECT_TRUE(h.mem(1));
}

TEST(BucketHashtbl, SizeIsClamped) {
  EXPECT_EQ((BucketHashtbl<std::int64_t, bool>(-5).bucket_count()), 1u);
  EXPECT_EQ((BucketHashtbl<std::int64_t, bool>(1 << 30).bucket_count()), 65536u);
}

TEST(BucketHashtbl, ContentsAgreeWithAssociationList) {
  SplitMix64 rng(17);
  BucketHashtbl<std::int64_t, bool> h(3);
  std::vector<std::pair<std::int64_t, bool>> model;
  for (int i = 0; i < 3000; ++i) {
    std::int64_t k = rng.between(-6, 6);
    if (rng.chance(0.7)) {
      bool v = rng.chance(0.5);
      h.add(k, v);
      model.insert(model.begin(), {k, v});
    } else {
      h.remove(k);
      auto it = std::find_if(model.begin(), model.end(), [&](const auto& e) { return e.first == k; });
      if (it != model.end()) model.erase(it);
    }
    ASSERT_EQ(h.contents(), model);
    ASSERT_FALSE(h.shape_error());
  }
}

// ---- catalog -------------------------------------------------------------------

TEST(Catalog, HasEveryMutant) {
  std::set<std::string> ids;
  for (const auto& e : registry()) {
    if (!e.mutant.empty()) ids.insert(e.mutant);
    EXPECT_EQ(find_impl(e.name), &e);
  }
  for (const char* id : {"Q1", "Q2", "Q3", "Q4", "Q5", "H1", "H2"}) EXPECT_TRUE(ids.count(id)) << id;
  EXPECT_EQ(find_impl("no_such_impl"), nullptr);
}

TEST(Catalog, Q3FailsOnCreatePop) {
  TypedSpec typed = load("queue_ortac.mli.spec");
  auto a = find_impl("mutant_Q3")->make();
  TraceRun r = run_trace(typed, *a, {{"create", {Value::unit()}, 0}, {"pop", {Value::instance(0)}, -1}});
  ASSERT_FALSE(r.passed());
  EXPECT_EQ(*r.failed_at, 1u);
  EXPECT_EQ(r.verdict.kind, VerdictKind::PostViolation);
}

TEST(Catalog, H2FailsOnCreateMem) {
  TypedSpec typed = load("hashtbl.mli.spec");
  auto a = find_impl("mutant_H2")->make();
  TraceRun r = run_trace(typed, *a,
                         {{"create", {Value::unit(), Value::integer(5)}, 0},
                          {"mem", {Value::instance(0), Value::integer(0)}, -1}});
  ASSERT_FALSE(r.passed());
  EXPECT_EQ(*r.failed_at, 1u);
  EXPECT_EQ(r.verdict.kind, VerdictKind::PostViolation);
  EXPECT_NE(r.verdict.clause.find("List.mem"), std::string::npos) << r.verdict.clause;
}

// ---- check_path ------------------------------------------------------------------

TEST(CheckPath, SourceReachesItself) {
  for (int n = 1; n <= 3; ++n) {
    GraphModel g(n);
    for (int v = 0; v < n; ++v) EXPECT_TRUE(check_path(g, Vertex{v}, Vertex{v}).answer());
  }
}

TEST(CheckPath, Examples) {
  GraphModel abc = chain(3);
  EXPECT_TRUE(check_path(abc, Vertex{0}, Vertex{2}).answer());
  EXPECT_FALSE(check_path(abc, Vertex{2}, Vertex{0}).answer());
  GraphModel two(2);
  PathResult r = check_path(two, Vertex{0}, Vertex{1});
  EXPECT_EQ(r.status, PathStatus::NotFound);
  EXPECT_FALSE(r.answer());
}

TEST(CheckPath, SourceOutsideDomainIsPreViolation) {
  GraphModel g = chain(2);
  EXPECT_EQ(check_path(g, Vertex{2}, Vertex{0}).status, PathStatus::PreViolation);
  EXPECT_EQ(check_path(g, Vertex{-1}, Vertex{0}).status, PathStatus::PreViolation);
  // The target is unconstrained.
  EXPECT_EQ(check_path(g, Vertex{0}, Vertex{7}).status, PathStatus::NotFound);
}

TEST(CheckPath, CyclesTerminateWithinBudget) {
  GraphModel g(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g.add_edge(Vertex{i}, Vertex{j});
  PathResult r = check_path(g, Vertex{0}, Vertex{9}, {true});
  EXPECT_EQ(r.status, PathStatus::NotFound);
  EXPECT_LE(r.steps, path_budget(g));
  EXPECT_EQ(r.bridges, 0u);  // no witness path to validate
  r = check_path(g, Vertex{0}, Vertex{3}, {true});
  EXPECT_EQ(r.status, PathStatus::Found);
  EXPECT_EQ(r.bridges, r.loop_heads);
}

TEST(CheckPath, SkipsFirstSuccessorMutant) {
  GraphModel abc = chain(3);
  PathOptions o;
  o.fault = PathFault::SkipsFirstSuccessor;
  EXPECT_FALSE(check_path(abc, Vertex{0}, Vertex{2}, o).answer());
  EXPECT_TRUE(reachability_oracle(abc, Vertex{0}, Vertex{2}));
  o.monitors = true;
  PathResult r = check_path(abc, Vertex{0}, Vertex{2}, o);
  EXPECT_EQ(r.status, PathStatus::MonitorViolation);
  EXPECT_EQ(r.monitor, MonitorKind::Completeness);
}

TEST(CheckPath, ForgetsToMarkMutant) {
  // The cycle 1 <-> 2 avoids the only marked vertex.
  GraphModel g(3);
  g.add_edge(Vertex{0}, Vertex{1});
  g.add_edge(Vertex{1}, Vertex{2});
  g.add_edge(Vertex{2}, Vertex{1});
  PathOptions o;
  o.fault = PathFault::ForgetsToMark;
  PathResult r = check_path(g, Vertex{0}, Vertex{5}, o);
  EXPECT_EQ(r.status, PathStatus::BudgetExceeded);
  EXPECT_EQ(r.steps, path_budget(g) + 1);
  o.monitors = true;
  GraphModel fan(3);
  fan.add_edge(Vertex{0}, Vertex{1});
  fan.add_edge(Vertex{0}, Vertex{2});
  fan.add_edge(Vertex{1}, Vertex{2});
  r = check_path(fan, Vertex{0}, Vertex{5}, o);
  EXPECT_EQ(r.status, PathStatus::MonitorViolation);
  EXPECT_EQ(r.monitor, MonitorKind::NoDuplicates);
}

TEST(CheckPath, MonitorsValidateBridges) {
  GraphModel g = chain(5);
  PathOptions o;
  o.monitors = true;
  PathResult r = check_path(g, Vertex{0}, Vertex{4}, o);
  EXPECT_EQ(r.status, PathStatus::Found);
  // One bridge per loop head: v1 itself, then each chain vertex in turn.
  EXPECT_EQ(r.bridges, r.loop_heads);
  EXPECT_EQ(r.loop_heads, 5u);
}

TEST(IntermediateValue, Examples) {
  // v1 marked and not visited, v1 = v2.
  EXPECT_EQ(intermediate_value(set_of(1, {0}), set_of(1, {}), Vertex{0}, {}).id, 0);
  // a -> b -> c, visited {a}, frontier {b}.
  EXPECT_EQ(intermediate_value(set_of(3, {0, 1}), set_of(3, {0}), Vertex{0}, {Vertex{1}, Vertex{2}}).id, 1);
  // a -> b -> c -> d, visited {a, b}, frontier {c}.
  EXPECT_EQ(intermediate_value(set_of(4, {0, 1, 2}), set_of(4, {0, 1}), Vertex{0},
                               {Vertex{1}, Vertex{2}, Vertex{3}})
                .id,
            2);
}

TEST(IntermediateValue, NoBridgeWhenNothingIsOnTheFrontier) {
  EXPECT_THROW(intermediate_value(set_of(3, {0, 1}), set_of(3, {0, 1}), Vertex{0}, {Vertex{1}, Vertex{2}}),
               NoBridge);
  EXPECT_THROW(intermediate_value(set_of(2, {}), set_of(2, {}), Vertex{0}, {Vertex{1}}), NoBridge);
}

// Brute-force scan of the definition: the bridge is marked, not visited,
// and every vertex before it on the path is visited.
TEST(IntermediateValue, MatchesDefinitionOnRandomSets) {
  SplitMix64 rng(5);
  for (int iter = 0; iter < 5000; ++iter) {
    int n = static_cast<int>(rng.between(1, 6));
    std::vector<bool> marked(static_cast<std::size_t>(n)), visited(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      visited[static_cast<std::size_t>(v)] = rng.chance(0.4);
      marked[static_cast<std::size_t>(v)] = visited[static_cast<std::size_t>(v)] || rng.chance(0.4);
    }
    std::vector<Vertex> path(rng.below(5));
    for (auto& v : path) v = Vertex{static_cast<int>(rng.below(static_cast<std::uint64_t>(n)))};
    std::vector<Vertex> full = {Vertex{0}};
    full.insert(full.end(), path.begin(), path.end());
    std::optional<int> expect;
    for (Vertex v : full)
      if (marked[static_cast<std::size_t>(v.id)] && !visited[static_cast<std::size_t>(v.id)]) {
        expect = v.id;
        break;
      }
    if (expect) EXPECT_EQ(intermediate_value(marked, visited, Vertex{0}, path).id, *expect);
    else EXPECT_THROW(intermediate_value(marked, visited, Vertex{0}, path), NoBridge);
  }
}

// Sampled version of the full reachability suite run by the acceptance
// binary.
TEST(PathSuite, AgreesWithOracleMonitorsHoldGhostIsInvisible) {
  GraphSuite suite;
  suite.stride = 13;
  suite.count = 1500;
  std::uint64_t runs = 0, disagreements = 0, violations = 0, differences = 0, bridges = 0;
  suite.for_each([&](const GraphModel& g, const std::vector<Vertex>& sources) {
    ASSERT_TRUE(g.closed());
    for (Vertex v1 : sources) {
      ReachTree oracle = reach_tree(g, v1);
      for (int t = 0; t < g.size(); ++t) {
        Vertex v2{t};
        PathResult plain = check_path(g, v1, v2, {}, &oracle);
        PathOptions ghost;
        ghost.ghost = true;
        PathResult shadow = check_path(g, v1, v2, ghost, &oracle);
        PathOptions mon;
        mon.monitors = true;
        PathResult watched = check_path(g, v1, v2, mon, &oracle);
        ++runs;
        disagreements += plain.answer() != oracle.reaches(v2);
        violations += watched.status == PathStatus::MonitorViolation;
        differences += plain.status != shadow.status || plain.steps != shadow.steps ||
                       plain.status != watched.status || plain.steps != watched.steps;
        bridges += watched.bridges;
      }
    }
  });
  EXPECT_GT(runs, 100000u);
  EXPECT_EQ(disagreements, 0u);
  EXPECT_EQ(violations, 0u);
  EXPECT_EQ(differences, 0u);
  EXPECT_GT(bridges, runs);
}

TEST(PathSuite, GraphMutantsAreDetected) {
  GraphSuite suite;
  suite.count = 1000;
  for (PathFault fault : {PathFault::ForgetsToMark, PathFault::SkipsFirstSuccessor}) {
    std::uint64_t caught = 0, monitor_hits = 0;
    suite.for_each_random([&](const GraphModel& g, const std::vector<Vertex>& sources) {
      Vertex v1 = sources[0];
      ReachTree oracle = reach_tree(g, v1);
      for (int t = 0; t < g.size(); ++t) {
        PathOptions o;
        o.fault = fault;
        PathResult r = check_path(g, v1, Vertex{t}, o, &oracle);
        caught += r.status == PathStatus::BudgetExceeded || r.answer() != oracle.reaches(Vertex{t});
        o.monitors = true;
        monitor_hits += check_path(g, v1, Vertex{t}, o, &oracle).status == PathStatus::MonitorViolation;
      }
    });
    EXPECT_GT(caught, 0u) << static_cast<int>(fault);
    EXPECT_GT(monitor_hits, 0u) << static_cast<int>(fault);
  }
}

TEST(PathSuite, GeneratorIsDocumentedSize) {
  GraphSuite suite;
  suite.count = 10;
  std::uint64_t n = 0;
  std::uint64_t graphs = suite.for_each_exhaustive([&](const GraphModel&, const std::vector<Vertex>&) { ++n; });
  EXPECT_EQ(graphs, n);
  EXPECT_EQ(n, 2u + 16u + 512u + 65536u + (1u << 20));
}

// The generic checker works for any COMPARABLE vertex type.
struct NamedVertex {
  std::string name;
  static int compare(const NamedVertex& a, const NamedVertex& b) { return a.name.compare(b.name); }
  static bool equal(const NamedVertex& a, const NamedVertex& b) { return a.name == b.name; }
  static std::size_t hash(const NamedVertex& v) { return std::hash<std::string>{}(v.name); }
};

struct NamedGraph {
  using V = NamedVertex;
  using gt = std::map<std::string, std::vector<NamedVertex>>;
  static const std::vector<NamedVertex>& successors(const gt& g, const NamedVertex& v) {
    static const std::vector<NamedVertex> none;
    auto it = g.find(v.name);
    return it == g.end() ? none : it->second;
  }
};

TEST(CheckPath, GenericOverVertexType) {
  NamedGraph::gt g = {{"a", {{"b"}}}, {"b", {{"c"}, {"a"}}}, {"c", {}}, {"d", {{"a"}}}};
  using C = Check<NamedGraph>;
  EXPECT_EQ(C::check_path(g, {"a"}, {"c"}, {}).outcome, C::Outcome::Found);
  EXPECT_EQ(C::check_path(g, {"a"}, {"d"}, {}).outcome, C::Outcome::NotFound);
  EXPECT_EQ(C::check_path(g, {"d"}, {"c"}, {}).outcome, C::Outcome::Found);
}

}  // namespace
