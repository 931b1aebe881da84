#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "speclite/corpus/queues.hpp"
#include "speclite/graph.hpp"

namespace speclite::corpus {

enum class PathFault {
  None,
  ForgetsToMark,        // G1: successors are enqueued but never marked
  SkipsFirstSuccessor,  // G2: iter_succ ignores the head of the successor list
};

/// BFS path checker over any graph signature G providing
///   using V = ...;   // with static compare / equal / hash
///   using gt = ...;
///   static const std::vector<V>& successors(const gt&, V);
template <class G>
class Check {
 public:
  using V = typename G::V;
  using gt = typename G::gt;

  struct HashV {
    std::size_t operator()(const V& v) const { return V::hash(v); }
  };
  struct EqV {
    bool operator()(const V& a, const V& b) const { return V::equal(a, b); }
  };
  using VSet = std::unordered_set<V, HashV, EqV>;

  /// What a loop-head observer sees.
  struct LoopHead {
    const VSet& marked;
    const VSet* visited;  // null when the ghost state is off
    const TwoListQueue<V>& q;
  };

  struct Options {
    bool ghost = false;
    PathFault fault = PathFault::None;
    std::uint64_t budget = 0;  // steps; 0 means unlimited
    /// Called at every loop head; returning false aborts the search.
    std::function<bool(const LoopHead&)> at_loop_head;
  };

  enum class Outcome { Found, NotFound, Aborted, BudgetExceeded };

  struct Run {
    Outcome outcome = Outcome::NotFound;
    std::uint64_t steps = 0;
    std::uint64_t loop_heads = 0;
  };

  static Run check_path(const gt& graph, V v1, V v2, const Options& opt) {
    Run run;
    VSet marked;
    VSet visited;  // ghost
    TwoListQueue<V> q;
    auto step = [&] { return opt.budget != 0 && ++run.steps > opt.budget; };
    marked.insert(v1);
    q.push(v1);
    for (;;) {
      ++run.loop_heads;
      if (opt.at_loop_head && !opt.at_loop_head(LoopHead{marked, opt.ghost ? &visited : nullptr, q})) {
        run.outcome = Outcome::Aborted;
        return run;
      }
      if (step()) {
        run.outcome = Outcome::BudgetExceeded;
        return run;
      }
      if (q.is_empty()) {
        run.outcome = Outcome::NotFound;
        return run;
      }
      V v = q.pop();
      if (V::compare(v, v2) == 0) {
        run.outcome = Outcome::Found;
        return run;
      }
      if (opt.ghost) visited.insert(v);
      const auto& sucs = G::successors(graph, v);
      std::size_t first = opt.fault == PathFault::SkipsFirstSuccessor ? 1 : 0;
      for (std::size_t i = first; i < sucs.size(); ++i) {
        if (step()) {
          run.outcome = Outcome::BudgetExceeded;
          return run;
        }
        const V& w = sucs[i];
        if (marked.count(w)) continue;
        if (opt.fault != PathFault::ForgetsToMark) marked.insert(w);
        q.push(w);
      }
    }
  }
};

struct GraphSig {
  using V = Vertex;
  using gt = GraphModel;
  static const std::vector<Vertex>& successors(const GraphModel& g, Vertex v) { return g.successors(v); }
};

using GraphCheck = Check<GraphSig>;

class NoBridge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// First vertex along v1 :: witness that is marked but not visited, i.e. the
/// end of the edge that crosses from the visited set into the queue.
/// Throws NoBridge when there is none.
Vertex intermediate_value(const std::vector<bool>& marked, const std::vector<bool>& visited, Vertex v1,
                          const std::vector<Vertex>& witness);

enum class PathStatus { Found, NotFound, PreViolation, MonitorViolation, BudgetExceeded };
enum class MonitorKind { MarkedInDomain, NoDuplicates, Correctness, Completeness };

const char* to_string(PathStatus s);
const char* to_string(MonitorKind m);

struct PathOptions {
  bool monitors = false;
  bool ghost = false;  // implied by monitors
  PathFault fault = PathFault::None;
};

struct PathResult {
  PathStatus status = PathStatus::NotFound;
  std::optional<MonitorKind> monitor;
  std::string detail;
  std::uint64_t steps = 0;
  std::uint64_t loop_heads = 0;
  std::uint64_t bridges = 0;  // completeness witnesses validated

  bool answer() const { return status == PathStatus::Found; }
};

/// Step budget of every run: 10 * |dom|^2.
std::uint64_t path_budget(const GraphModel& g);

/// check_path on a concrete graph with the precondition, the budget and the
/// optional loop-head monitors. `oracle` (the reach tree of v1) may be passed
/// in to share it between runs from the same source.
PathResult check_path(const GraphModel& g, Vertex v1, Vertex v2, const PathOptions& opt = {},
                      const ReachTree* oracle = nullptr);

}  // namespace speclite::corpus
