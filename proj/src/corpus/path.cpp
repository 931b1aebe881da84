#include "speclite/corpus/path.hpp"

namespace speclite::corpus {

const char* to_string(PathStatus s) {
  switch (s) {
    case PathStatus::Found: return "Found";
    case PathStatus::NotFound: return "NotFound";
    case PathStatus::PreViolation: return "PreViolation";
    case PathStatus::MonitorViolation: return "MonitorViolation";
    case PathStatus::BudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

const char* to_string(MonitorKind m) {
  switch (m) {
    case MonitorKind::MarkedInDomain: return "marked-in-domain";
    case MonitorKind::NoDuplicates: return "queue-without-duplicates";
    case MonitorKind::Correctness: return "correctness";
    case MonitorKind::Completeness: return "completeness";
  }
  return "?";
}

Vertex intermediate_value(const std::vector<bool>& marked, const std::vector<bool>& visited, Vertex v1,
                          const std::vector<Vertex>& witness) {
  auto is = [](const std::vector<bool>& s, Vertex v) {
    return v.id >= 0 && v.id < static_cast<int>(s.size()) && s[static_cast<std::size_t>(v.id)];
  };
  if (is(marked, v1) && !is(visited, v1)) return v1;
  for (Vertex w : witness)
    if (is(marked, w) && !is(visited, w)) return w;
  throw NoBridge("no marked, unvisited vertex on the witness path");
}

std::uint64_t path_budget(const GraphModel& g) {
  auto n = static_cast<std::uint64_t>(g.size());
  return 10 * n * n;
}

namespace {

class Monitors {
 public:
  Monitors(const GraphModel& g, Vertex v1, Vertex v2, const ReachTree& oracle)
      : g_(g), v1_(v1), v2_(v2), oracle_(oracle), witness_(oracle.path_to(v2)) {}

  bool operator()(const GraphCheck::LoopHead& s) {
    std::size_t n = static_cast<std::size_t>(g_.size());
    std::vector<bool> marked(n, false), visited(n, false), queued(n, false);
    for (Vertex v : s.marked) {
      if (!g_.contains(v)) return violated(MonitorKind::MarkedInDomain, "v" + std::to_string(v.id) + " is marked");
      marked[static_cast<std::size_t>(v.id)] = true;
    }
    if (s.visited)
      for (Vertex v : *s.visited)
        if (g_.contains(v)) visited[static_cast<std::size_t>(v.id)] = true;
    for (Vertex v : s.q.elems()) {
      if (!g_.contains(v)) return violated(MonitorKind::MarkedInDomain, "v" + std::to_string(v.id) + " is queued");
      if (queued[static_cast<std::size_t>(v.id)])
        return violated(MonitorKind::NoDuplicates, "v" + std::to_string(v.id) + " is queued twice");
      queued[static_cast<std::size_t>(v.id)] = true;
    }
    for (Vertex v : s.marked)
      if (!oracle_.reaches(v))
        return violated(MonitorKind::Correctness, "marked v" + std::to_string(v.id) + " is unreachable");
    if (witness_) {
      Vertex w;
      try {
        w = intermediate_value(marked, visited, v1_, *witness_);
      } catch (const NoBridge& e) {
        return violated(MonitorKind::Completeness, e.what());
      }
      if (!queued[static_cast<std::size_t>(w.id)])
        return violated(MonitorKind::Completeness, "bridge v" + std::to_string(w.id) + " is not in the queue");
      // The suffix of the witness after w is a path from w to v2.
      std::vector<Vertex> rest;
      bool after = w == v1_;
      for (Vertex u : *witness_) {
        if (after) rest.push_back(u);
        else if (u == w) after = true;
      }
      if (!eval_is_path(g_, w, v2_, rest))
        return violated(MonitorKind::Completeness, "bridge v" + std::to_string(w.id) + " does not reach v2");
      ++bridges;
    }
    return true;
  }

  std::optional<MonitorKind> kind;
  std::string detail;
  std::uint64_t bridges = 0;

 private:
  bool violated(MonitorKind k, std::string d) {
    kind = k;
    detail = std::move(d);
    return false;
  }

  const GraphModel& g_;
  Vertex v1_, v2_;
  const ReachTree& oracle_;
  std::optional<std::vector<Vertex>> witness_;
};

}  // namespace

PathResult check_path(const GraphModel& g, Vertex v1, Vertex v2, const PathOptions& opt, const ReachTree* oracle) {
  PathResult r;
  if (!g.contains(v1)) {
    r.status = PathStatus::PreViolation;
    r.detail = "requires mem v1 graph.dom";
    return r;
  }
  GraphCheck::Options o;
  o.ghost = opt.ghost || opt.monitors;
  o.fault = opt.fault;
  o.budget = path_budget(g);
  std::optional<ReachTree> own;
  std::optional<Monitors> mon;
  if (opt.monitors) {
    if (!oracle || !(oracle->source == v1)) oracle = &own.emplace(reach_tree(g, v1));
    mon.emplace(g, v1, v2, *oracle);
    o.at_loop_head = [&mon](const GraphCheck::LoopHead& s) { return (*mon)(s); };
  }
  GraphCheck::Run run = GraphCheck::check_path(g, v1, v2, o);
  r.steps = run.steps;
  r.loop_heads = run.loop_heads;
  switch (run.outcome) {
    case GraphCheck::Outcome::Found: r.status = PathStatus::Found; break;
    case GraphCheck::Outcome::NotFound: r.status = PathStatus::NotFound; break;
    case GraphCheck::Outcome::BudgetExceeded:
      r.status = PathStatus::BudgetExceeded;
      r.detail = "more than " + std::to_string(o.budget) + " steps";
      break;
    case GraphCheck::Outcome::Aborted:
      r.status = PathStatus::MonitorViolation;
      r.monitor = mon->kind;
      r.detail = mon->detail;
      break;
  }
  if (mon) r.bridges = mon->bridges;
  return r;
}

}  // namespace speclite::corpus
