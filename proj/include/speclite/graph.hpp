#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "speclite/rng.hpp"
#include "speclite/value.hpp"

namespace speclite {

/// Graph vertex with the COMPARABLE operations (compare, equal, hash),
/// identified by a dense integer.
struct Vertex {
  int id = 0;

  static int compare(Vertex a, Vertex b) { return a.id < b.id ? -1 : a.id > b.id ? 1 : 0; }
  static bool equal(Vertex a, Vertex b) { return compare(a, b) == 0; }
  static std::size_t hash(Vertex v) { return std::hash<int>{}(v.id); }

  friend bool operator==(Vertex a, Vertex b) { return equal(a, b); }
  friend bool operator<(Vertex a, Vertex b) { return compare(a, b) < 0; }
};

struct VertexHash {
  std::size_t operator()(Vertex v) const { return Vertex::hash(v); }
};

class GraphError : public std::runtime_error {
 public:
  GraphError(int line, const std::string& msg)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Finite directed graph over the domain {0, ..., n-1}. Successor lists are
/// sorted and duplicate free, and every edge stays inside the domain (the
/// closure invariant), which add_edge enforces.
class GraphModel {
 public:
  GraphModel() = default;
  explicit GraphModel(int n, std::vector<std::string> labels = {});

  int size() const { return static_cast<int>(succ_.size()); }
  bool contains(Vertex v) const { return v.id >= 0 && v.id < size(); }
  void add_edge(Vertex u, Vertex w);
  bool has_edge(Vertex u, Vertex w) const;
  const std::vector<Vertex>& successors(Vertex v) const { return succ_.at(static_cast<std::size_t>(v.id)); }
  std::size_t edge_count() const;

  /// Checks the closure invariant from scratch.
  bool closed() const;

  std::string label(Vertex v) const;
  std::optional<Vertex> find(std::string_view label) const;

  /// Line format: `vertices: a b c`, then one `edge: u v` per line. Blank
  /// lines and lines starting with '#' are ignored.
  static GraphModel parse(std::string_view text);
  std::string to_text() const;

  /// Stores the graph's models (`dom` as a set, `succ` as a map to sets) as
  /// instance `id` of `state`.
  Value store(ModelState& state, std::int64_t id, const std::string& type = "gt") const;

 private:
  std::vector<std::vector<Vertex>> succ_;
  std::vector<std::string> labels_;
};

/// `edge u w g`: u in dom and w a successor of u.
bool edge(const GraphModel& g, Vertex u, Vertex w);

/// The is_path predicate over a concrete graph.
bool eval_is_path(const GraphModel& g, Vertex v1, Vertex v2, const std::vector<Vertex>& path);

/// Reachability by naive least fixpoint over the domain (no search order, no
/// queue). Independent of check_path; the reference answer for all graph
/// experiments.
bool reachability_oracle(const GraphModel& g, Vertex v1, Vertex v2);

/// Membership vector of the vertices reachable from v1, same fixpoint.
std::vector<bool> reachable_from(const GraphModel& g, Vertex v1);

/// Reachable set from one source with a parent for every reached vertex,
/// by the same fixpoint.
struct ReachTree {
  Vertex source;
  std::vector<bool> reached;
  std::vector<int> parent;  // -1 for the source and unreached vertices

  bool reaches(Vertex v) const { return v.id >= 0 && v.id < static_cast<int>(reached.size()) && reached[v.id]; }
  /// Path from the source to v (is_path holds for it), if v is reached.
  std::optional<std::vector<Vertex>> path_to(Vertex v) const;
};

ReachTree reach_tree(const GraphModel& g, Vertex v1);

/// A path witnessing reachability (is_path holds for it), if any.
std::optional<std::vector<Vertex>> find_path(const GraphModel& g, Vertex v1, Vertex v2);

// ---- generators ----------------------------------------------------------

/// Random graph: |dom| uniform in [1, max_vertices], edge density uniform in
/// [0, 1], each ordered pair (self loops included) an edge with that
/// probability.
GraphModel random_graph(SplitMix64& rng, int max_vertices);

/// Graph number `bits` of the exhaustive grid over n vertices: bit k encodes
/// the k-th ordered pair (u, w) in row-major order, skipping u = w when
/// self loops are excluded.
GraphModel grid_graph(int n, std::uint64_t bits, bool self_loops);

/// Number of graphs in that grid: 2^(n*n) or 2^(n*(n-1)).
std::uint64_t grid_size(int n, bool self_loops);

}  // namespace speclite
