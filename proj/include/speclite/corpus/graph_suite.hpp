#pragma once

#include <cstdint>
#include <functional>

#include "speclite/graph.hpp"

namespace speclite::corpus {

/// Graphs of the reachability experiments, each with the sources to query
/// from (every vertex of the graph is a target).
///
/// Exhaustive part: every graph over 1..4 vertices (self loops included) and
/// every loop-free graph over 5 vertices, all sources. Random part: `count`
/// graphs from random_graph(rng, 50) seeded with `seed`, one random source
/// each.
struct GraphSuite {
  std::uint64_t seed = 2024;
  std::uint64_t count = 10000;
  int max_vertices = 50;
  std::uint64_t stride = 1;  // take every stride-th exhaustive graph

  using Visit = std::function<void(const GraphModel&, const std::vector<Vertex>& sources)>;

  std::uint64_t for_each_exhaustive(const Visit& f) const {
    std::uint64_t graphs = 0;
    for (int n = 1; n <= 5; ++n) {
      bool loops = n <= 4;
      std::vector<Vertex> sources;
      for (int v = 0; v < n; ++v) sources.push_back(Vertex{v});
      std::uint64_t total = grid_size(n, loops);
      for (std::uint64_t bits = 0; bits < total; bits += stride, ++graphs) f(grid_graph(n, bits, loops), sources);
    }
    return graphs;
  }

  std::uint64_t for_each_random(const Visit& f) const {
    SplitMix64 rng(seed);
    for (std::uint64_t i = 0; i < count; ++i) {
      GraphModel g = random_graph(rng, max_vertices);
      Vertex v1{static_cast<int>(rng.below(static_cast<std::uint64_t>(g.size())))};
      f(g, {v1});
    }
    return count;
  }

  std::uint64_t for_each(const Visit& f) const { return for_each_exhaustive(f) + for_each_random(f); }
};

}  // namespace speclite::corpus
