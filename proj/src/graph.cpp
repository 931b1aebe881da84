#include "speclite/graph.hpp"

#include <algorithm>
#include <sstream>

namespace speclite {

GraphModel::GraphModel(int n, std::vector<std::string> labels)
    : succ_(static_cast<std::size_t>(std::max(n, 0))), labels_(std::move(labels)) {
  if (!labels_.empty() && labels_.size() != succ_.size())
    throw GraphError(0, "label count does not match the vertex count");
}

void GraphModel::add_edge(Vertex u, Vertex w) {
  if (!contains(u) || !contains(w))
    throw GraphError(0, "edge " + std::to_string(u.id) + " -> " + std::to_string(w.id) +
                            " leaves the vertex set");
  auto& out = succ_[static_cast<std::size_t>(u.id)];
  auto it = std::lower_bound(out.begin(), out.end(), w);
  if (it == out.end() || !(*it == w)) out.insert(it, w);
}

bool GraphModel::has_edge(Vertex u, Vertex w) const {
  if (!contains(u)) return false;
  const auto& out = successors(u);
  return std::binary_search(out.begin(), out.end(), w);
}

std::size_t GraphModel::edge_count() const {
  std::size_t n = 0;
  for (const auto& s : succ_) n += s.size();
  return n;
}

bool GraphModel::closed() const {
  for (const auto& s : succ_)
    for (Vertex w : s)
      if (!contains(w)) return false;
  return true;
}

std::string GraphModel::label(Vertex v) const {
  if (labels_.empty()) return std::to_string(v.id);
  return labels_.at(static_cast<std::size_t>(v.id));
}

std::optional<Vertex> GraphModel::find(std::string_view name) const {
  if (labels_.empty()) {
    int id = 0;
    std::istringstream in{std::string(name)};
    if (in >> id && in.eof() && contains(Vertex{id})) return Vertex{id};
    return std::nullopt;
  }
  auto it = std::find(labels_.begin(), labels_.end(), name);
  if (it == labels_.end()) return std::nullopt;
  return Vertex{static_cast<int>(it - labels_.begin())};
}

GraphModel GraphModel::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  std::optional<GraphModel> g;
  auto words = [](const std::string& s) {
    std::istringstream ws(s);
    std::vector<std::string> out;
    for (std::string w; ws >> w;) out.push_back(w);
    return out;
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto colon = line.find(':');
    std::string key = colon == std::string::npos ? "" : line.substr(first, colon - first);
    std::vector<std::string> rest = colon == std::string::npos ? std::vector<std::string>{}
                                                               : words(line.substr(colon + 1));
    if (key == "vertices") {
      if (g) throw GraphError(lineno, "duplicate 'vertices:' line");
      if (rest.empty()) throw GraphError(lineno, "a graph needs at least one vertex");
      std::vector<std::string> sorted = rest;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw GraphError(lineno, "duplicate vertex name");
      g.emplace(static_cast<int>(rest.size()), rest);
    } else if (key == "edge") {
      if (!g) throw GraphError(lineno, "'edge:' before 'vertices:'");
      if (rest.size() != 2) throw GraphError(lineno, "expected 'edge: <from> <to>'");
      auto u = g->find(rest[0]);
      auto w = g->find(rest[1]);
      if (!u || !w)
        throw GraphError(lineno, "edge " + rest[0] + " -> " + rest[1] + " leaves the vertex set");
      g->add_edge(*u, *w);
    } else {
      throw GraphError(lineno, "expected 'vertices:' or 'edge:'");
    }
  }
  if (!g) throw GraphError(0, "missing 'vertices:' line");
  return std::move(*g);
}

std::string GraphModel::to_text() const {
  std::string s = "vertices:";
  for (int v = 0; v < size(); ++v) s += " " + label(Vertex{v});
  s += "\n";
  for (int u = 0; u < size(); ++u)
    for (Vertex w : successors(Vertex{u})) s += "edge: " + label(Vertex{u}) + " " + label(w) + "\n";
  return s;
}

Value GraphModel::store(ModelState& state, std::int64_t id, const std::string& type) const {
  std::vector<Value> dom;
  std::vector<std::pair<Value, Value>> succ;
  for (int v = 0; v < size(); ++v) {
    dom.push_back(Value::vertex(v));
    std::vector<Value> out;
    for (Vertex w : successors(Vertex{v})) out.push_back(Value::vertex(w.id));
    succ.emplace_back(Value::vertex(v), Value::set(std::move(out)));
  }
  auto& inst = state.instances[id];
  inst.type = type;
  inst.fields["dom"] = Value::set(std::move(dom));
  inst.fields["succ"] = Value::map(std::move(succ));
  return Value::instance(id);
}

bool edge(const GraphModel& g, Vertex u, Vertex w) { return g.contains(u) && g.has_edge(u, w); }

bool eval_is_path(const GraphModel& g, Vertex v1, Vertex v2, const std::vector<Vertex>& path) {
  std::size_t len = path.size();
  if (len == 0) return v1 == v2;
  if (!edge(g, v1, path[0]) || !(path[len - 1] == v2) || !g.contains(v1)) return false;
  for (std::size_t i = 0; i + 1 < len; ++i)
    if (!edge(g, path[i], path[i + 1])) return false;
  return true;
}

std::vector<bool> reachable_from(const GraphModel& g, Vertex v1) { return reach_tree(g, v1).reached; }

bool reachability_oracle(const GraphModel& g, Vertex v1, Vertex v2) {
  if (v1 == v2) return true;
  if (!g.contains(v1) || !g.contains(v2)) return false;
  return reachable_from(g, v1)[static_cast<std::size_t>(v2.id)];
}

ReachTree reach_tree(const GraphModel& g, Vertex v1) {
  ReachTree t{v1, std::vector<bool>(static_cast<std::size_t>(g.size()), false),
              std::vector<int>(static_cast<std::size_t>(g.size()), -1)};
  if (!g.contains(v1)) return t;
  t.reached[static_cast<std::size_t>(v1.id)] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int u = 0; u < g.size(); ++u) {
      if (!t.reached[static_cast<std::size_t>(u)]) continue;
      for (Vertex w : g.successors(Vertex{u})) {
        if (!t.reached[static_cast<std::size_t>(w.id)]) {
          t.reached[static_cast<std::size_t>(w.id)] = true;
          t.parent[static_cast<std::size_t>(w.id)] = u;
          changed = true;
        }
      }
    }
  }
  return t;
}

std::optional<std::vector<Vertex>> ReachTree::path_to(Vertex v) const {
  if (v == source) return std::vector<Vertex>{};
  if (!reaches(v)) return std::nullopt;
  std::vector<Vertex> path;
  for (int u = v.id; u != source.id; u = parent[static_cast<std::size_t>(u)]) path.push_back(Vertex{u});
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<std::vector<Vertex>> find_path(const GraphModel& g, Vertex v1, Vertex v2) {
  if (v1 == v2) return std::vector<Vertex>{};
  if (!g.contains(v1) || !g.contains(v2)) return std::nullopt;
  return reach_tree(g, v1).path_to(v2);
}

GraphModel random_graph(SplitMix64& rng, int max_vertices) {
  int n = static_cast<int>(rng.between(1, max_vertices));
  double density = rng.unit();
  GraphModel g(n);
  for (int u = 0; u < n; ++u)
    for (int w = 0; w < n; ++w)
      if (rng.chance(density)) g.add_edge(Vertex{u}, Vertex{w});
  return g;
}

GraphModel grid_graph(int n, std::uint64_t bits, bool self_loops) {
  GraphModel g(n);
  int k = 0;
  for (int u = 0; u < n; ++u) {
    for (int w = 0; w < n; ++w) {
      if (u == w && !self_loops) continue;
      if ((bits >> k) & 1U) g.add_edge(Vertex{u}, Vertex{w});
      ++k;
    }
  }
  return g;
}

std::uint64_t grid_size(int n, bool self_loops) {
  int pairs = self_loops ? n * n : n * (n - 1);
  return std::uint64_t{1} << pairs;
}

}  // namespace speclite
