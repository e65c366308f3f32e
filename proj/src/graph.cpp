#include "nchardy/graph.hpp"

#include <algorithm>

namespace nchardy {

DirectedGraph::DirectedGraph(std::vector<std::string> vertices,
                             std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  for (int v = 0; v < n_vertices(); ++v) {
    if (!vertex_index_.emplace(vertices_[v], v).second)
      throw ContractViolation("duplicate vertex name: " + vertices_[v]);
  }
  by_rng_.resize(vertices_.size());
  by_src_.resize(vertices_.size());
  for (int e = 0; e < n_edges(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.src < 0 || ed.src >= n_vertices() || ed.rng < 0 ||
        ed.rng >= n_vertices())
      throw ContractViolation("edge " + ed.name + " has an endpoint outside G0");
    if (!edge_index_.emplace(ed.name, e).second)
      throw ContractViolation("duplicate edge name: " + ed.name);
    by_rng_[ed.rng].push_back(e);
    by_src_[ed.src].push_back(e);
  }
}

int DirectedGraph::find_vertex(const std::string& name) const {
  auto it = vertex_index_.find(name);
  return it == vertex_index_.end() ? -1 : it->second;
}

int DirectedGraph::find_edge(const std::string& name) const {
  auto it = edge_index_.find(name);
  return it == edge_index_.end() ? -1 : it->second;
}

std::shared_ptr<const DirectedGraph> DirectedGraph::cycle(int n) {
  std::vector<std::string> vs;
  std::vector<Edge> es;
  for (int i = 0; i < n; ++i) vs.push_back("v" + std::to_string(i + 1));
  for (int i = 0; i < n; ++i)
    es.push_back({"e" + std::to_string(i + 1), i, (i + 1) % n});
  return std::make_shared<DirectedGraph>(std::move(vs), std::move(es));
}

std::shared_ptr<const DirectedGraph> DirectedGraph::free_loops(int d) {
  std::vector<Edge> es;
  for (int i = 0; i < d; ++i) es.push_back({"e" + std::to_string(i + 1), 0, 0});
  return std::make_shared<DirectedGraph>(std::vector<std::string>{"v"},
                                         std::move(es));
}

Path::Path(const DirectedGraph& g, std::vector<int> edges)
    : edges_(std::move(edges)) {
  require(!edges_.empty(), "use Path(vertex) for length-0 paths");
  for (std::size_t i = 0; i + 1 < edges_.size(); ++i) {
    if (g.src(edges_[i]) != g.rng(edges_[i + 1]))
      throw ContractViolation("path is not composable at position " +
                              std::to_string(i));
  }
}

Path Path::concat(const DirectedGraph& g, const Path& other) const {
  require(composable_with(g, other), "concat: paths are not composable");
  if (edges_.empty()) return other;
  if (other.edges_.empty()) return *this;
  std::vector<int> es = edges_;
  es.insert(es.end(), other.edges_.begin(), other.edges_.end());
  return Path(g, std::move(es));
}

std::string Path::str(const DirectedGraph& g) const {
  if (edges_.empty()) return "(" + g.vertex_name(base_) + ")";
  std::string s;
  for (int e : edges_) {
    if (!s.empty()) s += ".";
    s += g.edge(e).name;
  }
  return s;
}

std::vector<Path> paths_of_length(const DirectedGraph& g, int length) {
  require(length >= 0, "path length must be nonnegative");
  std::vector<Path> out;
  if (length == 0) {
    for (int v = 0; v < g.n_vertices(); ++v) out.emplace_back(v);
    return out;
  }
  // Lexicographic by edge sequence: extend on the right, grouped by source.
  std::vector<int> stack;
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == length) {
      out.emplace_back(g, stack);
      return;
    }
    for (int e = 0; e < g.n_edges(); ++e) {
      if (depth > 0 && g.src(stack.back()) != g.rng(e)) continue;
      stack.push_back(e);
      self(self, depth + 1);
      stack.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace nchardy
