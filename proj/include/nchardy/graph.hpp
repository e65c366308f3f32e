#ifndef NCHARDY_GRAPH_HPP
#define NCHARDY_GRAPH_HPP

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "nchardy/types.hpp"

namespace nchardy {

// A finite directed graph G = (G0, G1, r, s). Vertices and edges are kept in
// the order given at construction; all indices below refer to that order.
class DirectedGraph {
 public:
  struct Edge {
    std::string name;
    int src = -1;  // s(e)
    int rng = -1;  // r(e)
  };

  DirectedGraph(std::vector<std::string> vertices, std::vector<Edge> edges);

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  const std::string& vertex_name(int v) const { return vertices_.at(v); }
  const Edge& edge(int e) const { return edges_.at(e); }
  int src(int e) const { return edges_.at(e).src; }
  int rng(int e) const { return edges_.at(e).rng; }

  // -1 when absent.
  int find_vertex(const std::string& name) const;
  int find_edge(const std::string& name) const;

  const std::vector<int>& edges_with_rng(int v) const { return by_rng_.at(v); }
  const std::vector<int>& edges_with_src(int v) const { return by_src_.at(v); }

  // Cycle graph on n vertices, edges v -> v+1 (mod n).
  static std::shared_ptr<const DirectedGraph> cycle(int n);
  // Single vertex with d loops; models the free case M = C, E = C^d.
  static std::shared_ptr<const DirectedGraph> free_loops(int d);

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, int> vertex_index_;
  std::unordered_map<std::string, int> edge_index_;
  std::vector<std::vector<int>> by_rng_;
  std::vector<std::vector<int>> by_src_;
};

using GraphPtr = std::shared_ptr<const DirectedGraph>;

// A finite path, stored left-to-right: edges (e1, ..., ek) with the
// composability convention s(e_i) = r(e_{i+1}). Length-0 paths are vertices.
// s(path) = s(ek), r(path) = r(e1); creation operators prepend edges.
class Path {
 public:
  // Length-0 path at a vertex.
  explicit Path(int vertex) : base_(vertex) {}
  // Nonempty path; throws on a non-composable sequence.
  Path(const DirectedGraph& g, std::vector<int> edges);

  int length() const { return static_cast<int>(edges_.size()); }
  const std::vector<int>& edges() const { return edges_; }
  int src(const DirectedGraph& g) const {
    return edges_.empty() ? base_ : g.src(edges_.back());
  }
  int rng(const DirectedGraph& g) const {
    return edges_.empty() ? base_ : g.rng(edges_.front());
  }

  // Concatenation "this . other": the edges of *this followed by those of
  // other. Composable iff s(*this) == r(other).
  bool composable_with(const DirectedGraph& g, const Path& other) const {
    return src(g) == other.rng(g);
  }
  Path concat(const DirectedGraph& g, const Path& other) const;

  std::string str(const DirectedGraph& g) const;

  friend bool operator==(const Path& a, const Path& b) {
    return a.base_ == b.base_ && a.edges_ == b.edges_;
  }
  // Order: by length, then lexicographic on the edge sequence; length-0 paths
  // by vertex. This is the canonical basis order everywhere.
  friend bool operator<(const Path& a, const Path& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    if (a.edges_.empty()) return a.base_ < b.base_;
    return a.edges_ < b.edges_;
  }

 private:
  int base_ = -1;  // source vertex of a length-0 path; -1 when edges present
  std::vector<int> edges_;
};

// All composable paths of the given length, in canonical order.
std::vector<Path> paths_of_length(const DirectedGraph& g, int length);

}  // namespace nchardy

#endif
