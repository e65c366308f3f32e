#ifndef NCHARDY_TEST_UTIL_HPP
#define NCHARDY_TEST_UTIL_HPP

#include <memory>

#include "nchardy/graph.hpp"
#include "nchardy/random.hpp"

namespace nchardy::testutil {

// The two-cycle from the worked examples: vertices {1,2}, f: 1 -> 2, g: 2 -> 1.
inline GraphPtr c2() {
  return std::make_shared<DirectedGraph>(
      std::vector<std::string>{"1", "2"},
      std::vector<DirectedGraph::Edge>{{"f", 0, 1}, {"g", 1, 0}});
}

inline GraphPtr free_d(int d) { return DirectedGraph::free_loops(d); }

inline Path path_of(const GraphPtr& g, std::initializer_list<const char*> names) {
  std::vector<int> es;
  for (const char* n : names) es.push_back(g->find_edge(n));
  return Path(*g, es);
}

}  // namespace nchardy::testutil

#endif
