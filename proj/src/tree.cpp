#include "sdparse/tree.hpp"

#include <sstream>

namespace sdparse {

TreeVerdict validate_tree(const DependencyTree& tree, int n) {
  if (tree.size() != n) {
    return {false, "heads array length " + std::to_string(tree.size()) +
                       " does not match sentence length " + std::to_string(n)};
  }
  if (tree.labels.size() != tree.heads.size()) {
    return {false, "labels array length does not match heads"};
  }
  int roots = 0;
  for (int m = 1; m <= n; ++m) {
    const int h = tree.head_of(m);
    if (h < 0 || h > n) {
      return {false, "head of token " + std::to_string(m) +
                         " out of range: " + std::to_string(h)};
    }
    if (h == m) {
      return {false, "token " + std::to_string(m) + " is its own head"};
    }
    if (h == kRootIndex) ++roots;
  }
  if (roots == 0) return {false, "no root child"};
  if (roots > 1) {
    return {false, std::to_string(roots) + " root children (expected 1)"};
  }
  // Walk head chains; any token that does not reach ROOT sits on a cycle.
  // color: 0 unseen, 1 on current path, 2 done.
  std::vector<int> color(n + 1, 0);
  color[kRootIndex] = 2;
  for (int start = 1; start <= n; ++start) {
    if (color[start] != 0) continue;
    int v = start;
    std::vector<int> path;
    while (color[v] == 0) {
      color[v] = 1;
      path.push_back(v);
      v = tree.head_of(v);
    }
    if (color[v] == 1) {
      // v closes a cycle; report its node list.
      std::ostringstream os;
      os << "cycle:";
      bool in_cycle = false;
      for (int node : path) {
        if (node == v) in_cycle = true;
        if (in_cycle) os << ' ' << node;
      }
      return {false, os.str()};
    }
    for (int node : path) color[node] = 2;
  }
  return {};
}

bool is_projective(const DependencyTree& tree) {
  const int n = tree.size();
  if (auto verdict = validate_tree(tree, n); !verdict) {
    throw DataError("is_projective: invalid tree: " + verdict.error);
  }
  for (int m = 1; m <= n; ++m) {
    const int h = tree.head_of(m);
    const int lo = std::min(h, m);
    const int hi = std::max(h, m);
    for (int b = lo + 1; b < hi; ++b) {
      // b must be a descendant of h.
      int v = b;
      while (v != kRootIndex && v != h) v = tree.head_of(v);
      if (v != h) return false;
    }
  }
  return true;
}

DependencyGraph tree_to_graph(const DependencyTree& tree) {
  DependencyGraph graph;
  for (int m = 1; m <= tree.size(); ++m) {
    graph.arcs.insert({tree.label_of(m), tree.head_of(m), m});
  }
  return graph;
}

}  // namespace sdparse
