#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace sdparse {

// Error hierarchy shared by the whole toolkit. ConfigError corresponds to
// CLI exit code 2, the rest to exit code 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
struct ModelError : Error {
  using Error::Error;
};
struct DataError : Error {
  using Error::Error;
};

// The virtual root has index 0 and never appears in Sentence::tokens.
inline constexpr int kRootIndex = 0;
inline constexpr const char* kRootForm = "ROOT";
inline constexpr const char* kRootPos = "ROOT";

struct Token {
  int index = 0;      // 1-based position in the sentence
  std::string form;
  std::string lemma;  // empty when the corpus gives "_"
  std::string cpos;
  std::string fpos;
};

// Basic dependency tree over a sentence of n tokens: heads[i] is the head of
// token i+1, with 0 denoting the virtual root. labels runs parallel.
struct DependencyTree {
  std::vector<int> heads;
  std::vector<std::string> labels;

  DependencyTree() = default;
  DependencyTree(std::vector<int> h, std::vector<std::string> l)
      : heads(std::move(h)), labels(std::move(l)) {}
  explicit DependencyTree(std::vector<int> h)
      : heads(std::move(h)), labels(heads.size()) {}

  int size() const { return static_cast<int>(heads.size()); }
  int head_of(int token) const { return heads[token - 1]; }
  const std::string& label_of(int token) const { return labels[token - 1]; }
  void set(int token, int head, std::string label) {
    heads[token - 1] = head;
    labels[token - 1] = std::move(label);
  }

  bool operator==(const DependencyTree&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::optional<DependencyTree> gold_tree;

  int size() const { return static_cast<int>(tokens.size()); }
  const Token& token(int index) const { return tokens[index - 1]; }  // 1-based
};

using Corpus = std::vector<Sentence>;

// One typed dependency tuple <T, P, C>. Ordering is (child, parent, type) so
// a std::set of arcs iterates in file output order.
struct DependencyArc {
  std::string dep_type;
  int parent = 0;  // 0 = ROOT
  int child = 0;

  bool operator==(const DependencyArc&) const = default;
  bool operator<(const DependencyArc& o) const {
    return std::tie(child, parent, dep_type) <
           std::tie(o.child, o.parent, o.dep_type);
  }
};

// CCprocessed output may be reentrant, so this is a set of arcs, not a tree.
struct DependencyGraph {
  std::set<DependencyArc> arcs;

  bool contains(const DependencyArc& a) const { return arcs.count(a) > 0; }
  bool operator==(const DependencyGraph&) const = default;
};

struct TreeVerdict {
  bool ok = true;
  std::string error;  // first violation found; empty when ok

  explicit operator bool() const { return ok; }
};

// Structural check: heads size n, all heads in 0..n, exactly one root child,
// no cycles. Reports the first violation (cycles include the node list).
TreeVerdict validate_tree(const DependencyTree& tree, int n);

// True iff for every arc (h, m) each token strictly between h and m is a
// descendant of h. Throws DataError on invalid trees.
bool is_projective(const DependencyTree& tree);

// One arc <labels[i], heads[i], i> per token.
DependencyGraph tree_to_graph(const DependencyTree& tree);

}  // namespace sdparse
