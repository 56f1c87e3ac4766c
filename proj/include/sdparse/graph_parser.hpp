#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "sdparse/io.hpp"
#include "sdparse/model.hpp"
#include "sdparse/tree.hpp"

namespace sdparse {

// Arc scores for one sentence: per-label (n+1)x(n+1) matrices s[l](h, m),
// h in 0..n, m in 1..n, h != m, plus the label-maximized reduction `best`
// with the winning label index in `best_label`. Cells outside the valid
// region are never read by the decoders.
struct ArcScores {
  int n = 0;
  std::vector<std::string> labels;
  std::vector<Eigen::MatrixXd> by_label;
  Eigen::MatrixXd best;
  Eigen::MatrixXi best_label;

  static ArcScores zeros(int n, int label_count);
  // Recompute best/best_label from by_label (lowest label index wins ties).
  void reduce();
};

// Consecutive-sibling scores s2[h](s, m): s and m are adjacent modifiers of
// h on the same side, s the inner one. The slot s == h encodes the NULL
// sibling (m is h's first modifier on its side).
struct SiblingScores {
  int n = 0;
  std::vector<Eigen::MatrixXd> by_head;

  static SiblingScores zeros(int n);
  double at(int head, int sib, int mod) const;
  void set(int head, int sib, int mod, double value);
};

// Grandparent scores s3[g](h, m) for arc chains g -> h -> m.
struct GrandparentScores {
  int n = 0;
  std::vector<Eigen::MatrixXd> by_grand;

  static GrandparentScores zeros(int n);
  double at(int grand, int head, int mod) const;
  void set(int grand, int head, int mod, double value);
};

ArcScores score_arcs(const Sentence& sentence, const Model& model,
                     const ClusterLexicon* clusters = nullptr,
                     const StackedAnnotation* stacked = nullptr);
SiblingScores score_siblings(const Sentence& sentence, const Model& model);
GrandparentScores score_grandparents(const Sentence& sentence,
                                     const Model& model);

// Same scorers over a raw 64-bit weight array (the trainer's working copy).
ArcScores score_arcs(const Sentence& sentence, const Eigen::VectorXd& weights,
                     const TemplateConfig& config,
                     const std::vector<std::string>& labels,
                     const ClusterLexicon* clusters = nullptr,
                     const StackedAnnotation* stacked = nullptr);
SiblingScores score_siblings(const Sentence& sentence,
                             const Eigen::VectorXd& weights,
                             const TemplateConfig& config);
GrandparentScores score_grandparents(const Sentence& sentence,
                                     const Eigen::VectorXd& weights,
                                     const TemplateConfig& config);

// Summed feature vector of a whole tree: labeled arcs plus, when requested,
// consecutive-sibling chains and grandparent arcs. This is the perceptron's
// Φ for one sentence.
void tree_features(const Sentence& sentence, const DependencyTree& tree,
                   const TemplateConfig& config, const ClusterLexicon* clusters,
                   const StackedAnnotation* stacked, bool siblings,
                   bool grandparents, FeatureVector& out);

// Exact decoders. All outputs pass validate_tree and have exactly one ROOT
// child; ties break toward the lower head index.
DependencyTree decode_projective(const ArcScores& arc);
DependencyTree decode_nonprojective(const ArcScores& arc);
DependencyTree decode_projective_sibling(const ArcScores& arc,
                                         const SiblingScores& sib);

// Greedy refinement: repeatedly apply the best single-head change that
// strictly increases the combined arc + sibling + grandparent score while
// keeping the tree valid and single-rooted. If `trace` is given it receives
// the total after the initial tree and after each accepted move.
DependencyTree hill_climb_refine(const ArcScores& arc,
                                 const SiblingScores& sib,
                                 const GrandparentScores& gp,
                                 const DependencyTree& init,
                                 std::vector<double>* trace = nullptr);

// Test oracle: exhaustive search over single-root trees (projective-only
// when flagged). Rejects n > 8. sib/gp may be null.
DependencyTree brute_force_decode(const ArcScores& arc,
                                  const SiblingScores* sib,
                                  const GrandparentScores* gp,
                                  bool projective_only);

// Total score of a tree under the label-maximized arc scores plus optional
// sibling chains and grandparent arcs.
double tree_score(const ArcScores& arc, const SiblingScores* sib,
                  const GrandparentScores* gp, const DependencyTree& tree);

}  // namespace sdparse
