#include "sdparse/graph_parser.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "sdparse/rng.hpp"

namespace sdparse {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Finite sentinel for banned arcs inside the arborescence search; stays
// dominant through contraction reweighting without producing NaNs.
constexpr double kForbidden = -1e30;

int checked_size(const ArcScores& arc) {
  if (arc.n < 1) throw DataError("scores cover an empty sentence");
  return arc.n;
}

DependencyTree make_tree(const ArcScores& arc, const std::vector<int>& heads) {
  DependencyTree tree(heads);
  for (int m = 1; m <= arc.n; ++m) {
    tree.labels[m - 1] = arc.labels[arc.best_label(heads[m - 1], m)];
  }
  return tree;
}

// Total of label-maximized arc scores plus optional second-order terms, on a
// raw head vector (heads[i] = head of token i+1).
double score_heads(const ArcScores& arc, const SiblingScores* sib,
                   const GrandparentScores* gp, const std::vector<int>& heads) {
  const int n = arc.n;
  double total = 0.0;
  for (int m = 1; m <= n; ++m) total += arc.best(heads[m - 1], m);
  if (sib != nullptr) {
    std::vector<std::vector<int>> kids(n + 1);
    for (int m = 1; m <= n; ++m) kids[heads[m - 1]].push_back(m);
    for (int h = 0; h <= n; ++h) {
      int prev = h;  // NULL slot
      for (auto it = kids[h].rbegin(); it != kids[h].rend(); ++it) {
        if (*it > h) continue;
        total += sib->at(h, prev, *it);
        prev = *it;
      }
      prev = h;
      for (const int m : kids[h]) {
        if (m < h) continue;
        total += sib->at(h, prev, m);
        prev = m;
      }
    }
  }
  if (gp != nullptr) {
    for (int m = 1; m <= n; ++m) {
      const int h = heads[m - 1];
      if (h == 0) continue;
      total += gp->at(heads[h - 1], h, m);
    }
  }
  return total;
}

// Acyclicity + exactly-one-root check on a fully assigned head vector.
bool heads_form_tree(const std::vector<int>& heads) {
  const int n = static_cast<int>(heads.size());
  int roots = 0;
  for (int m = 1; m <= n; ++m) {
    if (heads[m - 1] == 0) ++roots;
  }
  if (roots != 1) return false;
  for (int m = 1; m <= n; ++m) {
    int x = heads[m - 1];
    int steps = 0;
    while (x != 0) {
      if (x == m || ++steps > n) return false;
      x = heads[x - 1];
    }
  }
  return true;
}

bool heads_projective(const std::vector<int>& heads) {
  const int n = static_cast<int>(heads.size());
  const auto reaches = [&](int node, int ancestor) {
    while (node != ancestor && node != 0) node = heads[node - 1];
    return node == ancestor;
  };
  for (int m = 1; m <= n; ++m) {
    const int h = heads[m - 1];
    const int lo = std::min(h, m), hi = std::max(h, m);
    for (int b = lo + 1; b < hi; ++b) {
      if (!reaches(b, h)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Maximum spanning arborescence (greedy + cycle contraction), recursive.
// `score` is square over the current node set with node 0 the root; banned
// and diagonal entries hold kForbidden.
std::vector<int> arborescence(const Eigen::MatrixXd& score) {
  const int k = static_cast<int>(score.rows());
  std::vector<int> best_in(k, -1);
  for (int v = 1; v < k; ++v) {
    double best = kNegInf;
    for (int u = 0; u < k; ++u) {
      if (u != v && score(u, v) > best) {
        best = score(u, v);
        best_in[v] = u;
      }
    }
  }

  std::vector<int> cycle;
  {
    std::vector<int> color(k, 0);
    color[0] = 2;
    for (int start = 1; start < k && cycle.empty(); ++start) {
      if (color[start] != 0) continue;
      std::vector<int> path;
      int x = start;
      while (x != 0 && color[x] == 0) {
        color[x] = 1;
        path.push_back(x);
        x = best_in[x];
      }
      if (x != 0 && color[x] == 1) {
        cycle.assign(std::find(path.begin(), path.end(), x), path.end());
      }
      for (const int v : path) color[v] = 2;
    }
  }
  if (cycle.empty()) return best_in;

  std::vector<char> in_cycle(k, 0);
  for (const int v : cycle) in_cycle[v] = 1;

  std::vector<int> old_of;  // new index -> old index (non-cycle nodes)
  std::vector<int> new_of(k, -1);
  for (int v = 0; v < k; ++v) {
    if (!in_cycle[v]) {
      new_of[v] = static_cast<int>(old_of.size());
      old_of.push_back(v);
    }
  }
  const int super = static_cast<int>(old_of.size());
  const int k2 = super + 1;

  Eigen::MatrixXd sub = Eigen::MatrixXd::Constant(k2, k2, kForbidden);
  std::vector<int> enter_via(k2, -1);  // per entering node: attachment point
  std::vector<int> leave_via(k2, -1);  // per exiting target: source in cycle
  for (int u = 0; u < k; ++u) {
    if (in_cycle[u]) continue;
    const int un = new_of[u];
    for (int v = 0; v < k; ++v) {
      if (u == v) continue;
      if (in_cycle[v]) {
        const double w = score(u, v) - score(best_in[v], v);
        if (w > sub(un, super)) {
          sub(un, super) = w;
          enter_via[un] = v;
        }
      } else {
        sub(un, new_of[v]) = score(u, v);
      }
    }
  }
  for (int x = 1; x < k; ++x) {
    if (in_cycle[x]) continue;
    const int xn = new_of[x];
    for (const int v : cycle) {
      if (score(v, x) > sub(super, xn)) {
        sub(super, xn) = score(v, x);
        leave_via[xn] = v;
      }
    }
  }

  const std::vector<int> sub_heads = arborescence(sub);
  std::vector<int> head(k, -1);
  for (const int v : cycle) head[v] = best_in[v];
  for (int vn = 1; vn < k2; ++vn) {
    const int hn = sub_heads[vn];
    if (vn == super) {
      head[enter_via[hn]] = old_of[hn];  // breaks the cycle at the entry point
    } else if (hn == super) {
      head[old_of[vn]] = leave_via[vn];
    } else {
      head[old_of[vn]] = old_of[hn];
    }
  }
  return head;
}

std::vector<int> single_root_arborescence(const ArcScores& arc) {
  const int n = arc.n;
  Eigen::MatrixXd s = Eigen::MatrixXd::Constant(n + 1, n + 1, kForbidden);
  for (int h = 0; h <= n; ++h) {
    for (int m = 1; m <= n; ++m) {
      if (h != m) s(h, m) = arc.best(h, m);
    }
  }
  std::vector<int> heads_full = arborescence(s);
  int roots = 0;
  for (int v = 1; v <= n; ++v) roots += heads_full[v] == 0 ? 1 : 0;
  if (roots == 1) {
    return {heads_full.begin() + 1, heads_full.end()};
  }
  // The unconstrained optimum uses several root arcs; re-solve once per
  // candidate root child with the others banned and keep the best total.
  std::vector<int> best_heads;
  double best_total = kNegInf;
  for (int r = 1; r <= n; ++r) {
    Eigen::MatrixXd sr = s;
    for (int m = 1; m <= n; ++m) {
      if (m != r) sr(0, m) = kForbidden;
    }
    const std::vector<int> full = arborescence(sr);
    double total = 0.0;
    for (int v = 1; v <= n; ++v) total += arc.best(full[v], v);
    if (total > best_total) {
      best_total = total;
      best_heads.assign(full.begin() + 1, full.end());
    }
  }
  return best_heads;
}

}  // namespace

// ---------------------------------------------------------------------------

ArcScores ArcScores::zeros(int n, int label_count) {
  if (n < 1) throw DataError("sentence must have at least one token");
  if (label_count < 1) throw DataError("need at least one relation label");
  ArcScores s;
  s.n = n;
  s.labels.reserve(label_count);
  for (int l = 0; l < label_count; ++l) s.labels.push_back("L" + std::to_string(l));
  s.by_label.assign(label_count, Eigen::MatrixXd::Zero(n + 1, n + 1));
  s.best = Eigen::MatrixXd::Zero(n + 1, n + 1);
  s.best_label = Eigen::MatrixXi::Zero(n + 1, n + 1);
  return s;
}

void ArcScores::reduce() {
  best = Eigen::MatrixXd::Constant(n + 1, n + 1, kForbidden);
  best_label = Eigen::MatrixXi::Zero(n + 1, n + 1);
  for (int h = 0; h <= n; ++h) {
    for (int m = 1; m <= n; ++m) {
      if (h == m) continue;
      double bs = by_label[0](h, m);
      int bl = 0;
      for (int l = 1; l < static_cast<int>(by_label.size()); ++l) {
        if (by_label[l](h, m) > bs) {
          bs = by_label[l](h, m);
          bl = l;
        }
      }
      best(h, m) = bs;
      best_label(h, m) = bl;
    }
  }
}

SiblingScores SiblingScores::zeros(int n) {
  SiblingScores s;
  s.n = n;
  s.by_head.assign(n + 1, Eigen::MatrixXd::Zero(n + 1, n + 1));
  return s;
}

double SiblingScores::at(int head, int sib, int mod) const {
  const int slot = (sib == kNullSibling) ? head : sib;
  return by_head[head](slot, mod);
}

void SiblingScores::set(int head, int sib, int mod, double value) {
  const int slot = (sib == kNullSibling) ? head : sib;
  by_head[head](slot, mod) = value;
}

GrandparentScores GrandparentScores::zeros(int n) {
  GrandparentScores s;
  s.n = n;
  s.by_grand.assign(n + 1, Eigen::MatrixXd::Zero(n + 1, n + 1));
  return s;
}

double GrandparentScores::at(int grand, int head, int mod) const {
  return by_grand[grand](head, mod);
}

void GrandparentScores::set(int grand, int head, int mod, double value) {
  by_grand[grand](head, mod) = value;
}

// ---------------------------------------------------------------------------
// Scoring

namespace {

template <typename WeightVec>
ArcScores score_arcs_impl(const Sentence& sentence, const WeightVec& weights,
                          const TemplateConfig& config,
                          const std::vector<std::string>& labels,
                          const ClusterLexicon* clusters,
                          const StackedAnnotation* stacked) {
  config.validate();
  if (config.enable_clusters && clusters == nullptr) {
    throw DataError("cluster features enabled but no cluster lexicon given");
  }
  if (config.enable_stacking && stacked == nullptr) {
    throw DataError("stacking features enabled but no first-stage tree given");
  }
  const int n = sentence.size();
  if (n < 1) throw DataError("cannot score an empty sentence");
  const int label_count = static_cast<int>(labels.size());
  ArcScores scores = ArcScores::zeros(n, label_count);
  scores.labels = labels;

  const std::uint32_t mask = config.mask();
  const auto weight = [&](std::uint64_t state) {
    return static_cast<double>(weights[static_cast<Eigen::Index>(state & mask)]);
  };
  const auto extend = [](std::uint64_t state, char mark, std::string_view s) {
    state = fnv1a64(&mark, 1, state);
    return fnv1a64(s.data(), s.size(), state);
  };

  for (int h = 0; h <= n; ++h) {
    for (int m = 1; m <= n; ++m) {
      if (h == m) continue;
      const auto bases =
          detail::arc_template_strings(sentence, h, m, config, clusters, stacked);
      const std::string dirdist = detail::direction_distance(h, m, config);
      // FNV state after (id byte, base bytes); label and direction variants
      // continue from it, which keeps per-label rescoring cheap.
      std::vector<std::uint64_t> states;
      states.reserve(bases.size());
      double unlabeled = 0.0;
      for (const auto& [id, base] : bases) {
        std::uint64_t st = fnv1a64(&id, 1);
        st = fnv1a64(base.data(), base.size(), st);
        states.push_back(st);
        unlabeled += weight(st);
        unlabeled += weight(extend(st, detail::kDirMark, dirdist));
      }
      for (int l = 0; l < label_count; ++l) {
        double total = unlabeled;
        for (const std::uint64_t st : states) {
          const std::uint64_t labeled = extend(st, detail::kLabelMark, labels[l]);
          total += weight(labeled);
          total += weight(extend(labeled, detail::kDirMark, dirdist));
        }
        scores.by_label[l](h, m) = total;
      }
    }
  }
  scores.reduce();
  return scores;
}

template <typename Dot>
SiblingScores score_siblings_impl(const Sentence& sentence,
                                  const TemplateConfig& config, Dot dot_fn) {
  const int n = sentence.size();
  SiblingScores scores = SiblingScores::zeros(n);
  FeatureVector fv;
  const auto fill = [&](int h, int s, int m) {
    fv.entries.clear();
    sibling_features(sentence, h, m, s, config, fv);
    scores.set(h, s, m, dot_fn(fv));
  };
  for (int h = 0; h <= n; ++h) {
    for (int m = 1; m <= n; ++m) {
      if (h == m) continue;
      fill(h, h, m);  // NULL sibling: m is the first modifier on its side
      const int lo = std::min(h, m), hi = std::max(h, m);
      for (int s = lo + 1; s < hi; ++s) fill(h, s, m);
    }
  }
  return scores;
}

template <typename Dot>
GrandparentScores score_grandparents_impl(const Sentence& sentence,
                                          const TemplateConfig& config,
                                          Dot dot_fn) {
  const int n = sentence.size();
  GrandparentScores scores = GrandparentScores::zeros(n);
  FeatureVector fv;
  for (int g = 0; g <= n; ++g) {
    for (int h = 1; h <= n; ++h) {
      if (g == h) continue;
      for (int m = 1; m <= n; ++m) {
        if (m == h || m == g) continue;
        fv.entries.clear();
        grandparent_features(sentence, g, h, m, config, fv);
        scores.set(g, h, m, dot_fn(fv));
      }
    }
  }
  return scores;
}

}  // namespace

ArcScores score_arcs(const Sentence& sentence, const Model& model,
                     const ClusterLexicon* clusters,
                     const StackedAnnotation* stacked) {
  model.validate();
  return score_arcs_impl(sentence, model.weights, model.config, model.labels,
                         clusters, stacked);
}

ArcScores score_arcs(const Sentence& sentence, const Eigen::VectorXd& weights,
                     const TemplateConfig& config,
                     const std::vector<std::string>& labels,
                     const ClusterLexicon* clusters,
                     const StackedAnnotation* stacked) {
  return score_arcs_impl(sentence, weights, config, labels, clusters, stacked);
}

SiblingScores score_siblings(const Sentence& sentence, const Model& model) {
  model.validate();
  return score_siblings_impl(sentence, model.config,
                             [&](const FeatureVector& fv) { return model.dot(fv); });
}

SiblingScores score_siblings(const Sentence& sentence,
                             const Eigen::VectorXd& weights,
                             const TemplateConfig& config) {
  return score_siblings_impl(sentence, config, [&](const FeatureVector& fv) {
    return dot(weights, fv);
  });
}

GrandparentScores score_grandparents(const Sentence& sentence,
                                     const Model& model) {
  model.validate();
  return score_grandparents_impl(
      sentence, model.config,
      [&](const FeatureVector& fv) { return model.dot(fv); });
}

GrandparentScores score_grandparents(const Sentence& sentence,
                                     const Eigen::VectorXd& weights,
                                     const TemplateConfig& config) {
  return score_grandparents_impl(sentence, config, [&](const FeatureVector& fv) {
    return dot(weights, fv);
  });
}

void tree_features(const Sentence& sentence, const DependencyTree& tree,
                   const TemplateConfig& config, const ClusterLexicon* clusters,
                   const StackedAnnotation* stacked, bool siblings,
                   bool grandparents, FeatureVector& out) {
  const int n = sentence.size();
  if (tree.size() != n) throw DataError("tree does not match the sentence");
  for (int m = 1; m <= n; ++m) {
    arc_features(sentence, tree.head_of(m), m, tree.label_of(m), config,
                 clusters, stacked, out);
  }
  if (siblings) {
    std::vector<std::vector<int>> kids(n + 1);
    for (int m = 1; m <= n; ++m) kids[tree.head_of(m)].push_back(m);
    for (int h = 0; h <= n; ++h) {
      int prev = h;
      for (auto it = kids[h].rbegin(); it != kids[h].rend(); ++it) {
        if (*it > h) continue;
        sibling_features(sentence, h, *it, prev, config, out);
        prev = *it;
      }
      prev = h;
      for (const int m : kids[h]) {
        if (m < h) continue;
        sibling_features(sentence, h, m, prev, config, out);
        prev = m;
      }
    }
  }
  if (grandparents) {
    for (int m = 1; m <= n; ++m) {
      const int h = tree.head_of(m);
      if (h == 0) continue;
      grandparent_features(sentence, tree.head_of(h), h, m, config, out);
    }
  }
}

// ---------------------------------------------------------------------------
// First-order projective decoding (span DP over complete/incomplete items).

DependencyTree decode_projective(const ArcScores& arc) {
  const int n = checked_size(arc);
  using Mat = Eigen::MatrixXd;
  using IMat = Eigen::MatrixXi;
  Mat cl = Mat::Zero(n + 1, n + 1), cr = Mat::Zero(n + 1, n + 1);
  Mat il = Mat::Constant(n + 1, n + 1, kNegInf);
  Mat ir = Mat::Constant(n + 1, n + 1, kNegInf);
  IMat bcl = IMat::Constant(n + 1, n + 1, -1),
       bcr = IMat::Constant(n + 1, n + 1, -1),
       bil = IMat::Constant(n + 1, n + 1, -1),
       bir = IMat::Constant(n + 1, n + 1, -1);

  for (int w = 1; w < n; ++w) {
    for (int i = 1; i + w <= n; ++i) {
      const int j = i + w;
      double best_mid = kNegInf;
      int arg = -1;
      for (int r = i; r < j; ++r) {
        const double v = cr(i, r) + cl(r + 1, j);
        if (v > best_mid) {
          best_mid = v;
          arg = r;
        }
      }
      ir(i, j) = best_mid + arc.best(i, j);
      bir(i, j) = arg;
      il(i, j) = best_mid + arc.best(j, i);
      bil(i, j) = arg;

      double best_cl = kNegInf;
      int arg_cl = -1;
      for (int r = i; r < j; ++r) {
        const double v = cl(i, r) + il(r, j);
        if (v > best_cl) {
          best_cl = v;
          arg_cl = r;
        }
      }
      cl(i, j) = best_cl;
      bcl(i, j) = arg_cl;

      double best_cr = kNegInf;
      int arg_cr = -1;
      for (int r = i + 1; r <= j; ++r) {
        const double v = ir(i, r) + cr(r, j);
        if (v > best_cr) {
          best_cr = v;
          arg_cr = r;
        }
      }
      cr(i, j) = best_cr;
      bcr(i, j) = arg_cr;
    }
  }

  int root = 1;
  double best_total = kNegInf;
  for (int r = 1; r <= n; ++r) {
    const double v = arc.best(0, r) + cl(1, r) + cr(r, n);
    if (v > best_total) {
      best_total = v;
      root = r;
    }
  }

  std::vector<int> heads(n, -1);
  struct Walk {
    const IMat &bcl, &bcr, &bil, &bir;
    std::vector<int>& heads;
    void complete_left(int i, int j) {  // head j, span i..j
      if (i == j) return;
      const int r = bcl(i, j);
      complete_left(i, r);
      incomplete_left(r, j);
    }
    void complete_right(int i, int j) {  // head i
      if (i == j) return;
      const int r = bcr(i, j);
      incomplete_right(i, r);
      complete_right(r, j);
    }
    void incomplete_right(int i, int j) {  // arc i -> j
      heads[j - 1] = i;
      const int r = bir(i, j);
      complete_right(i, r);
      complete_left(r + 1, j);
    }
    void incomplete_left(int i, int j) {  // arc j -> i
      heads[i - 1] = j;
      const int r = bil(i, j);
      complete_right(i, r);
      complete_left(r + 1, j);
    }
  } walk{bcl, bcr, bil, bir, heads};
  heads[root - 1] = 0;
  walk.complete_left(1, root);
  walk.complete_right(root, n);
  return make_tree(arc, heads);
}

DependencyTree decode_nonprojective(const ArcScores& arc) {
  checked_size(arc);
  return make_tree(arc, single_root_arborescence(arc));
}

// ---------------------------------------------------------------------------
// Second-order projective decoding with consecutive-sibling scores. Adds a
// sibling-span item S[i][j] (i, j adjacent modifiers of a shared head) to the
// first-order tables; incomplete items chain through it.

DependencyTree decode_projective_sibling(const ArcScores& arc,
                                         const SiblingScores& sib) {
  const int n = checked_size(arc);
  if (sib.n != n) throw DataError("sibling scores sized for a different sentence");
  using Mat = Eigen::MatrixXd;
  using IMat = Eigen::MatrixXi;
  constexpr int kFirstChild = -2;
  Mat cl = Mat::Zero(n + 1, n + 1), cr = Mat::Zero(n + 1, n + 1);
  Mat il = Mat::Constant(n + 1, n + 1, kNegInf);
  Mat ir = Mat::Constant(n + 1, n + 1, kNegInf);
  Mat ss = Mat::Constant(n + 1, n + 1, kNegInf);
  IMat bcl = IMat::Constant(n + 1, n + 1, -1),
       bcr = IMat::Constant(n + 1, n + 1, -1),
       bil = IMat::Constant(n + 1, n + 1, -1),
       bir = IMat::Constant(n + 1, n + 1, -1),
       bss = IMat::Constant(n + 1, n + 1, -1);

  for (int w = 1; w < n; ++w) {
    for (int i = 1; i + w <= n; ++i) {
      const int j = i + w;

      double best_ss = kNegInf;
      int arg_ss = -1;
      for (int r = i; r < j; ++r) {
        const double v = cr(i, r) + cl(r + 1, j);
        if (v > best_ss) {
          best_ss = v;
          arg_ss = r;
        }
      }
      ss(i, j) = best_ss;
      bss(i, j) = arg_ss;

      // arc i -> j: either j is i's first right modifier, or it extends the
      // sibling chain from some s strictly between.
      double best_ir = arc.best(i, j) + sib.at(i, i, j) + cl(i + 1, j);
      int arg_ir = kFirstChild;
      for (int s = i + 1; s < j; ++s) {
        const double v = ir(i, s) + ss(s, j) + arc.best(i, j) + sib.at(i, s, j);
        if (v > best_ir) {
          best_ir = v;
          arg_ir = s;
        }
      }
      ir(i, j) = best_ir;
      bir(i, j) = arg_ir;

      double best_il = arc.best(j, i) + sib.at(j, j, i) + cr(i, j - 1);
      int arg_il = kFirstChild;
      for (int s = i + 1; s < j; ++s) {
        const double v = ss(i, s) + il(s, j) + arc.best(j, i) + sib.at(j, s, i);
        if (v > best_il) {
          best_il = v;
          arg_il = s;
        }
      }
      il(i, j) = best_il;
      bil(i, j) = arg_il;

      double best_cl = kNegInf;
      int arg_cl = -1;
      for (int r = i; r < j; ++r) {
        const double v = cl(i, r) + il(r, j);
        if (v > best_cl) {
          best_cl = v;
          arg_cl = r;
        }
      }
      cl(i, j) = best_cl;
      bcl(i, j) = arg_cl;

      double best_cr = kNegInf;
      int arg_cr = -1;
      for (int r = i + 1; r <= j; ++r) {
        const double v = ir(i, r) + cr(r, j);
        if (v > best_cr) {
          best_cr = v;
          arg_cr = r;
        }
      }
      cr(i, j) = best_cr;
      bcr(i, j) = arg_cr;
    }
  }

  int root = 1;
  double best_total = kNegInf;
  for (int r = 1; r <= n; ++r) {
    const double v = arc.best(0, r) + sib.at(0, 0, r) + cl(1, r) + cr(r, n);
    if (v > best_total) {
      best_total = v;
      root = r;
    }
  }

  std::vector<int> heads(n, -1);
  struct Walk {
    const IMat &bcl, &bcr, &bil, &bir, &bss;
    std::vector<int>& heads;
    void complete_left(int i, int j) {
      if (i == j) return;
      const int r = bcl(i, j);
      complete_left(i, r);
      incomplete_left(r, j);
    }
    void complete_right(int i, int j) {
      if (i == j) return;
      const int r = bcr(i, j);
      incomplete_right(i, r);
      complete_right(r, j);
    }
    void sibling_span(int i, int j) {
      const int r = bss(i, j);
      complete_right(i, r);
      complete_left(r + 1, j);
    }
    void incomplete_right(int i, int j) {  // arc i -> j
      heads[j - 1] = i;
      const int s = bir(i, j);
      if (s == kFirstChild) {
        complete_left(i + 1, j);
      } else {
        incomplete_right(i, s);
        sibling_span(s, j);
      }
    }
    void incomplete_left(int i, int j) {  // arc j -> i
      heads[i - 1] = j;
      const int s = bil(i, j);
      if (s == kFirstChild) {
        complete_right(i, j - 1);
      } else {
        sibling_span(i, s);
        incomplete_left(s, j);
      }
    }
  } walk{bcl, bcr, bil, bir, bss, heads};
  heads[root - 1] = 0;
  walk.complete_left(1, root);
  walk.complete_right(root, n);
  return make_tree(arc, heads);
}

// ---------------------------------------------------------------------------

DependencyTree hill_climb_refine(const ArcScores& arc, const SiblingScores& sib,
                                 const GrandparentScores& gp,
                                 const DependencyTree& init,
                                 std::vector<double>* trace) {
  const int n = checked_size(arc);
  const TreeVerdict verdict = validate_tree(init, n);
  if (!verdict) throw DataError("hill climbing needs a valid tree: " + verdict.error);

  std::vector<int> heads = init.heads;
  double current = score_heads(arc, &sib, &gp, heads);
  if (trace != nullptr) trace->push_back(current);

  for (;;) {
    double best_total = current;
    int best_m = -1, best_h = -1;
    for (int m = 1; m <= n; ++m) {
      const int old = heads[m - 1];
      for (int h = 0; h <= n; ++h) {
        if (h == m || h == old) continue;
        heads[m - 1] = h;
        if (heads_form_tree(heads)) {
          const double total = score_heads(arc, &sib, &gp, heads);
          if (total > best_total) {
            best_total = total;
            best_m = m;
            best_h = h;
          }
        }
      }
      heads[m - 1] = old;
    }
    if (best_m < 0) break;
    heads[best_m - 1] = best_h;
    current = best_total;
    if (trace != nullptr) trace->push_back(current);
  }
  return make_tree(arc, heads);
}

DependencyTree brute_force_decode(const ArcScores& arc,
                                  const SiblingScores* sib,
                                  const GrandparentScores* gp,
                                  bool projective_only) {
  const int n = checked_size(arc);
  if (n > 8) throw DataError("exhaustive search capped at 8 tokens");

  std::vector<int> heads(n, -1);
  std::vector<int> best_heads;
  double best_total = kNegInf;
  int root_children = 0;

  // Assign heads left to right; a cycle closes exactly when its last arc is
  // assigned, so walking already-assigned heads suffices to prune.
  const auto creates_cycle = [&](int mod, int head) {
    int x = head;
    while (x != 0 && heads[x - 1] != -1) {
      if (x == mod) return true;
      x = heads[x - 1];
    }
    return x == mod;
  };

  const std::function<void(int)> assign = [&](int m) {
    if (m > n) {
      if (root_children != 1) return;
      if (projective_only && !heads_projective(heads)) return;
      const double total = score_heads(arc, sib, gp, heads);
      if (total > best_total) {
        best_total = total;
        best_heads = heads;
      }
      return;
    }
    for (int h = 0; h <= n; ++h) {
      if (h == m) continue;
      if (h == 0 && root_children == 1) continue;
      if (creates_cycle(m, h)) continue;
      heads[m - 1] = h;
      if (h == 0) ++root_children;
      assign(m + 1);
      if (h == 0) --root_children;
      heads[m - 1] = -1;
    }
  };
  assign(1);
  return make_tree(arc, best_heads);
}

double tree_score(const ArcScores& arc, const SiblingScores* sib,
                  const GrandparentScores* gp, const DependencyTree& tree) {
  if (tree.size() != arc.n) throw DataError("tree/score size mismatch");
  return score_heads(arc, sib, gp, tree.heads);
}

}  // namespace sdparse
