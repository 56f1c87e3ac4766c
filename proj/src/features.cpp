#include "sdparse/features.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace sdparse {

void TemplateConfig::validate() const {
  if (hash_bits < 16 || hash_bits > 28) {
    throw ConfigError("hash_bits must be in 16..28, got " +
                      std::to_string(hash_bits));
  }
  if (distance_exact_max < 1 || distance_mid_max < distance_exact_max) {
    throw ConfigError("invalid distance bin specification");
  }
}

std::string distance_bin(int distance, const TemplateConfig& config) {
  if (distance <= config.distance_exact_max) return std::to_string(distance);
  if (distance <= config.distance_mid_max) {
    return std::to_string(config.distance_exact_max + 1);
  }
  return std::to_string(config.distance_mid_max + 1);
}

std::uint32_t hash_feature(std::uint8_t template_id, std::string_view feature,
                           int hash_bits) {
  std::uint64_t h = 1469598103934665603ULL;
  h ^= template_id;
  h *= 1099511628211ULL;
  for (const char c : feature) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return static_cast<std::uint32_t>(h & ((std::uint64_t{1} << hash_bits) - 1));
}

namespace detail {

namespace {

constexpr const char* kBos = "<s>";
constexpr const char* kEos = "</s>";
constexpr char kSep = kJoin;
constexpr char kDirSep = kDirMark;
constexpr char kLabelSep = kLabelMark;

std::string lowercased(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

void check_arc(const Sentence& sentence, int head, int mod) {
  const int n = sentence.size();
  if (head < 0 || head > n || mod < 1 || mod > n || head == mod) {
    throw DataError("bad candidate arc (" + std::to_string(head) + ", " +
                    std::to_string(mod) + ") for sentence of " +
                    std::to_string(n) + " tokens");
  }
}

// Attribute accessor pair used to instantiate one copy of the arc templates.
struct Accessors {
  std::function<std::string(int)> pos;
  std::function<std::string(int)> form;
};

void build_arc_copy(int h, int m,
                    std::uint8_t id_offset, const Accessors& at,
                    std::vector<std::pair<std::uint8_t, std::string>>& out) {
  const auto id = [id_offset](int rel) {
    return static_cast<std::uint8_t>(id_offset + rel);
  };
  const std::string hf = at.form(h), hp = at.pos(h);
  const std::string mf = at.form(m), mp = at.pos(m);
  out.emplace_back(id(0), hf);
  out.emplace_back(id(1), hp);
  out.emplace_back(id(2), hf + kSep + hp);
  out.emplace_back(id(3), mf);
  out.emplace_back(id(4), mp);
  out.emplace_back(id(5), mf + kSep + mp);
  out.emplace_back(id(6), hp + kSep + mp);
  out.emplace_back(id(7), hf + kSep + mf);
  out.emplace_back(id(8), hf + kSep + mp);
  out.emplace_back(id(9), hp + kSep + mf);
  out.emplace_back(id(10), hf + kSep + hp + kSep + mp);
  out.emplace_back(id(11), hp + kSep + mf + kSep + mp);
  out.emplace_back(id(12), hf + kSep + hp + kSep + mf + kSep + mp);
  const std::string hp_prev = at.pos(h - 1), hp_next = at.pos(h + 1);
  const std::string mp_prev = at.pos(m - 1), mp_next = at.pos(m + 1);
  out.emplace_back(id(13), hp + kSep + hp_next + kSep + mp_prev + kSep + mp);
  out.emplace_back(id(14), hp_prev + kSep + hp + kSep + mp_prev + kSep + mp);
  out.emplace_back(id(15), hp + kSep + hp_next + kSep + mp + kSep + mp_next);
  out.emplace_back(id(16), hp_prev + kSep + hp + kSep + mp + kSep + mp_next);
  const int lo = std::min(h, m), hi = std::max(h, m);
  for (int b = lo + 1; b < hi; ++b) {
    out.emplace_back(id(17), hp + kSep + at.pos(b) + kSep + mp);
  }
}

Accessors plain_accessors(const Sentence& sentence) {
  return {[&sentence](int i) { return pos_at(sentence, i); },
          [&sentence](int i) { return form_at(sentence, i); }};
}

// POS slots swapped for cluster-bit prefixes; forms untouched.
Accessors cluster_pos_accessors(const Sentence& sentence,
                                const ClusterLexicon& lex, std::size_t bits) {
  return {[&sentence, &lex, bits](int i) {
            if (i < 1 || i > sentence.size()) return pos_at(sentence, i);
            return lex.prefix(sentence.token(i).form, bits);
          },
          [&sentence](int i) { return form_at(sentence, i); }};
}

// Form slots swapped for full cluster bit strings; POS untouched.
Accessors cluster_form_accessors(const Sentence& sentence,
                                 const ClusterLexicon& lex) {
  return {[&sentence](int i) { return pos_at(sentence, i); },
          [&sentence, &lex](int i) {
            if (i < 1 || i > sentence.size()) return form_at(sentence, i);
            return lex.lookup(sentence.token(i).form);
          }};
}

// Children of `head` in the first-stage tree, in position order.
std::vector<int> children_of(const DependencyTree& tree, int head) {
  std::vector<int> kids;
  for (int t = 1; t <= tree.size(); ++t) {
    if (tree.head_of(t) == head) kids.push_back(t);
  }
  return kids;
}

void build_stacking_templates(
    const Sentence& sentence, const StackedAnnotation& first, int h, int m,
    const TemplateConfig& config,
    std::vector<std::pair<std::uint8_t, std::string>>& out) {
  const DependencyTree& tree = first.tree;
  if (tree.size() != sentence.size()) {
    throw DataError("stacked annotation has " + std::to_string(tree.size()) +
                    " tokens, sentence has " + std::to_string(sentence.size()));
  }
  const int first_head = tree.head_of(m);

  if (first_head == h) {
    out.emplace_back(tmpl::kStackPredEdge, "1");
    out.emplace_back(tmpl::kStackPredEdge,
                     std::string("1") + kSep + tree.label_of(m));
  } else {
    out.emplace_back(tmpl::kStackPredEdge, "0");
  }

  // Previous and next predicted siblings of m (co-children of its predicted
  // head), described by how they attach in the first-stage tree.
  const auto sibling_attrs = [&](std::uint8_t base_id, int sib) {
    if (sib == 0) {
      for (int a = 0; a < 5; ++a) {
        out.emplace_back(static_cast<std::uint8_t>(base_id + a), "_NONE_");
      }
      return;
    }
    const int sib_head = tree.head_of(sib);
    out.emplace_back(base_id, lemma_at(sentence, sib));
    out.emplace_back(static_cast<std::uint8_t>(base_id + 1),
                     pos_at(sentence, sib));
    out.emplace_back(static_cast<std::uint8_t>(base_id + 2),
                     tree.label_of(sib));
    out.emplace_back(static_cast<std::uint8_t>(base_id + 3),
                     distance_bin(std::abs(sib - sib_head), config));
    out.emplace_back(static_cast<std::uint8_t>(base_id + 4),
                     sib < sib_head ? "L" : "R");
  };
  int prev = 0, next = 0;
  for (const int kid : children_of(tree, first_head)) {
    if (kid < m) prev = kid;
    if (kid > m && next == 0) next = kid;
  }
  sibling_attrs(tmpl::kStackSibPrev, prev == m ? 0 : prev);
  sibling_attrs(tmpl::kStackSibNext, next);

  // Grandparent chain: the head of m's predicted head, same attribute set.
  if (first_head == 0) {
    for (int a = 0; a < 5; ++a) {
      out.emplace_back(static_cast<std::uint8_t>(tmpl::kStackGrand + a),
                       "_NONE_");
    }
  } else {
    const int grand = tree.head_of(first_head);
    out.emplace_back(tmpl::kStackGrand, lemma_at(sentence, grand));
    out.emplace_back(static_cast<std::uint8_t>(tmpl::kStackGrand + 1),
                     pos_at(sentence, grand));
    out.emplace_back(static_cast<std::uint8_t>(tmpl::kStackGrand + 2),
                     tree.label_of(first_head));
    out.emplace_back(static_cast<std::uint8_t>(tmpl::kStackGrand + 3),
                     distance_bin(std::abs(grand - first_head), config));
    out.emplace_back(static_cast<std::uint8_t>(tmpl::kStackGrand + 4),
                     first_head < grand ? "L" : "R");
  }

  if (first_head != h) {
    out.emplace_back(tmpl::kStackPredHead, pos_at(sentence, first_head));
    out.emplace_back(static_cast<std::uint8_t>(tmpl::kStackPredHead + 1),
                     lemma_at(sentence, first_head));
    out.emplace_back(static_cast<std::uint8_t>(tmpl::kStackPredHead + 2),
                     tree.label_of(m));
  }

  std::string seq;
  for (const int kid : children_of(tree, h)) {
    seq += '(' + pos_at(sentence, kid) + ':' + tree.label_of(kid) + ')';
  }
  out.emplace_back(tmpl::kStackAllChildren, seq.empty() ? "_EMPTY_" : seq);
}

}  // namespace

std::string pos_at(const Sentence& sentence, int index) {
  if (index == kRootIndex) return kRootPos;
  if (index < 0) return kBos;
  if (index > sentence.size()) return kEos;
  return sentence.token(index).fpos;
}

std::string form_at(const Sentence& sentence, int index) {
  if (index == kRootIndex) return kRootForm;
  if (index < 0) return kBos;
  if (index > sentence.size()) return kEos;
  return sentence.token(index).form;
}

std::string lemma_at(const Sentence& sentence, int index) {
  if (index == kRootIndex) return kRootForm;
  if (index < 0) return kBos;
  if (index > sentence.size()) return kEos;
  const Token& t = sentence.token(index);
  // PTB-converted data often lacks lemmas; fall back to the lowercased form.
  return t.lemma.empty() ? lowercased(t.form) : t.lemma;
}

std::string direction_distance(int head, int mod,
                               const TemplateConfig& config) {
  std::string tag(head < mod ? "R" : "L");
  tag += distance_bin(std::abs(head - mod), config);
  return tag;
}

void emit_variants(std::uint8_t id, const std::string& base,
                   const std::string& dirdist, std::string_view label,
                   int hash_bits, FeatureVector& out) {
  out.add(hash_feature(id, base, hash_bits));
  out.add(hash_feature(id, base + kDirSep + dirdist, hash_bits));
  if (!label.empty()) {
    const std::string labeled = base + kLabelSep + std::string(label);
    out.add(hash_feature(id, labeled, hash_bits));
    out.add(hash_feature(id, labeled + kDirSep + dirdist, hash_bits));
  }
}

std::vector<std::pair<std::uint8_t, std::string>> arc_template_strings(
    const Sentence& sentence, int head, int mod, const TemplateConfig& config,
    const ClusterLexicon* clusters, const StackedAnnotation* stacked) {
  check_arc(sentence, head, mod);
  std::vector<std::pair<std::uint8_t, std::string>> out;
  build_arc_copy(head, mod, tmpl::kArcBase, plain_accessors(sentence), out);
  if (config.enable_clusters && clusters != nullptr) {
    build_arc_copy(head, mod, tmpl::kClusterPos4,
                   cluster_pos_accessors(sentence, *clusters, 4), out);
    build_arc_copy(head, mod, tmpl::kClusterPos6,
                   cluster_pos_accessors(sentence, *clusters, 6), out);
    build_arc_copy(head, mod, tmpl::kClusterBits,
                   cluster_form_accessors(sentence, *clusters), out);
  }
  if (config.enable_stacking && stacked != nullptr) {
    build_stacking_templates(sentence, *stacked, head, mod, config, out);
  }
  return out;
}

}  // namespace detail

void arc_features(const Sentence& sentence, int head, int mod,
                  std::string_view label, const TemplateConfig& config,
                  const ClusterLexicon* clusters,
                  const StackedAnnotation* stacked, FeatureVector& out) {
  const auto bases = detail::arc_template_strings(sentence, head, mod, config,
                                                  clusters, stacked);
  const std::string dirdist = detail::direction_distance(head, mod, config);
  for (const auto& [id, base] : bases) {
    detail::emit_variants(id, base, dirdist, label, config.hash_bits, out);
  }
}

void cluster_features(const Sentence& sentence, int head, int mod,
                      std::string_view label, const ClusterLexicon& clusters,
                      const TemplateConfig& config, FeatureVector& out) {
  TemplateConfig only = config;
  only.enable_clusters = true;
  only.enable_stacking = false;
  auto bases = detail::arc_template_strings(sentence, head, mod, only,
                                            &clusters, nullptr);
  const std::string dirdist = detail::direction_distance(head, mod, config);
  for (const auto& [id, base] : bases) {
    if (id < tmpl::kClusterPos4) continue;  // cluster copies only
    detail::emit_variants(id, base, dirdist, label, config.hash_bits, out);
  }
}

void stacking_features(const Sentence& sentence, const StackedAnnotation& first,
                       int head, int mod, std::string_view label,
                       const TemplateConfig& config, FeatureVector& out) {
  detail::check_arc(sentence, head, mod);
  std::vector<std::pair<std::uint8_t, std::string>> bases;
  detail::build_stacking_templates(sentence, first, head, mod, config, bases);
  const std::string dirdist = detail::direction_distance(head, mod, config);
  for (const auto& [id, base] : bases) {
    detail::emit_variants(id, base, dirdist, label, config.hash_bits, out);
  }
}

void sibling_features(const Sentence& sentence, int head, int mod, int sib,
                      const TemplateConfig& config, FeatureVector& out) {
  detail::check_arc(sentence, head, mod);
  const bool null_sib = sib == head || sib == kNullSibling;
  if (!null_sib) {
    const bool between = head < mod ? (sib > head && sib < mod)
                                    : (sib > mod && sib < head);
    if (!between) {
      throw DataError("sibling " + std::to_string(sib) +
                      " not between head " + std::to_string(head) +
                      " and modifier " + std::to_string(mod));
    }
  }
  const std::string sp = null_sib ? "_NIL_" : detail::pos_at(sentence, sib);
  const std::string sf = null_sib ? "_NIL_" : detail::form_at(sentence, sib);
  const std::string hp = detail::pos_at(sentence, head);
  const std::string mp = detail::pos_at(sentence, mod);
  const std::string mf = detail::form_at(sentence, mod);
  const char dir = head < mod ? 'R' : 'L';
  const std::string bases[3] = {hp + '|' + sp + '|' + mp, sf + '|' + mf,
                                sp + '|' + mp};
  for (int i = 0; i < 3; ++i) {
    const auto id = static_cast<std::uint8_t>(tmpl::kSibling + i);
    out.add(hash_feature(id, bases[i], config.hash_bits));
    out.add(hash_feature(id, bases[i] + '\x1f' + dir, config.hash_bits));
  }
}

void grandparent_features(const Sentence& sentence, int grand, int head,
                          int mod, const TemplateConfig& config,
                          FeatureVector& out) {
  detail::check_arc(sentence, head, mod);
  const int n = sentence.size();
  if (grand < 0 || grand > n || grand == head) {
    throw DataError("bad grandparent index " + std::to_string(grand));
  }
  if (grand == mod) {
    throw DataError("grandparent equals modifier: cycle candidate excluded");
  }
  std::string pattern;
  pattern += grand < head ? 'R' : 'L';
  pattern += head < mod ? 'R' : 'L';
  const std::string gp = detail::pos_at(sentence, grand);
  const std::string gf = detail::form_at(sentence, grand);
  const std::string t0 = gp + '|' + detail::pos_at(sentence, head) + '|' +
                         detail::pos_at(sentence, mod) + '\x1f' + pattern;
  const std::string t1 =
      gf + '|' + detail::form_at(sentence, mod) + '\x1f' + pattern;
  out.add(hash_feature(tmpl::kGrandparent, t0, config.hash_bits));
  out.add(hash_feature(tmpl::kGrandparent + 1, t1, config.hash_bits));
}

}  // namespace sdparse
