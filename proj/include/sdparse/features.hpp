#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sdparse/io.hpp"
#include "sdparse/tree.hpp"

namespace sdparse {

// Sparse hashed feature vector. Duplicate buckets are allowed; consumers
// accumulate.
struct FeatureVector {
  std::vector<std::pair<std::uint32_t, float>> entries;

  void add(std::uint32_t bucket, float value = 1.0f) {
    entries.emplace_back(bucket, value);
  }
  std::size_t size() const { return entries.size(); }
};

struct TemplateConfig {
  int hash_bits = 22;  // weight array holds 2^hash_bits buckets
  bool enable_clusters = false;
  bool enable_second_order = false;
  bool enable_stacking = false;
  // |h-m| up to distance_exact_max binned to itself, then one mid bin up to
  // distance_mid_max, then a single long-range bin.
  int distance_exact_max = 5;
  int distance_mid_max = 10;

  std::uint32_t mask() const { return (1u << hash_bits) - 1u; }
  std::size_t bucket_count() const { return std::size_t{1} << hash_bits; }
  void validate() const;  // throws ConfigError when hash_bits outside 16..28

  bool operator==(const TemplateConfig&) const = default;
};

std::string distance_bin(int distance, const TemplateConfig& config);

// FNV-1a over (template id byte, feature string bytes), masked to hash_bits.
// Stable across runs and platforms; model files depend on it.
std::uint32_t hash_feature(std::uint8_t template_id, std::string_view feature,
                           int hash_bits);

// First-stage parser predictions consumed as stacking features.
struct StackedAnnotation {
  DependencyTree tree;
};

// Stable template identifiers. Serialized models score with these baked in,
// so values must never be reused for something else.
namespace tmpl {
inline constexpr std::uint8_t kArcBase = 0;  // 18 ids: 0..17
inline constexpr int kArcCount = 18;
inline constexpr std::uint8_t kClusterPos4 = 20;
inline constexpr std::uint8_t kClusterPos6 = 40;
inline constexpr std::uint8_t kClusterBits = 60;
inline constexpr std::uint8_t kStackPredEdge = 80;
inline constexpr std::uint8_t kStackSibPrev = 81;   // +0..4
inline constexpr std::uint8_t kStackSibNext = 86;   // +0..4
inline constexpr std::uint8_t kStackGrand = 91;     // +0..4
inline constexpr std::uint8_t kStackPredHead = 96;  // +0..2
inline constexpr std::uint8_t kStackAllChildren = 99;
inline constexpr std::uint8_t kSibling = 110;      // +0..2
inline constexpr std::uint8_t kGrandparent = 120;  // +0..1
inline constexpr std::uint8_t kTransition = 140;
}  // namespace tmpl

// A NULL previous sibling (first modifier on its side) is encoded as s == h.
inline constexpr int kNullSibling = -1;  // sentinel accepted alongside s == h

// First-order arc templates for the candidate arc h -> m. Each base template
// is emitted bare and conjoined with (direction, binned distance); when
// `label` is non-empty both variants are additionally emitted conjoined with
// the label. Enabled cluster and stacking families are included.
void arc_features(const Sentence& sentence, int head, int mod,
                  std::string_view label, const TemplateConfig& config,
                  const ClusterLexicon* clusters,
                  const StackedAnnotation* stacked, FeatureVector& out);

// Cluster copies of the arc templates only (POS slots replaced by 4- and
// 6-bit cluster prefixes; form slots replaced by full bit strings).
void cluster_features(const Sentence& sentence, int head, int mod,
                      std::string_view label, const ClusterLexicon& clusters,
                      const TemplateConfig& config, FeatureVector& out);

// Table-driven features over the first-stage prediction only.
void stacking_features(const Sentence& sentence, const StackedAnnotation& first,
                       int head, int mod, std::string_view label,
                       const TemplateConfig& config, FeatureVector& out);

// Consecutive-sibling templates; `sib == head` (or kNullSibling) marks the
// first modifier on its side.
void sibling_features(const Sentence& sentence, int head, int mod, int sib,
                      const TemplateConfig& config, FeatureVector& out);

void grandparent_features(const Sentence& sentence, int grand, int head,
                          int mod, const TemplateConfig& config,
                          FeatureVector& out);

namespace detail {

// Separators inside feature strings. Part of the hashed byte contract, so
// serialized models depend on them.
inline constexpr char kJoin = '|';        // between attributes of one template
inline constexpr char kDirMark = '\x1f';  // before the (direction, distance) tag
inline constexpr char kLabelMark = '\x1e';  // before the label conjunction

// (template id, feature string) pairs prior to variant conjunction; the
// scorer shares these across labels.
std::vector<std::pair<std::uint8_t, std::string>> arc_template_strings(
    const Sentence& sentence, int head, int mod, const TemplateConfig& config,
    const ClusterLexicon* clusters, const StackedAnnotation* stacked);

// (direction, binned distance) conjunction tag for the arc h -> m.
std::string direction_distance(int head, int mod, const TemplateConfig& config);

// Emits the bare/conjoined variants for one base pair.
void emit_variants(std::uint8_t id, const std::string& base,
                   const std::string& dirdist, std::string_view label,
                   int hash_bits, FeatureVector& out);

// Feature-side token accessors (ROOT and boundary markers included).
std::string pos_at(const Sentence& sentence, int index);
std::string form_at(const Sentence& sentence, int index);
std::string lemma_at(const Sentence& sentence, int index);

}  // namespace detail

}  // namespace sdparse
