#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sdparse/features.hpp"
#include "sdparse/tree.hpp"

namespace sdparse {

enum class ParserFamily : std::uint8_t { kGraph = 0, kTransition = 1 };

enum class DecoderKind : std::uint8_t {
  kProjective = 0,
  kNonProjective = 1,
  kSibling = 2,
  kSiblingGrandparent = 3,
};

std::string to_string(ParserFamily family);
std::string to_string(DecoderKind decoder);

// Trained parser: a flat hashed weight array plus everything needed to
// reproduce extraction at parse time. Immutable once trained.
struct Model {
  ParserFamily family = ParserFamily::kGraph;
  DecoderKind decoder = DecoderKind::kProjective;
  TemplateConfig config;
  std::vector<std::string> labels;  // sorted, unique relation strings
  Eigen::VectorXf weights;          // size 2^hash_bits
  std::uint64_t corpus_fingerprint = 0;
  std::uint32_t epochs = 0;
  std::uint64_t seed = 0;

  double dot(const FeatureVector& fv) const;
  // Transition classifier scoring: the class id is folded into each bucket
  // so one flat array serves every class.
  double dot_class(const FeatureVector& fv, std::uint32_t class_id) const;

  void validate() const;  // throws ModelError on broken invariants
};

// Deterministic remap of a feature bucket for a given class, staying within
// the 2^hash_bits address space.
std::uint32_t remix_bucket(std::uint32_t bucket, std::uint32_t class_id,
                           int hash_bits);

// Scoring against an explicit weight array; training keeps 64-bit weights
// and only the stored model drops to 32-bit.
double dot(const Eigen::VectorXd& weights, const FeatureVector& fv);
double dot_class(const Eigen::VectorXd& weights, const FeatureVector& fv,
                 std::uint32_t class_id, int hash_bits);

// Binary container, little-endian throughout:
//   magic "DFRG" | u32 version | u8 family | u8 decoder
//   | i32 hash_bits | u8 clusters | u8 second_order | u8 stacking
//   | i32 distance_exact_max | i32 distance_mid_max
//   | u32 label count | per label: u32 length + bytes
//   | u64 weight count | f32 × count
//   | u64 corpus fingerprint | u32 epochs | u64 seed
void save_model(const Model& model, std::ostream& os);
Model load_model(std::istream& is);
void save_model_file(const Model& model, const std::string& path);
Model load_model_file(const std::string& path);

std::string model_to_bytes(const Model& model);
Model model_from_bytes(const std::string& bytes);

}  // namespace sdparse
