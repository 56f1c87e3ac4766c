#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sdparse/io.hpp"
#include "sdparse/model.hpp"
#include "sdparse/transition_parser.hpp"

namespace sdparse {

struct EpochStats {
  int epoch = 0;       // 1-based
  double uas = 0.0;    // training attachment accuracy of this epoch's
  double las = 0.0;    // predictions (classifier accuracy for multiclass)
  std::uint64_t updates = 0;
  double seconds = 0.0;
};

struct TrainLog {
  std::vector<EpochStats> epochs;
  int skipped = 0;  // gold sentences unusable by the chosen decoder
};

// Averaged structured perceptron. Decodes each sentence with the current
// weights and updates on any mismatch with Φ(gold) − Φ(predicted); the final
// model holds the per-visit average. Non-projective gold sentences are
// skipped (and counted) for projective decoders, kept for kNonProjective.
// `stacked`, when given, runs parallel to the corpus.
std::pair<Model, TrainLog> train_structured(
    const Corpus& corpus, DecoderKind decoder, TemplateConfig config,
    int epochs, std::uint64_t seed, const ClusterLexicon* clusters = nullptr,
    const std::vector<StackedAnnotation>* stacked = nullptr,
    bool shuffle = false);

// Averaged multiclass perceptron over pre-extracted instances. Needs at
// least two distinct classes. EpochStats.uas/las both carry the epoch's
// training accuracy.
std::pair<Model, TrainLog> train_multiclass(
    const std::vector<TransitionInstance>& instances, TemplateConfig config,
    int epochs, std::uint64_t seed, bool shuffle = false);

// Oracle-derived instances from every projective gold sentence, then
// train_multiclass; the result parses via parse_greedy.
std::pair<Model, TrainLog> train_transition(const Corpus& corpus,
                                            TemplateConfig config, int epochs,
                                            std::uint64_t seed,
                                            bool shuffle = false);

// Sorted unique relation labels of the gold trees.
std::vector<std::string> collect_labels(const Corpus& corpus);

// Numeric form of io's hex corpus fingerprint, as stored in model metadata.
std::uint64_t corpus_fingerprint_u64(const Corpus& corpus);

}  // namespace sdparse
