#include "sdparse/learn.hpp"

#include <algorithm>
#include <chrono>
#include <iterator>
#include <numeric>
#include <set>
#include <string>

#include "sdparse/graph_parser.hpp"
#include "sdparse/rng.hpp"

namespace sdparse {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

void check_gold(const Corpus& corpus) {
  if (corpus.empty()) throw DataError("training corpus is empty");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus[i].gold_tree) {
      throw DataError("sentence " + std::to_string(i + 1) +
                      " has no gold tree");
    }
    const TreeVerdict v = validate_tree(*corpus[i].gold_tree,
                                        corpus[i].size());
    if (!v) {
      throw DataError("sentence " + std::to_string(i + 1) +
                      " has a broken gold tree: " + v.error);
    }
  }
}

// Sparse perceptron update with the lazy averaging accumulator:
// avg = w_final − u / T with u summing (visit − 1) · delta.
void apply_delta(Eigen::VectorXd& w, Eigen::VectorXd& u, std::uint64_t visit,
                 const FeatureVector& fv, double sign) {
  const double scale = static_cast<double>(visit - 1);
  for (const auto& [bucket, value] : fv.entries) {
    const auto b = static_cast<Eigen::Index>(bucket);
    w[b] += sign * value;
    u[b] += sign * value * scale;
  }
}

Eigen::VectorXf averaged(const Eigen::VectorXd& w, const Eigen::VectorXd& u,
                         std::uint64_t total_visits) {
  const double t = static_cast<double>(total_visits);
  return (w - u / t).cast<float>();
}

}  // namespace

std::vector<std::string> collect_labels(const Corpus& corpus) {
  std::set<std::string> seen;
  for (const Sentence& s : corpus) {
    if (!s.gold_tree) continue;
    for (const std::string& l : s.gold_tree->labels) seen.insert(l);
  }
  return {seen.begin(), seen.end()};
}

std::uint64_t corpus_fingerprint_u64(const Corpus& corpus) {
  return std::stoull(corpus_fingerprint(corpus), nullptr, 16);
}

std::pair<Model, TrainLog> train_structured(
    const Corpus& corpus, DecoderKind decoder, TemplateConfig config,
    int epochs, std::uint64_t seed, const ClusterLexicon* clusters,
    const std::vector<StackedAnnotation>* stacked, bool shuffle) {
  config.validate();
  if (epochs < 1) throw ConfigError("epochs must be positive");
  check_gold(corpus);
  if (stacked != nullptr && stacked->size() != corpus.size()) {
    throw DataError("stacked annotations do not match the corpus");
  }
  if (config.enable_clusters && clusters == nullptr) {
    throw DataError("cluster features enabled but no cluster lexicon given");
  }

  const bool use_siblings = decoder == DecoderKind::kSibling ||
                            decoder == DecoderKind::kSiblingGrandparent;
  const bool use_grandparents = decoder == DecoderKind::kSiblingGrandparent;
  const bool needs_projective = decoder != DecoderKind::kNonProjective;
  config.enable_second_order = use_siblings;
  config.enable_stacking = stacked != nullptr;

  TrainLog log;
  std::vector<std::size_t> retained;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (needs_projective && !is_projective(*corpus[i].gold_tree)) {
      ++log.skipped;
    } else {
      retained.push_back(i);
    }
  }
  if (retained.empty()) {
    throw DataError("no usable training sentences for this decoder");
  }

  const std::vector<std::string> labels = collect_labels(corpus);
  const auto dim = static_cast<Eigen::Index>(config.bucket_count());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
  const std::uint64_t total_visits =
      static_cast<std::uint64_t>(epochs) * retained.size();
  std::uint64_t visit = 0;
  Rng rng(seed);
  FeatureVector gold_fv, pred_fv;

  for (int epoch = 1; epoch <= epochs; ++epoch) {
    std::vector<std::size_t> order = retained;
    if (shuffle) rng.shuffle(order);
    EpochStats stats;
    stats.epoch = epoch;
    std::uint64_t ok_heads = 0, ok_arcs = 0, tokens = 0;
    const auto started = Clock::now();

    for (const std::size_t i : order) {
      ++visit;
      const Sentence& sentence = corpus[i];
      const DependencyTree& gold = *sentence.gold_tree;
      const StackedAnnotation* first =
          stacked != nullptr ? &(*stacked)[i] : nullptr;

      const ArcScores arc =
          score_arcs(sentence, w, config, labels, clusters, first);
      DependencyTree pred;
      SiblingScores sib;
      GrandparentScores gp;
      if (use_siblings) sib = score_siblings(sentence, w, config);
      switch (decoder) {
        case DecoderKind::kProjective:
          pred = decode_projective(arc);
          break;
        case DecoderKind::kNonProjective:
          pred = decode_nonprojective(arc);
          break;
        case DecoderKind::kSibling:
          pred = decode_projective_sibling(arc, sib);
          break;
        case DecoderKind::kSiblingGrandparent:
          gp = score_grandparents(sentence, w, config);
          pred = hill_climb_refine(arc, sib, gp,
                                   decode_projective_sibling(arc, sib));
          break;
      }

      for (int m = 1; m <= sentence.size(); ++m) {
        ++tokens;
        if (pred.head_of(m) == gold.head_of(m)) {
          ++ok_heads;
          if (pred.label_of(m) == gold.label_of(m)) ++ok_arcs;
        }
      }
      if (pred != gold) {
        gold_fv.entries.clear();
        pred_fv.entries.clear();
        tree_features(sentence, gold, config, clusters, first, use_siblings,
                      use_grandparents, gold_fv);
        tree_features(sentence, pred, config, clusters, first, use_siblings,
                      use_grandparents, pred_fv);
        apply_delta(w, u, visit, gold_fv, +1.0);
        apply_delta(w, u, visit, pred_fv, -1.0);
        ++stats.updates;
      }
    }

    stats.uas = tokens > 0 ? static_cast<double>(ok_heads) / tokens : 0.0;
    stats.las = tokens > 0 ? static_cast<double>(ok_arcs) / tokens : 0.0;
    stats.seconds = elapsed_seconds(started);
    log.epochs.push_back(stats);
  }

  Model model;
  model.family = ParserFamily::kGraph;
  model.decoder = decoder;
  model.config = config;
  model.labels = labels;
  model.weights = averaged(w, u, total_visits);
  model.corpus_fingerprint = corpus_fingerprint_u64(corpus);
  model.epochs = static_cast<std::uint32_t>(epochs);
  model.seed = seed;
  model.validate();
  return {std::move(model), std::move(log)};
}

std::pair<Model, TrainLog> train_multiclass(
    const std::vector<TransitionInstance>& instances, TemplateConfig config,
    int epochs, std::uint64_t seed, bool shuffle) {
  config.validate();
  if (epochs < 1) throw ConfigError("epochs must be positive");
  if (instances.empty()) throw DataError("no training instances");
  std::set<int> class_set;
  int max_class = 0;
  for (const TransitionInstance& inst : instances) {
    if (inst.cls < 0) throw DataError("negative class id");
    class_set.insert(inst.cls);
    max_class = std::max(max_class, inst.cls);
  }
  if (class_set.size() < 2) {
    throw DataError("multiclass training needs at least two distinct classes");
  }
  const int classes = max_class + 1;

  const auto dim = static_cast<Eigen::Index>(config.bucket_count());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
  const std::uint64_t total_visits =
      static_cast<std::uint64_t>(epochs) * instances.size();
  std::uint64_t visit = 0;
  Rng rng(seed);
  TrainLog log;

  std::vector<std::size_t> base(instances.size());
  std::iota(base.begin(), base.end(), 0);

  const auto update_class = [&](const FeatureVector& fv, int cls, double sign) {
    const double scale = static_cast<double>(visit - 1);
    for (const auto& [bucket, value] : fv.entries) {
      const auto b = static_cast<Eigen::Index>(
          remix_bucket(bucket, static_cast<std::uint32_t>(cls),
                       config.hash_bits));
      w[b] += sign * value;
      u[b] += sign * value * scale;
    }
  };

  for (int epoch = 1; epoch <= epochs; ++epoch) {
    std::vector<std::size_t> order = base;
    if (shuffle) rng.shuffle(order);
    EpochStats stats;
    stats.epoch = epoch;
    std::uint64_t correct = 0;
    const auto started = Clock::now();

    for (const std::size_t i : order) {
      ++visit;
      const TransitionInstance& inst = instances[i];
      int best = 0;
      double best_score = dot_class(w, inst.features, 0, config.hash_bits);
      for (int c = 1; c < classes; ++c) {
        const double s = dot_class(w, inst.features,
                                   static_cast<std::uint32_t>(c),
                                   config.hash_bits);
        if (s > best_score) {
          best = c;
          best_score = s;
        }
      }
      if (best == inst.cls) {
        ++correct;
      } else {
        update_class(inst.features, inst.cls, +1.0);
        update_class(inst.features, best, -1.0);
        ++stats.updates;
      }
    }

    stats.uas = static_cast<double>(correct) / instances.size();
    stats.las = stats.uas;
    stats.seconds = elapsed_seconds(started);
    log.epochs.push_back(stats);
  }

  Model model;
  model.family = ParserFamily::kTransition;
  model.decoder = DecoderKind::kProjective;
  model.config = config;
  model.labels = {"_class"};  // callers with real inventories overwrite this
  model.weights = averaged(w, u, total_visits);
  model.epochs = static_cast<std::uint32_t>(epochs);
  model.seed = seed;
  model.validate();
  return {std::move(model), std::move(log)};
}

std::pair<Model, TrainLog> train_transition(const Corpus& corpus,
                                            TemplateConfig config, int epochs,
                                            std::uint64_t seed, bool shuffle) {
  config.validate();
  check_gold(corpus);
  const std::vector<std::string> labels = collect_labels(corpus);

  int skipped = 0;
  std::vector<TransitionInstance> instances;
  for (const Sentence& sentence : corpus) {
    if (!is_projective(*sentence.gold_tree)) {
      ++skipped;
      continue;
    }
    auto more =
        oracle_instances(sentence, *sentence.gold_tree, labels, config);
    std::move(more.begin(), more.end(), std::back_inserter(instances));
  }
  if (instances.empty()) {
    throw DataError("no projective training sentences");
  }

  auto [model, log] = train_multiclass(instances, config, epochs, seed, shuffle);
  model.labels = labels;
  model.corpus_fingerprint = corpus_fingerprint_u64(corpus);
  log.skipped = skipped;
  return {std::move(model), std::move(log)};
}

}  // namespace sdparse
