#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdparse/features.hpp"
#include "sdparse/model.hpp"
#include "sdparse/tree.hpp"

namespace sdparse {

enum class TransitionKind : std::uint8_t {
  kShift = 0,
  kLeftArc = 1,
  kRightArc = 2,
};

struct Transition {
  TransitionKind kind = TransitionKind::kShift;
  std::string label;  // empty for SHIFT

  bool operator==(const Transition&) const = default;
};

std::string to_string(const Transition& t);

// Arc-standard configuration. The stack grows towards the back and always
// keeps ROOT (0) at the bottom; tokens next..n form the buffer. heads/labels
// collect the partial analysis (-1 = unattached).
struct ParserState {
  int n = 0;
  std::vector<int> stack;
  int next = 1;
  std::vector<int> heads;
  std::vector<std::string> labels;

  static ParserState initial(int n);

  bool buffer_empty() const { return next > n; }
  int buffer_size() const { return n - next + 1; }
  // 0-based from the top (stack_at(0) == s0); -1 when out of range.
  int stack_at(int depth) const;
  // 0-based from the front (buffer_at(0) == b0); -1 when out of range.
  int buffer_at(int offset) const;
  bool attached(int token) const { return heads[token - 1] != -1; }
  bool done() const { return stack.size() == 1 && buffer_empty(); }

  // Requires every token attached (i.e. done()).
  DependencyTree to_tree() const;
};

// SHIFT needs a nonempty buffer; LEFT_ARC/RIGHT_ARC need stack depth >= 2;
// LEFT_ARC never takes ROOT as dependent; RIGHT_ARC onto ROOT is the final
// move only (depth exactly 2, empty buffer), which makes every parse
// single-rooted.
bool is_legal(const ParserState& state, TransitionKind kind);

// Applies the transition; throws DataError if it is illegal in `state`.
// SHIFT: buffer front moves to the stack top. LEFT_ARC(l): arc s0 -> s1,
// s1 leaves the stack. RIGHT_ARC(l): arc s1 -> s0, s0 is popped.
ParserState apply(const ParserState& state, const Transition& t);

// Canonical next transition towards the (projective) gold tree: LEFT_ARC when
// s1's gold head is s0 and s1 is finished collecting children; RIGHT_ARC when
// s0's gold head is s1 and s0 is finished; otherwise SHIFT. Throws DataError
// when stuck, which happens exactly on non-projective gold.
Transition static_oracle(const ParserState& state, const DependencyTree& gold);

// Full oracle derivation from the initial state; always 2n transitions.
// Throws DataError on non-projective gold.
std::vector<Transition> oracle_sequence(const DependencyTree& gold);

// Classifier class ids: SHIFT = 0, LEFT_ARC(labels[i]) = 1 + 2i,
// RIGHT_ARC(labels[i]) = 2 + 2i.
int transition_class_count(int label_count);
int transition_class(const Transition& t, const std::vector<std::string>& labels);
Transition class_transition(int cls, const std::vector<std::string>& labels);

// State features: forms/POS of s0, s1, b0, b1, their pairs, and the labels
// of the leftmost/rightmost collected children of s0 and s1. The transition
// class is not part of the strings; scoring folds it in via remix_bucket.
void transition_features(const Sentence& sentence, const ParserState& state,
                         const TemplateConfig& config, FeatureVector& out);

struct TransitionInstance {
  FeatureVector features;
  int cls = 0;
};

// One classification instance per oracle step.
std::vector<TransitionInstance> oracle_instances(
    const Sentence& sentence, const DependencyTree& gold,
    const std::vector<std::string>& labels, const TemplateConfig& config);

// Greedy deterministic inference; an illegal argmax falls back to the best
// legal transition, so parsing always ends after exactly 2n moves.
DependencyTree parse_greedy(const Sentence& sentence, const Model& model);

}  // namespace sdparse
