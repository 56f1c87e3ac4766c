#include "sdparse/transition_parser.hpp"

#include <algorithm>

namespace sdparse {

namespace {

constexpr const char* kNil = "_NIL_";

// Label of the leftmost/rightmost collected child of `token`, or _NIL_.
std::string edge_child_label(const ParserState& state, int token, bool leftmost) {
  if (token < 1) return kNil;
  int found = -1;
  for (int c = 1; c <= state.n; ++c) {
    if (state.heads[c - 1] != token) continue;
    if (found == -1 || (leftmost ? c < found : c > found)) found = c;
  }
  return found == -1 ? kNil : state.labels[found - 1];
}

}  // namespace

std::string to_string(const Transition& t) {
  switch (t.kind) {
    case TransitionKind::kShift: return "SHIFT";
    case TransitionKind::kLeftArc: return "LEFT_ARC(" + t.label + ")";
    case TransitionKind::kRightArc: return "RIGHT_ARC(" + t.label + ")";
  }
  return "?";
}

ParserState ParserState::initial(int n) {
  if (n < 1) throw DataError("cannot parse an empty sentence");
  ParserState s;
  s.n = n;
  s.stack = {kRootIndex};
  s.next = 1;
  s.heads.assign(n, -1);
  s.labels.assign(n, "");
  return s;
}

int ParserState::stack_at(int depth) const {
  const int i = static_cast<int>(stack.size()) - 1 - depth;
  return i >= 0 ? stack[i] : -1;
}

int ParserState::buffer_at(int offset) const {
  const int i = next + offset;
  return i <= n ? i : -1;
}

DependencyTree ParserState::to_tree() const {
  for (int t = 1; t <= n; ++t) {
    if (heads[t - 1] == -1) {
      throw DataError("token " + std::to_string(t) + " is still unattached");
    }
  }
  return DependencyTree(heads, labels);
}

bool is_legal(const ParserState& state, TransitionKind kind) {
  switch (kind) {
    case TransitionKind::kShift:
      return !state.buffer_empty();
    case TransitionKind::kLeftArc:
      return state.stack.size() >= 2 && state.stack_at(1) != kRootIndex;
    case TransitionKind::kRightArc:
      if (state.stack.size() < 2) return false;
      if (state.stack_at(1) == kRootIndex) {
        return state.buffer_empty() && state.stack.size() == 2;
      }
      return true;
  }
  return false;
}

ParserState apply(const ParserState& state, const Transition& t) {
  if (!is_legal(state, t.kind)) {
    throw DataError("illegal transition " + to_string(t));
  }
  ParserState s = state;
  switch (t.kind) {
    case TransitionKind::kShift:
      s.stack.push_back(s.next);
      ++s.next;
      break;
    case TransitionKind::kLeftArc: {
      const int s0 = s.stack_at(0), s1 = s.stack_at(1);
      s.heads[s1 - 1] = s0;
      s.labels[s1 - 1] = t.label;
      s.stack.erase(s.stack.end() - 2);
      break;
    }
    case TransitionKind::kRightArc: {
      const int s0 = s.stack_at(0), s1 = s.stack_at(1);
      s.heads[s0 - 1] = s1;
      s.labels[s0 - 1] = t.label;
      s.stack.pop_back();
      break;
    }
  }
  return s;
}

Transition static_oracle(const ParserState& state, const DependencyTree& gold) {
  const auto finished = [&](int token) {
    for (int c = 1; c <= state.n; ++c) {
      if (gold.head_of(c) == token && !state.attached(c)) return false;
    }
    return true;
  };
  if (state.stack.size() >= 2) {
    const int s0 = state.stack_at(0), s1 = state.stack_at(1);
    if (s1 != kRootIndex && gold.head_of(s1) == s0 && finished(s1)) {
      return {TransitionKind::kLeftArc, gold.label_of(s1)};
    }
    if (gold.head_of(s0) == s1 && finished(s0) &&
        is_legal(state, TransitionKind::kRightArc)) {
      return {TransitionKind::kRightArc, gold.label_of(s0)};
    }
  }
  if (!state.buffer_empty()) return {TransitionKind::kShift, ""};
  throw DataError("oracle stuck: gold tree is not projective");
}

std::vector<Transition> oracle_sequence(const DependencyTree& gold) {
  const int n = gold.size();
  ParserState state = ParserState::initial(n);
  std::vector<Transition> seq;
  seq.reserve(2 * static_cast<std::size_t>(n));
  while (!state.done()) {
    Transition t = static_oracle(state, gold);
    state = apply(state, t);
    seq.push_back(std::move(t));
  }
  return seq;
}

int transition_class_count(int label_count) { return 1 + 2 * label_count; }

int transition_class(const Transition& t, const std::vector<std::string>& labels) {
  if (t.kind == TransitionKind::kShift) return 0;
  const auto it = std::find(labels.begin(), labels.end(), t.label);
  if (it == labels.end()) {
    throw DataError("transition label not in inventory: " + t.label);
  }
  const int idx = static_cast<int>(it - labels.begin());
  return t.kind == TransitionKind::kLeftArc ? 1 + 2 * idx : 2 + 2 * idx;
}

Transition class_transition(int cls, const std::vector<std::string>& labels) {
  if (cls == 0) return {TransitionKind::kShift, ""};
  const int idx = (cls - 1) / 2;
  if (cls < 0 || idx >= static_cast<int>(labels.size())) {
    throw DataError("transition class out of range: " + std::to_string(cls));
  }
  const auto kind =
      cls % 2 == 1 ? TransitionKind::kLeftArc : TransitionKind::kRightArc;
  return {kind, labels[idx]};
}

void transition_features(const Sentence& sentence, const ParserState& state,
                         const TemplateConfig& config, FeatureVector& out) {
  const auto pos = [&](int token) {
    return token < 0 ? std::string(kNil) : detail::pos_at(sentence, token);
  };
  const auto form = [&](int token) {
    return token < 0 ? std::string(kNil) : detail::form_at(sentence, token);
  };
  const int s0 = state.stack_at(0), s1 = state.stack_at(1);
  const int b0 = state.buffer_at(0), b1 = state.buffer_at(1);
  const std::string s0p = pos(s0), s1p = pos(s1), b0p = pos(b0), b1p = pos(b1);
  const std::string s0f = form(s0), s1f = form(s1), b0f = form(b0),
                    b1f = form(b1);
  const char j = detail::kJoin;
  const std::string lc0 = edge_child_label(state, s0, true);
  const std::string rc0 = edge_child_label(state, s0, false);
  const std::string lc1 = edge_child_label(state, s1, true);
  const std::string rc1 = edge_child_label(state, s1, false);

  const std::string feats[] = {
      s0f,
      s0p,
      s1f,
      s1p,
      b0f,
      b0p,
      b1f,
      b1p,
      s0p + j + s1p,
      s0f + j + s1f,
      s0p + j + b0p,
      s1p + j + s0p + j + b0p,
      s1p + j + b0p,
      lc0,
      rc0,
      lc1,
      rc1,
      s0p + j + lc0,
      s0p + j + rc0,
      s1p + j + lc1,
      s1p + j + rc1,
  };
  for (std::size_t k = 0; k < std::size(feats); ++k) {
    const auto id = static_cast<std::uint8_t>(tmpl::kTransition + k);
    out.add(hash_feature(id, feats[k], config.hash_bits));
  }
}

std::vector<TransitionInstance> oracle_instances(
    const Sentence& sentence, const DependencyTree& gold,
    const std::vector<std::string>& labels, const TemplateConfig& config) {
  if (gold.size() != sentence.size()) {
    throw DataError("gold tree does not match the sentence");
  }
  ParserState state = ParserState::initial(sentence.size());
  std::vector<TransitionInstance> out;
  while (!state.done()) {
    const Transition t = static_oracle(state, gold);
    TransitionInstance inst;
    transition_features(sentence, state, config, inst.features);
    inst.cls = transition_class(t, labels);
    out.push_back(std::move(inst));
    state = apply(state, t);
  }
  return out;
}

DependencyTree parse_greedy(const Sentence& sentence, const Model& model) {
  const int classes = transition_class_count(static_cast<int>(model.labels.size()));
  ParserState state = ParserState::initial(sentence.size());
  FeatureVector fv;
  while (!state.done()) {
    fv.entries.clear();
    transition_features(sentence, state, model.config, fv);
    int best = -1;
    double best_score = 0.0;
    for (int c = 0; c < classes; ++c) {
      const Transition t = class_transition(c, model.labels);
      if (!is_legal(state, t.kind)) continue;
      const double score = model.dot_class(fv, static_cast<std::uint32_t>(c));
      if (best == -1 || score > best_score) {
        best = c;
        best_score = score;
      }
    }
    state = apply(state, class_transition(best, model.labels));
  }
  return state.to_tree();
}

}  // namespace sdparse
