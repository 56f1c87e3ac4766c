#pragma once

#include <string>
#include <vector>

#include "sdparse/tree.hpp"

namespace sdparse {

// How the "uncollapsed cc" rewrite binds its output arc. The source text
// says to add conj_B(A -> B), which retypes the conjunction word itself and
// leaves the conjunct C dangling; the corrected reading attaches C.
enum class Rule1Mode { kCorrected, kLiteral };

struct TransformConfig {
  bool collapse_preps = true;
  bool collapse_conj = true;
  bool propagate = true;
  bool rule1 = true;
  bool rule2 = true;
  Rule1Mode rule1_mode = Rule1Mode::kCorrected;
};

// One applied rewrite: which rule fired, the bound pattern variables, and
// the exact arc edits. a/b/c are token indices (0 = unused), t the bound
// relation label when the pattern has one.
struct TransformRule {
  std::string rule;
  int a = 0;
  int b = 0;
  int c = 0;
  std::string t;
  std::vector<DependencyArc> added;
  std::vector<DependencyArc> removed;
};

struct TransformTrace {
  std::vector<TransformRule> steps;
};

// prep(A->B) + pobj(B->C) => prep_<form of B>(A->C), both sources removed.
// Each preposition B is consumed at most once; leftovers stay bare.
DependencyGraph collapse_preps(const DependencyGraph& graph,
                               const Sentence& sentence,
                               TransformTrace* trace = nullptr);

// cc(A->B) + conj(A->C), B strictly between A and C =>
// conj_<form of B>(A->C). One cc types every matching conj sibling and is
// removed once it typed at least one.
DependencyGraph collapse_conj(const DependencyGraph& graph,
                              const Sentence& sentence,
                              TransformTrace* trace = nullptr);

// For every typed conj_X(A->C): dependents D of A via nsubj, nsubjpass,
// dobj, iobj, amod, or advmod are copied as R(C->D) unless C already governs
// an R arc in the input; where A itself depends on P via a subject/object
// relation, C gains R(P->C). Set semantics suppress duplicates.
DependencyGraph propagate_conjuncts(const DependencyGraph& graph,
                                    TransformTrace* trace = nullptr);

// Leftover cc(A->B) with A before B: corrected mode retypes the dependency
// of C, the first child of A right of B, to conj_<form of B>(A->C) and drops
// the cc; literal mode follows the source text (see Rule1Mode). Arcs that
// are already collapsed conj_*/cc never serve as T.
DependencyGraph apply_rule1(const DependencyGraph& graph,
                            const Sentence& sentence,
                            Rule1Mode mode = Rule1Mode::kCorrected,
                            TransformTrace* trace = nullptr);

// Leftover prep(A->B) + pobj(B->C) with A before B before C =>
// prep_<form of B>(A->C).
DependencyGraph apply_rule2(const DependencyGraph& graph,
                            const Sentence& sentence,
                            TransformTrace* trace = nullptr);

// Full pipeline: tree_to_graph, collapse_preps, collapse_conj,
// propagate_conjuncts, apply_rule1, apply_rule2 (stages toggled by config).
std::pair<DependencyGraph, TransformTrace> basic_to_ccprocessed(
    const DependencyTree& tree, const Sentence& sentence,
    const TransformConfig& config = {});

// Applies the trace's edits, in order, to `input`; reproduces the output of
// the run that recorded the trace.
DependencyGraph replay_trace(const DependencyGraph& input,
                             const TransformTrace& trace);

std::string trace_to_string(const TransformTrace& trace);

}  // namespace sdparse
