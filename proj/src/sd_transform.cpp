#include "sdparse/sd_transform.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <sstream>
#include <string_view>

namespace sdparse {

namespace {

std::string lower_form(const Sentence& sentence, int index) {
  std::string s = sentence.token(index).form;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

bool is_typed_conj(std::string_view type) {
  return type.size() > 5 && type.substr(0, 5) == "conj_";
}

bool between(int b, int x, int y) {
  return b > std::min(x, y) && b < std::max(x, y);
}

void record(TransformTrace* trace, TransformRule step) {
  if (trace != nullptr) trace->steps.push_back(std::move(step));
}

void edit(DependencyGraph& g, const TransformRule& step) {
  for (const DependencyArc& arc : step.removed) g.arcs.erase(arc);
  for (const DependencyArc& arc : step.added) g.arcs.insert(arc);
}

// Shared prep(A->B) + pobj(B->C) collapsing; rule 2 additionally demands
// A < B < C.
DependencyGraph collapse_prep_like(const DependencyGraph& graph,
                                   const Sentence& sentence, bool need_order,
                                   const char* rule_name,
                                   TransformTrace* trace) {
  DependencyGraph out = graph;
  std::set<int> consumed;  // prepositions B already collapsed
  bool changed = true;
  while (changed) {
    changed = false;
    for (const DependencyArc& prep : out.arcs) {
      if (prep.dep_type != "prep" || consumed.count(prep.child) > 0) continue;
      const int a = prep.parent, b = prep.child;
      const DependencyArc* pobj = nullptr;
      for (const DependencyArc& cand : out.arcs) {
        if (cand.dep_type == "pobj" && cand.parent == b) {
          pobj = &cand;  // (child, parent, type) order: smallest C wins
          break;
        }
      }
      if (pobj == nullptr) continue;
      const int c = pobj->child;
      if (need_order && !(a < b && b < c)) continue;
      TransformRule step;
      step.rule = rule_name;
      step.a = a;
      step.b = b;
      step.c = c;
      step.t = "prep";
      step.added = {{"prep_" + lower_form(sentence, b), a, c}};
      step.removed = {prep, *pobj};
      edit(out, step);
      record(trace, std::move(step));
      consumed.insert(b);
      changed = true;
      break;  // the set changed; restart the scan
    }
  }
  return out;
}

}  // namespace

DependencyGraph collapse_preps(const DependencyGraph& graph,
                               const Sentence& sentence,
                               TransformTrace* trace) {
  return collapse_prep_like(graph, sentence, false, "collapse_prep", trace);
}

DependencyGraph apply_rule2(const DependencyGraph& graph,
                            const Sentence& sentence, TransformTrace* trace) {
  return collapse_prep_like(graph, sentence, true, "rule2", trace);
}

DependencyGraph collapse_conj(const DependencyGraph& graph,
                              const Sentence& sentence,
                              TransformTrace* trace) {
  DependencyGraph out = graph;
  // Gather per-governor cc and conj arcs up front; matching is decided on
  // this snapshot, edits land afterwards.
  std::vector<DependencyArc> conjs, ccs;
  for (const DependencyArc& arc : graph.arcs) {
    if (arc.dep_type == "conj") conjs.push_back(arc);
    if (arc.dep_type == "cc") ccs.push_back(arc);
  }
  std::set<DependencyArc> used_cc;
  for (const DependencyArc& conj : conjs) {
    const int a = conj.parent, c = conj.child;
    // Nearest conjunction word before the conjunct.
    const DependencyArc* cc = nullptr;
    for (const DependencyArc& cand : ccs) {
      if (cand.parent != a || !between(cand.child, a, c)) continue;
      if (cc == nullptr || cand.child > cc->child) cc = &cand;
    }
    if (cc == nullptr) continue;
    TransformRule step;
    step.rule = "collapse_conj";
    step.a = a;
    step.b = cc->child;
    step.c = c;
    step.t = "conj";
    step.added = {{"conj_" + lower_form(sentence, cc->child), a, c}};
    step.removed = {conj};
    if (used_cc.insert(*cc).second) step.removed.push_back(*cc);
    edit(out, step);
    record(trace, std::move(step));
  }
  return out;
}

DependencyGraph propagate_conjuncts(const DependencyGraph& graph,
                                    TransformTrace* trace) {
  static const std::array<std::string_view, 6> kCopyDown = {
      "nsubj", "nsubjpass", "dobj", "iobj", "amod", "advmod"};
  static const std::array<std::string_view, 4> kCopyUp = {"nsubj", "nsubjpass",
                                                          "dobj", "iobj"};
  const auto in = [](const auto& list, std::string_view t) {
    return std::find(list.begin(), list.end(), t) != list.end();
  };

  DependencyGraph out = graph;
  const DependencyGraph snapshot = graph;  // blocking checks use the input
  const auto governs_relation = [&](int node, const std::string& type) {
    for (const DependencyArc& arc : snapshot.arcs) {
      if (arc.parent == node && arc.dep_type == type) return true;
    }
    return false;
  };

  for (const DependencyArc& conj : snapshot.arcs) {
    if (!is_typed_conj(conj.dep_type)) continue;
    const int a = conj.parent, c = conj.child;
    for (const DependencyArc& arc : snapshot.arcs) {
      if (arc.parent == a && in(kCopyDown, arc.dep_type) && arc.child != c &&
          !governs_relation(c, arc.dep_type)) {
        const DependencyArc copy{arc.dep_type, c, arc.child};
        if (!out.contains(copy)) {
          TransformRule step;
          step.rule = "propagate";
          step.a = a;
          step.c = c;
          step.t = arc.dep_type;
          step.added = {copy};
          edit(out, step);
          record(trace, std::move(step));
        }
      }
      if (arc.child == a && in(kCopyUp, arc.dep_type) && arc.parent != c) {
        const DependencyArc copy{arc.dep_type, arc.parent, c};
        if (!out.contains(copy)) {
          TransformRule step;
          step.rule = "propagate";
          step.a = a;
          step.c = c;
          step.t = arc.dep_type;
          step.added = {copy};
          edit(out, step);
          record(trace, std::move(step));
        }
      }
    }
  }
  return out;
}

DependencyGraph apply_rule1(const DependencyGraph& graph,
                            const Sentence& sentence, Rule1Mode mode,
                            TransformTrace* trace) {
  DependencyGraph out = graph;
  std::vector<DependencyArc> ccs;
  for (const DependencyArc& arc : graph.arcs) {
    if (arc.dep_type == "cc" && arc.parent < arc.child) ccs.push_back(arc);
  }
  for (const DependencyArc& cc : ccs) {
    const int a = cc.parent, b = cc.child;
    const std::string label = "conj_" + lower_form(sentence, b);
    if (mode == Rule1Mode::kLiteral &&
        out.contains({label, a, b})) {  // already applied; keeps it idempotent
      continue;
    }
    // First child of A to the right of B, skipping arcs that are themselves
    // conjunction plumbing (cc, typed conj).
    const DependencyArc* t_arc = nullptr;
    for (const DependencyArc& cand : out.arcs) {
      if (cand.parent != a || cand.child <= b) continue;
      if (cand.dep_type == "cc" || is_typed_conj(cand.dep_type)) continue;
      if (t_arc == nullptr || cand.child < t_arc->child) t_arc = &cand;
    }
    if (t_arc == nullptr) continue;
    TransformRule step;
    step.rule = mode == Rule1Mode::kCorrected ? "rule1" : "rule1_literal";
    step.a = a;
    step.b = b;
    step.c = t_arc->child;
    step.t = t_arc->dep_type;
    if (mode == Rule1Mode::kCorrected) {
      step.added = {{label, a, t_arc->child}};
      step.removed = {*t_arc, cc};
    } else {
      step.added = {{label, a, b}};
      step.removed = {*t_arc};
    }
    edit(out, step);
    record(trace, std::move(step));
  }
  return out;
}

std::pair<DependencyGraph, TransformTrace> basic_to_ccprocessed(
    const DependencyTree& tree, const Sentence& sentence,
    const TransformConfig& config) {
  const TreeVerdict verdict = validate_tree(tree, sentence.size());
  if (!verdict) throw DataError("transform input: " + verdict.error);
  TransformTrace trace;
  DependencyGraph g = tree_to_graph(tree);
  if (config.collapse_preps) g = collapse_preps(g, sentence, &trace);
  if (config.collapse_conj) g = collapse_conj(g, sentence, &trace);
  if (config.propagate) g = propagate_conjuncts(g, &trace);
  if (config.rule1) g = apply_rule1(g, sentence, config.rule1_mode, &trace);
  if (config.rule2) g = apply_rule2(g, sentence, &trace);
  return {std::move(g), std::move(trace)};
}

DependencyGraph replay_trace(const DependencyGraph& input,
                             const TransformTrace& trace) {
  DependencyGraph out = input;
  for (const TransformRule& step : trace.steps) edit(out, step);
  return out;
}

std::string trace_to_string(const TransformTrace& trace) {
  std::ostringstream os;
  const auto arc = [](const DependencyArc& a) {
    return a.dep_type + "(" + std::to_string(a.parent) + "->" +
           std::to_string(a.child) + ")";
  };
  for (const TransformRule& step : trace.steps) {
    os << step.rule << " A=" << step.a;
    if (step.b != 0) os << " B=" << step.b;
    if (step.c != 0) os << " C=" << step.c;
    if (!step.t.empty()) os << " T=" << step.t;
    for (const DependencyArc& a : step.added) os << " +" << arc(a);
    for (const DependencyArc& a : step.removed) os << " -" << arc(a);
    os << '\n';
  }
  return os.str();
}

}  // namespace sdparse
