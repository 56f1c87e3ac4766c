#include "sdparse/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "sdparse/rng.hpp"

namespace sdparse {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    const long v = std::stol(s, &pos);
    if (pos != s.size()) return false;
    out = static_cast<int>(v);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

[[noreturn]] void conll_error(std::size_t line_no, const std::string& what) {
  throw IoError("conll line " + std::to_string(line_no) + ": " + what);
}

struct PendingToken {
  Token token;
  bool has_head = false;
  int head = 0;
  std::string label;
};

Sentence finish_sentence(std::vector<PendingToken>& pending,
                         std::size_t line_no) {
  Sentence sentence;
  const int n = static_cast<int>(pending.size());
  bool any_head = false;
  bool all_heads = true;
  for (int i = 0; i < n; ++i) {
    if (pending[i].token.index != i + 1) {
      conll_error(line_no, "token indices have a gap: expected " +
                               std::to_string(i + 1) + ", got " +
                               std::to_string(pending[i].token.index));
    }
    any_head = any_head || pending[i].has_head;
    all_heads = all_heads && pending[i].has_head;
    sentence.tokens.push_back(std::move(pending[i].token));
  }
  if (any_head && !all_heads) {
    conll_error(line_no, "sentence mixes annotated and absent head columns");
  }
  if (all_heads && n > 0) {
    DependencyTree tree{std::vector<int>(static_cast<std::size_t>(n))};
    for (int i = 0; i < n; ++i) {
      if (pending[i].head < 0 || pending[i].head > n) {
        conll_error(line_no,
                    "head out of range: " + std::to_string(pending[i].head));
      }
      tree.heads[i] = pending[i].head;
      tree.labels[i] = pending[i].label;
    }
    sentence.gold_tree = std::move(tree);
  }
  pending.clear();
  return sentence;
}

}  // namespace

Corpus read_conll(std::istream& in) {
  Corpus corpus;
  std::vector<PendingToken> pending;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (!pending.empty()) {
        corpus.push_back(finish_sentence(pending, line_no));
      }
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 10) {
      conll_error(line_no, "expected 10 tab-separated columns, got " +
                               std::to_string(fields.size()));
    }
    PendingToken pt;
    if (!parse_int(fields[0], pt.token.index)) {
      conll_error(line_no, "non-integer token index '" + fields[0] + "'");
    }
    pt.token.form = fields[1];
    pt.token.lemma = fields[2] == "_" ? "" : fields[2];
    pt.token.cpos = fields[3];
    pt.token.fpos = fields[4];
    if (fields[6] != "_") {
      if (!parse_int(fields[6], pt.head)) {
        conll_error(line_no, "non-integer head '" + fields[6] + "'");
      }
      pt.has_head = true;
      pt.label = fields[7] == "_" ? "" : fields[7];
    }
    pending.push_back(std::move(pt));
  }
  if (!pending.empty()) {
    corpus.push_back(finish_sentence(pending, line_no + 1));
  }
  return corpus;
}

Corpus read_conll_string(const std::string& text) {
  std::istringstream in(text);
  return read_conll(in);
}

Corpus read_conll_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_conll(in);
}

void write_conll(std::ostream& out, const Corpus& corpus,
                 const std::vector<DependencyTree>& trees) {
  if (!trees.empty() && trees.size() != corpus.size()) {
    throw DataError("write_conll: " + std::to_string(trees.size()) +
                    " trees for " + std::to_string(corpus.size()) +
                    " sentences");
  }
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const Sentence& sentence = corpus[s];
    const DependencyTree* tree = nullptr;
    if (!trees.empty()) {
      tree = &trees[s];
    } else if (sentence.gold_tree) {
      tree = &*sentence.gold_tree;
    }
    if (tree && tree->size() != sentence.size()) {
      throw DataError("write_conll: tree size " + std::to_string(tree->size()) +
                      " for sentence of " + std::to_string(sentence.size()) +
                      " tokens");
    }
    for (const Token& t : sentence.tokens) {
      out << t.index << '\t' << t.form << '\t'
          << (t.lemma.empty() ? "_" : t.lemma) << '\t' << t.cpos << '\t'
          << t.fpos << '\t' << '_' << '\t';
      if (tree) {
        const std::string& label = tree->label_of(t.index);
        out << tree->head_of(t.index) << '\t'
            << (label.empty() ? "_" : label);
      } else {
        out << '_' << '\t' << '_';
      }
      out << '\t' << '_' << '\t' << '_' << '\n';
    }
    out << '\n';
  }
}

std::string conll_to_string(const Corpus& corpus,
                            const std::vector<DependencyTree>& trees) {
  std::ostringstream out;
  write_conll(out, corpus, trees);
  return out.str();
}

std::string corpus_fingerprint(const Corpus& corpus) {
  const std::string bytes = conll_to_string(corpus);
  const std::uint64_t h = fnv1a64(bytes.data(), bytes.size());
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

namespace {

std::string token_form(const Sentence& sentence, int index) {
  if (index == kRootIndex) return kRootForm;
  if (index < 1 || index > sentence.size()) {
    throw DataError("arc index " + std::to_string(index) +
                    " outside sentence of " + std::to_string(sentence.size()) +
                    " tokens");
  }
  return sentence.token(index).form;
}

}  // namespace

void write_sd_graph(std::ostream& out, const Sentence& sentence,
                    const DependencyGraph& graph) {
  // std::set ordering is already (child, parent, type).
  for (const DependencyArc& arc : graph.arcs) {
    out << arc.dep_type << '(' << token_form(sentence, arc.parent) << '-'
        << arc.parent << ", " << token_form(sentence, arc.child) << '-'
        << arc.child << ")\n";
  }
  out << '\n';
}

std::string sd_graph_to_string(const Sentence& sentence,
                               const DependencyGraph& graph) {
  std::ostringstream out;
  write_sd_graph(out, sentence, graph);
  return out.str();
}

namespace {

// `form-index` with the index after the last dash.
int parse_indexed_form(std::string_view text, std::string_view line) {
  const std::size_t dash = text.rfind('-');
  if (dash == std::string_view::npos || dash + 1 >= text.size()) {
    throw IoError("unparseable tuple argument in line: " + std::string(line));
  }
  int value = 0;
  if (!parse_int(std::string(text.substr(dash + 1)), value) || value < 0) {
    throw IoError("bad token index in line: " + std::string(line));
  }
  return value;
}

DependencyArc parse_sd_line(std::string_view line) {
  const std::size_t open = line.find('(');
  if (open == std::string_view::npos || line.empty() || line.back() != ')') {
    throw IoError("unparseable tuple line: " + std::string(line));
  }
  const std::string_view type = line.substr(0, open);
  const std::string_view body =
      line.substr(open + 1, line.size() - open - 2);
  const std::size_t comma = body.find(", ");
  if (type.empty() || comma == std::string_view::npos) {
    throw IoError("unparseable tuple line: " + std::string(line));
  }
  DependencyArc arc;
  arc.dep_type = std::string(type);
  arc.parent = parse_indexed_form(body.substr(0, comma), line);
  arc.child = parse_indexed_form(body.substr(comma + 2), line);
  return arc;
}

}  // namespace

DependencyGraph read_sd_graph(std::string_view text) {
  DependencyGraph graph;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) graph.arcs.insert(parse_sd_line(line));
    start = nl + 1;
  }
  return graph;
}

std::vector<DependencyGraph> read_sd_corpus(std::istream& in) {
  // Every blank line terminates a block, so empty graphs survive round trips.
  std::vector<DependencyGraph> graphs;
  DependencyGraph current;
  bool has_content = false;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      graphs.push_back(std::move(current));
      current = {};
      has_content = false;
      continue;
    }
    current.arcs.insert(parse_sd_line(line));
    has_content = true;
  }
  if (has_content) graphs.push_back(std::move(current));
  return graphs;
}

std::vector<DependencyGraph> read_sd_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_sd_corpus(in);
}

void write_sd_corpus(std::ostream& out, const Corpus& corpus,
                     const std::vector<DependencyGraph>& graphs) {
  if (corpus.size() != graphs.size()) {
    throw DataError("write_sd_corpus: " + std::to_string(graphs.size()) +
                    " graphs for " + std::to_string(corpus.size()) +
                    " sentences");
  }
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    write_sd_graph(out, corpus[s], graphs[s]);
  }
}

void ClusterLexicon::insert(std::string word, std::string bits) {
  entries_[std::move(word)] = std::move(bits);
}

const std::string& ClusterLexicon::lookup(const std::string& word) const {
  static const std::string unknown = kUnknownBits;
  const auto it = entries_.find(word);
  return it == entries_.end() ? unknown : it->second;
}

std::string ClusterLexicon::prefix(const std::string& word,
                                   std::size_t length) const {
  const std::string& bits = lookup(word);
  return bits.size() <= length ? bits : bits.substr(0, length);
}

ClusterLexicon load_clusters(std::istream& in) {
  ClusterLexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2 && fields.size() != 3) {
      throw IoError("clusters line " + std::to_string(line_no) +
                    ": expected 2 or 3 tab-separated fields");
    }
    const std::string& bits = fields[0];
    if (bits.empty() ||
        bits.find_first_not_of("01") != std::string::npos) {
      throw IoError("clusters line " + std::to_string(line_no) +
                    ": bit-string must be non-empty 0/1, got '" + bits + "'");
    }
    // Later duplicates overwrite earlier ones.
    lexicon.insert(fields[1], bits);
  }
  return lexicon;
}

ClusterLexicon load_clusters_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return load_clusters(in);
}

std::vector<CorpusPartition> jackknife_partition(std::size_t corpus_size,
                                                 int k) {
  if (k < 2) throw DataError("jackknife_partition: k must be >= 2");
  if (static_cast<std::size_t>(k) > corpus_size) {
    throw DataError("jackknife_partition: k=" + std::to_string(k) +
                    " exceeds corpus size " + std::to_string(corpus_size));
  }
  std::vector<CorpusPartition> parts;
  const std::size_t base = corpus_size / k;
  const std::size_t extra = corpus_size % k;  // remainder to the front
  std::size_t begin = 0;
  for (int i = 0; i < k; ++i) {
    const std::size_t len = base + (static_cast<std::size_t>(i) < extra);
    parts.push_back({i + 1, begin, begin + len});
    begin += len;
  }
  return parts;
}

}  // namespace sdparse
