#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sdparse/tree.hpp"

namespace sdparse {

// ---- CoNLL-X (10 tab-separated columns, blank line between sentences) ----
//
// Columns used: 1 index, 2 form, 3 lemma, 4 cpos, 5 fpos, 7 head, 8 label.
// "_" marks an absent field. A sentence gets a gold tree iff every head
// column holds an integer. Errors carry the offending line number.

Corpus read_conll(std::istream& in);
Corpus read_conll_string(const std::string& text);
Corpus read_conll_file(const std::string& path);

// Writes each sentence with the tree from `trees` (gold trees when trees is
// empty). Throws DataError on a tree/sentence length mismatch.
void write_conll(std::ostream& out, const Corpus& corpus,
                 const std::vector<DependencyTree>& trees = {});
std::string conll_to_string(const Corpus& corpus,
                            const std::vector<DependencyTree>& trees = {});

// FNV-1a over the CoNLL serialization; ties a model to its training data.
std::string corpus_fingerprint(const Corpus& corpus);

// ---- Stanford dependency tuple files ----
//
// One `type(parentform-P, childform-C)` line per arc, sorted by
// (child, parent, type); parent 0 renders as ROOT-0; a blank line terminates
// every sentence block, including empty ones.

void write_sd_graph(std::ostream& out, const Sentence& sentence,
                    const DependencyGraph& graph);
std::string sd_graph_to_string(const Sentence& sentence,
                               const DependencyGraph& graph);

DependencyGraph read_sd_graph(std::string_view text);
std::vector<DependencyGraph> read_sd_corpus(std::istream& in);
std::vector<DependencyGraph> read_sd_corpus_file(const std::string& path);

void write_sd_corpus(std::ostream& out, const Corpus& corpus,
                     const std::vector<DependencyGraph>& graphs);

// ---- Brown cluster lexicon (`bitstring<TAB>word[<TAB>count]` lines) ----

class ClusterLexicon {
 public:
  // Designated bit-string for unseen words.
  static constexpr const char* kUnknownBits = "0";

  void insert(std::string word, std::string bits);
  // Total lookup: unseen words map to kUnknownBits.
  const std::string& lookup(const std::string& word) const;
  // Bit-string prefix of the given length; the whole string when shorter.
  std::string prefix(const std::string& word, std::size_t length) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::string> entries_;
};

ClusterLexicon load_clusters(std::istream& in);
ClusterLexicon load_clusters_file(const std::string& path);

// ---- Sequential corpus partitions for jackknifing ----

struct CorpusPartition {
  int part_id = 0;        // 1..k
  std::size_t begin = 0;  // inclusive sentence index
  std::size_t end = 0;    // exclusive

  std::size_t size() const { return end - begin; }
  bool contains(std::size_t sentence) const {
    return sentence >= begin && sentence < end;
  }
};

// k contiguous parts in corpus order, sizes ceil(n/k) or floor(n/k) with the
// larger parts first. Throws DataError when k > corpus_size or k < 2.
std::vector<CorpusPartition> jackknife_partition(std::size_t corpus_size,
                                                 int k);

}  // namespace sdparse
