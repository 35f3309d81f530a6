#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tarlab {

// One labeled document after tokenization. Term counts are kept sorted by
// term so that serialization and feature extraction are order-stable.
struct Document {
  std::string id;
  std::vector<std::pair<std::string, int>> term_counts;  // sorted by term
  long length = 0;  // total token occurrences (dl)
};

// Sparse feature vector; entries sorted by feature index, no explicit zeros.
struct FeatureVector {
  std::vector<std::pair<int, double>> entries;
};

// An immutable labeled collection. Safe to share across concurrent runs.
struct Corpus {
  std::vector<Document> documents;                      // file order
  std::map<std::string, std::set<std::string>> categories;
  std::vector<std::string> terms;                       // feature index -> term
  std::map<std::string, int> vocabulary;                // term -> feature index
  double avg_doc_length = 0.0;

  long size() const { return static_cast<long>(documents.size()); }
  const Document* find(const std::string& doc_id) const;
};

// Lowercase, split on any non-alphanumeric byte, drop tokens shorter than 2.
std::vector<std::string> tokenize(const std::string& text);

// BM25-style saturating term frequency: tf / (tf + k1*(1 - b + b*dl/avdl)).
double bm25_tf_weight(long tf, long dl, double avdl, double k1, double b);

FeatureVector vectorize(const Document& doc, const Corpus& corpus,
                        double k1 = 1.2, double b = 0.75);

// Reads a JSONL collection. Each line is an object with "id", "labels", and
// either "text" (raw, run through the tokenizer) or "tokens" (pre-tokenized
// list of terms). Throws std::runtime_error with the line number on bad
// input or a duplicate id.
Corpus ingest_jsonl(const std::string& path);

// Deterministic random subset keeping floor(fraction * N) documents in
// original order; vocabulary, labels, and avdl are rebuilt.
Corpus subsample(const Corpus& corpus, double fraction, std::uint64_t rng_seed);

// Cache round trip. save/load must reproduce the corpus and its bytes exactly.
void save_corpus(const Corpus& corpus, const std::string& path);
Corpus load_corpus(const std::string& path);

}  // namespace tarlab
