#pragma once

// Shared generators for the test suites: a synthetic two-class bag-of-words
// corpus and random-but-consistent run traces for cost-model checks.

#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tarlab/corpus.hpp"
#include "tarlab/simulator.hpp"

namespace tarlab::testutil {

// Two overlapping Gaussian-style bag-of-words classes. Positives draw most
// tokens from the low half of the vocabulary, negatives from the high half,
// with enough cross-block noise that a single seed document ranks the pool
// poorly while a trained model ranks it well.
inline Corpus make_synthetic_corpus(long n_docs = 2000, double prevalence = 0.05,
                                    std::uint64_t corpus_seed = 12345,
                                    long doc_length = 15, double block_prob = 0.75) {
  const int vocab_size = 60;
  const int block = vocab_size / 2;
  std::mt19937_64 rng(corpus_seed);
  const long n_pos = static_cast<long>(prevalence * static_cast<double>(n_docs));

  Corpus corpus;
  for (long i = 0; i < n_docs; ++i) {
    const bool positive = i < n_pos;
    std::vector<std::string> tokens;
    for (long k = 0; k < doc_length; ++k) {
      const bool own_block =
          (static_cast<double>(rng() >> 11) * 0x1.0p-53) < block_prob;
      const int base = (positive == own_block) ? 0 : block;
      const int term = base + static_cast<int>(rng() % block);
      tokens.push_back("t" + std::to_string(term));
    }
    char id[24];
    std::snprintf(id, sizeof(id), "d%05ld", i);
    std::map<std::string, int> counts;
    for (const auto& tok : tokens) ++counts[tok];
    Document doc;
    doc.id = id;
    doc.term_counts.assign(counts.begin(), counts.end());
    doc.length = doc_length;
    corpus.documents.push_back(std::move(doc));
    if (positive) corpus.categories["topic"].insert(id);
  }
  // Shuffle so label is not correlated with document order.
  for (long i = n_docs - 1; i > 0; --i) {
    const long j = static_cast<long>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(corpus.documents[i], corpus.documents[j]);
  }
  long total = 0;
  for (long i = 0; i < n_docs; ++i) {
    total += corpus.documents[i].length;
    for (const auto& [term, count] : corpus.documents[i].term_counts) {
      (void)count;
      if (corpus.vocabulary.emplace(term, static_cast<int>(corpus.terms.size())).second)
        corpus.terms.push_back(term);
    }
  }
  corpus.avg_doc_length = static_cast<double>(total) / static_cast<double>(n_docs);
  return corpus;
}

// A random trace whose per-iteration counts and gain positions are mutually
// consistent, for exercising the cost algebra without running a simulation.
inline RunTrace make_random_trace(std::mt19937_64& rng) {
  RunTrace trace;
  trace.total_positives = 5 + static_cast<long>(rng() % 46);
  trace.collection_size = 40 * trace.total_positives;
  trace.config.recall_target = 0.8;
  trace.config.batch_size = 10;

  const long quota = recall_quota(trace.total_positives, trace.config.recall_target);
  long cum_pos = 1, cum_reviewed = 1;
  for (long t = 0;; ++t) {
    IterationRecord record;
    record.t = t;
    record.cum_pos = cum_pos;
    record.cum_reviewed = cum_reviewed;
    const long remaining = trace.total_positives - cum_pos;
    const long pool = trace.collection_size - cum_reviewed;
    // Strictly increasing ranks: a random size-`remaining` subset of 1..pool.
    std::set<long> rank_set;
    while (static_cast<long>(rank_set.size()) < remaining)
      rank_set.insert(1 + static_cast<long>(rng() % static_cast<std::uint64_t>(pool)));
    record.gain_positions.assign(rank_set.begin(), rank_set.end());
    trace.records.push_back(std::move(record));

    if (cum_pos >= quota && t >= 3) break;
    const long batch = trace.config.batch_size;
    const long found = std::min<long>(remaining, static_cast<long>(rng() % (batch + 1)));
    cum_pos += found;
    cum_reviewed += batch;
  }
  return trace;
}

}  // namespace tarlab::testutil
