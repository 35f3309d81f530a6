#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tarlab/classifier.hpp"
#include "tarlab/corpus.hpp"
#include "tarlab/strategies.hpp"

namespace tarlab {

enum class Strategy { kRelevanceFeedback, kUncertainty };

std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

struct RunConfig {
  std::string category;
  std::uint64_t rng_seed = 0;
  long batch_size = 200;
  double recall_target = 0.8;
  Strategy strategy = Strategy::kRelevanceFeedback;
  long extension_batches = 0;  // extra iterations past target attainment
  double bm25_k1 = 1.2;
  double bm25_b = 0.75;
  TrainConfig train;
};

struct ReviewedDoc {
  std::string id;
  bool positive = false;
};

// One iteration of a run. gain_positions holds the 1-based ranks at which
// the remaining positives appear in this iteration's ranking of the
// unreviewed pool, in strictly increasing order.
struct IterationRecord {
  long t = 0;
  std::vector<ReviewedDoc> batch;  // documents reviewed this iteration
  long cum_pos = 0;                // Q_t
  long cum_reviewed = 0;           // N_t
  std::vector<long> gain_positions;
};

struct RunTrace {
  RunConfig config;
  long total_positives = 0;  // R
  long collection_size = 0;  // N
  std::vector<IterationRecord> records;
};

// Observation hook for oracle checks: called once per iteration with the
// scored unreviewed pool the ranking was built from.
using IterationObserver =
    std::function<void(long t, const std::vector<ScoredDoc>& pool)>;

// Minimum positives for recall target g: ceil(g * R).
long recall_quota(long total_positives, double recall_target);

// Depth in this iteration's ranking of the unreviewed pool needed to collect
// quota - Q_t further positives; 0 when the quota is already met.
long rho(const IterationRecord& record, long quota);

// Smallest t with Q_t >= quota. Throws if the trace never reaches it.
long one_phase_stop(const RunTrace& trace, long quota);

// Executes a full active-learning run: a single positive seed at iteration 0
// (batch 1 chosen by BM25-TF similarity to the seed), then train / rank /
// select until recall_target is met, plus extension_batches more.
RunTrace run(const Corpus& corpus, const RunConfig& config,
             const IterationObserver& observer = {});

// Trace round trip; bytes are stable across save(load(save(x))).
void save_trace(const RunTrace& trace, const std::string& path);
RunTrace load_trace(const std::string& path);

}  // namespace tarlab
