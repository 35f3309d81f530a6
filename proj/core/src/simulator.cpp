#include "tarlab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace tarlab {

namespace {

using nlohmann::ordered_json;

double sparse_dot(const FeatureVector& a, const FeatureVector& b) {
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.entries.size() && j < b.entries.size()) {
    if (a.entries[i].first < b.entries[j].first) {
      ++i;
    } else if (a.entries[i].first > b.entries[j].first) {
      ++j;
    } else {
      s += a.entries[i].second * b.entries[j].second;
      ++i;
      ++j;
    }
  }
  return s;
}

std::vector<long> positive_ranks(std::vector<ScoredDoc> pool,
                                 const std::vector<bool>& is_positive,
                                 const std::unordered_map<std::string, long>& doc_index) {
  std::sort(pool.begin(), pool.end(), [](const ScoredDoc& x, const ScoredDoc& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.id < y.id;
  });
  std::vector<long> ranks;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (is_positive[doc_index.at(pool[i].id)]) ranks.push_back(static_cast<long>(i) + 1);
  }
  return ranks;
}

}  // namespace

std::string strategy_name(Strategy s) {
  return s == Strategy::kRelevanceFeedback ? "relevance_feedback" : "uncertainty";
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "relevance_feedback" || name == "rel") return Strategy::kRelevanceFeedback;
  if (name == "uncertainty" || name == "unc") return Strategy::kUncertainty;
  throw std::invalid_argument("unknown strategy: " + name);
}

long recall_quota(long total_positives, double recall_target) {
  if (total_positives < 0) throw std::invalid_argument("recall_quota: R must be >= 0");
  if (recall_target <= 0.0 || recall_target > 1.0)
    throw std::invalid_argument("recall_quota: target must be in (0,1]");
  if (total_positives == 0) return 0;
  // Nudge below the product so exact multiples are not rounded up.
  return static_cast<long>(
      std::ceil(recall_target * static_cast<double>(total_positives) - 1e-9));
}

long rho(const IterationRecord& record, long quota) {
  if (record.cum_pos >= quota) return 0;
  const long need = quota - record.cum_pos;
  if (need > static_cast<long>(record.gain_positions.size()))
    throw std::invalid_argument("rho: quota exceeds remaining positives");
  return record.gain_positions[need - 1];
}

long one_phase_stop(const RunTrace& trace, long quota) {
  for (const auto& record : trace.records) {
    if (record.cum_pos >= quota) return record.t;
  }
  throw std::runtime_error("one_phase_stop: target never reached within trace");
}

RunTrace run(const Corpus& corpus, const RunConfig& config,
             const IterationObserver& observer) {
  if (config.batch_size < 1) throw std::invalid_argument("run: batch_size must be >= 1");
  auto cat_it = corpus.categories.find(config.category);
  if (cat_it == corpus.categories.end())
    throw std::runtime_error("run: unknown category " + config.category);
  const auto& positives = cat_it->second;
  if (positives.empty())
    throw std::runtime_error("run: category " + config.category + " has no positives");

  const long n_docs = corpus.size();
  const int dim = static_cast<int>(corpus.terms.size());
  std::vector<FeatureVector> features(n_docs);
  std::vector<bool> is_positive(n_docs, false);
  std::unordered_map<std::string, long> doc_index;
  for (long i = 0; i < n_docs; ++i) {
    features[i] = vectorize(corpus.documents[i], corpus, config.bm25_k1, config.bm25_b);
    doc_index[corpus.documents[i].id] = i;
    is_positive[i] = positives.count(corpus.documents[i].id) > 0;
  }

  const long total_positives = static_cast<long>(positives.size());
  const long quota = recall_quota(total_positives, config.recall_target);

  RunTrace trace;
  trace.config = config;
  trace.total_positives = total_positives;
  trace.collection_size = n_docs;

  const std::string seed_id = select_seed(positives, config.rng_seed);
  const long seed_idx = doc_index.at(seed_id);

  std::vector<bool> reviewed(n_docs, false);
  std::vector<ReviewedDoc> batch = {{seed_id, true}};
  long cum_pos = 0, cum_reviewed = 0;
  long crossing_t = -1;

  for (long t = 0;; ++t) {
    for (const auto& doc : batch) {
      reviewed[doc_index.at(doc.id)] = true;
      cum_reviewed += 1;
      if (doc.positive) cum_pos += 1;
    }

    // Rank the unreviewed pool: similarity to the seed at t = 0 (no model
    // can be trained from one labeled class), the freshly trained model after.
    // If batch 1 was all-positive the similarity ranking carries one more
    // iteration; a one-class training set beyond that is a hard error.
    const bool one_class = cum_pos == 0 || cum_pos == cum_reviewed;
    std::vector<ScoredDoc> pool;
    pool.reserve(n_docs - cum_reviewed);
    const bool similarity_scores = t == 0 || (t == 1 && one_class);
    if (similarity_scores) {
      for (long i = 0; i < n_docs; ++i) {
        if (!reviewed[i])
          pool.push_back({corpus.documents[i].id, sparse_dot(features[seed_idx], features[i])});
      }
    } else {
      std::vector<TrainingExample> examples;
      examples.reserve(cum_reviewed);
      for (long i = 0; i < n_docs; ++i) {
        if (reviewed[i]) examples.push_back({features[i], is_positive[i] ? 1 : -1});
      }
      const LinearModel model = train(std::move(examples), dim, config.train).model;
      for (long i = 0; i < n_docs; ++i) {
        if (!reviewed[i]) pool.push_back({corpus.documents[i].id, score(model, features[i])});
      }
    }
    if (observer) observer(t, pool);

    IterationRecord record;
    record.t = t;
    record.batch = std::move(batch);
    record.cum_pos = cum_pos;
    record.cum_reviewed = cum_reviewed;
    record.gain_positions = positive_ranks(pool, is_positive, doc_index);
    trace.records.push_back(std::move(record));

    if (cum_pos >= quota) {
      if (crossing_t < 0) crossing_t = t;
      if (t - crossing_t >= config.extension_batches) break;
    }
    if (pool.empty()) break;

    // Uncertainty selection needs probability scores, so similarity-ranked
    // iterations fall back to top-of-ranking selection for both strategies.
    std::vector<std::string> selected;
    if (similarity_scores || config.strategy == Strategy::kRelevanceFeedback) {
      selected = relevance_feedback_batch(pool, config.batch_size);
    } else {
      selected = uncertainty_batch(pool, config.batch_size);
    }
    batch.clear();
    for (auto& id : selected) {
      const bool pos = is_positive[doc_index.at(id)];
      batch.push_back({std::move(id), pos});
    }
  }
  return trace;
}

void save_trace(const RunTrace& trace, const std::string& path) {
  ordered_json root;
  root["config"] = {{"category", trace.config.category},
                    {"rng_seed", trace.config.rng_seed},
                    {"batch_size", trace.config.batch_size},
                    {"recall_target", trace.config.recall_target},
                    {"strategy", strategy_name(trace.config.strategy)},
                    {"extension_batches", trace.config.extension_batches},
                    {"bm25_k1", trace.config.bm25_k1},
                    {"bm25_b", trace.config.bm25_b},
                    {"l2_weight", trace.config.train.l2_weight},
                    {"max_epochs", trace.config.train.max_epochs},
                    {"tolerance", trace.config.train.tolerance}};
  root["total_positives"] = trace.total_positives;
  root["collection_size"] = trace.collection_size;
  ordered_json records = ordered_json::array();
  for (const auto& record : trace.records) {
    ordered_json batch = ordered_json::array();
    for (const auto& doc : record.batch)
      batch.push_back(ordered_json::array({doc.id, doc.positive ? 1 : 0}));
    records.push_back({{"t", record.t},
                       {"batch", std::move(batch)},
                       {"cum_pos", record.cum_pos},
                       {"cum_reviewed", record.cum_reviewed},
                       {"gain_positions", record.gain_positions}});
  }
  root["records"] = std::move(records);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_trace: cannot open " + path);
  out << root.dump() << "\n";
}

RunTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_trace: cannot open " + path);
  ordered_json root;
  try {
    in >> root;
  } catch (const std::exception& e) {
    throw std::runtime_error("load_trace: parse error in " + path + ": " + e.what());
  }
  RunTrace trace;
  const auto& cfg = root.at("config");
  trace.config.category = cfg.at("category").get<std::string>();
  trace.config.rng_seed = cfg.at("rng_seed").get<std::uint64_t>();
  trace.config.batch_size = cfg.at("batch_size").get<long>();
  trace.config.recall_target = cfg.at("recall_target").get<double>();
  trace.config.strategy = strategy_from_name(cfg.at("strategy").get<std::string>());
  trace.config.extension_batches = cfg.at("extension_batches").get<long>();
  trace.config.bm25_k1 = cfg.at("bm25_k1").get<double>();
  trace.config.bm25_b = cfg.at("bm25_b").get<double>();
  trace.config.train.l2_weight = cfg.at("l2_weight").get<double>();
  trace.config.train.max_epochs = cfg.at("max_epochs").get<int>();
  trace.config.train.tolerance = cfg.at("tolerance").get<double>();
  trace.total_positives = root.at("total_positives").get<long>();
  trace.collection_size = root.at("collection_size").get<long>();
  for (const auto& rec : root.at("records")) {
    IterationRecord record;
    record.t = rec.at("t").get<long>();
    for (const auto& entry : rec.at("batch"))
      record.batch.push_back({entry[0].get<std::string>(), entry[1].get<int>() != 0});
    record.cum_pos = rec.at("cum_pos").get<long>();
    record.cum_reviewed = rec.at("cum_reviewed").get<long>();
    record.gain_positions = rec.at("gain_positions").get<std::vector<long>>();
    trace.records.push_back(std::move(record));
  }
  return trace;
}

}  // namespace tarlab
