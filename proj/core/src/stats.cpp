#include "tarlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "tarlab/classifier.hpp"

namespace tarlab {

namespace {

// Asymptotic Kolmogorov survival function with the small-sample adjustment
// lambda = (sqrt(n_e) + 0.12 + 0.11/sqrt(n_e)) * D, truncated at 1e-12.
double kolmogorov_p(double d, double m, double n) {
  const double n_e = m * n / (m + n);
  const double sqrt_ne = std::sqrt(n_e);
  const double lambda = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d;
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 1000; ++k) {
    const double term = std::exp(-2.0 * lambda * lambda * k * k);
    if (term < 1e-12) break;
    sum += sign * term;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

std::string prevalence_bin_name(PrevalenceBin bin) {
  switch (bin) {
    case PrevalenceBin::kTooRare: return "too_rare";
    case PrevalenceBin::kRare: return "rare";
    case PrevalenceBin::kMedium: return "medium";
    case PrevalenceBin::kCommon: return "common";
    case PrevalenceBin::kTooCommon: return "too_common";
  }
  return "";
}

std::string difficulty_bin_name(DifficultyBin bin) {
  switch (bin) {
    case DifficultyBin::kHard: return "hard";
    case DifficultyBin::kMedium: return "medium";
    case DifficultyBin::kEasy: return "easy";
  }
  return "";
}

double relative_cost_reduction(double cost_a, double cost_b) {
  if (cost_b <= 0.0)
    throw std::invalid_argument("relative_cost_reduction: cost_b must be > 0");
  return 1.0 - cost_a / cost_b;
}

KsResult ks_two_sample(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.empty() || ys.empty())
    throw std::invalid_argument("ks_two_sample: samples must be non-empty");
  std::vector<double> a = xs, b = ys;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double m = static_cast<double>(a.size());
  const double n = static_cast<double>(b.size());

  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double value = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= value) ++i;
    while (j < b.size() && b[j] <= value) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n));
  }

  KsResult result;
  result.statistic = d;
  result.p_value = kolmogorov_p(d, m, n);
  return result;
}

double bonferroni(double p, long m) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("bonferroni: p must be in [0,1]");
  if (m < 1) throw std::invalid_argument("bonferroni: m must be >= 1");
  return std::min(1.0, static_cast<double>(m) * p);
}

double r_precision(const std::vector<bool>& ranked_labels, long total_positives) {
  if (total_positives < 1) throw std::invalid_argument("r_precision: R must be >= 1");
  if (static_cast<long>(ranked_labels.size()) < total_positives)
    throw std::invalid_argument("r_precision: ranking shorter than R");
  long hits = 0;
  for (long i = 0; i < total_positives; ++i) {
    if (ranked_labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(total_positives);
}

PrevalenceBin prevalence_bin_for(long positive_count) {
  if (positive_count < 0) throw std::invalid_argument("prevalence_bin_for: negative count");
  if (positive_count < 500) return PrevalenceBin::kTooRare;
  if (positive_count < 2000) return PrevalenceBin::kRare;
  if (positive_count < 8000) return PrevalenceBin::kMedium;
  if (positive_count < 32000) return PrevalenceBin::kCommon;
  return PrevalenceBin::kTooCommon;
}

DifficultyBin difficulty_bin_for(double r_precision_score) {
  if (r_precision_score < 0.0 || r_precision_score > 1.0)
    throw std::invalid_argument("difficulty_bin_for: score must be in [0,1]");
  if (r_precision_score < 0.65) return DifficultyBin::kHard;
  if (r_precision_score < 0.85) return DifficultyBin::kMedium;
  return DifficultyBin::kEasy;
}

BinAssignment assign_bins(const Corpus& corpus, const std::string& category,
                          std::uint64_t split_seed, double train_fraction) {
  auto cat_it = corpus.categories.find(category);
  if (cat_it == corpus.categories.end())
    throw std::runtime_error("assign_bins: unknown category " + category);
  const auto& positives = cat_it->second;

  const long n = corpus.size();
  std::vector<long> indices(n);
  for (long i = 0; i < n; ++i) indices[i] = i;
  std::mt19937_64 rng(split_seed);
  for (long i = n - 1; i > 0; --i) {
    const long j = static_cast<long>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(indices[i], indices[j]);
  }
  const long n_train = static_cast<long>(train_fraction * static_cast<double>(n));

  const int dim = static_cast<int>(corpus.terms.size());
  std::vector<TrainingExample> train_set;
  struct Holdout {
    std::string id;
    FeatureVector x;
    bool positive;
  };
  std::vector<Holdout> holdout;
  for (long k = 0; k < n; ++k) {
    const auto& doc = corpus.documents[indices[k]];
    const bool pos = positives.count(doc.id) > 0;
    FeatureVector vec = vectorize(doc, corpus);
    if (k < n_train) {
      train_set.push_back({std::move(vec), pos ? 1 : -1});
    } else {
      holdout.push_back({doc.id, std::move(vec), pos});
    }
  }

  long holdout_positives = 0;
  for (const auto& h : holdout) holdout_positives += h.positive ? 1 : 0;
  if (holdout_positives == 0)
    throw std::runtime_error("assign_bins: no positives in held-out split for " + category);

  const LinearModel model = train(std::move(train_set), dim).model;
  std::vector<std::pair<double, const Holdout*>> ranked;
  ranked.reserve(holdout.size());
  for (const auto& h : holdout) ranked.emplace_back(score(model, h.x), &h);
  std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second->id < y.second->id;
  });
  std::vector<bool> labels;
  labels.reserve(ranked.size());
  for (const auto& [s, h] : ranked) {
    (void)s;
    labels.push_back(h->positive);
  }

  BinAssignment assignment;
  assignment.category = category;
  assignment.positive_count = static_cast<long>(positives.size());
  assignment.prevalence_bin = prevalence_bin_for(assignment.positive_count);
  assignment.r_precision = r_precision(labels, holdout_positives);
  assignment.difficulty_bin = difficulty_bin_for(assignment.r_precision);
  return assignment;
}

ComparisonResult compare_workflows(const std::vector<double>& costs_a,
                                   const std::vector<double>& costs_b,
                                   long correction_m, double level) {
  if (costs_a.size() != costs_b.size())
    throw std::invalid_argument("compare_workflows: paired lists must have equal length");
  if (costs_a.empty()) throw std::invalid_argument("compare_workflows: empty task list");

  ComparisonResult result;
  double sum = 0.0;
  for (std::size_t i = 0; i < costs_a.size(); ++i) {
    const double reduction = relative_cost_reduction(costs_a[i], costs_b[i]);
    result.per_task_reductions.push_back(reduction);
    sum += reduction;
  }
  result.mean_reduction = sum / static_cast<double>(costs_a.size());

  const KsResult ks = ks_two_sample(costs_a, costs_b);
  result.ks_statistic = ks.statistic;
  result.p_value = bonferroni(ks.p_value, correction_m);
  if (result.p_value < level) result.significant_at = level;
  return result;
}

}  // namespace tarlab
