#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tarlab/corpus.hpp"

namespace tarlab {

struct KsResult {
  double statistic = 0.0;  // D
  double p_value = 1.0;
};

struct ComparisonResult {
  double mean_reduction = 0.0;
  std::vector<double> per_task_reductions;
  double ks_statistic = 0.0;
  double p_value = 1.0;                  // after Bonferroni correction
  std::optional<double> significant_at;  // the level, when significant
};

enum class PrevalenceBin { kTooRare, kRare, kMedium, kCommon, kTooCommon };
enum class DifficultyBin { kHard, kMedium, kEasy };

std::string prevalence_bin_name(PrevalenceBin bin);
std::string difficulty_bin_name(DifficultyBin bin);

struct BinAssignment {
  std::string category;
  PrevalenceBin prevalence_bin = PrevalenceBin::kTooRare;
  DifficultyBin difficulty_bin = DifficultyBin::kHard;
  double r_precision = 0.0;
  long positive_count = 0;
};

// 1 - cost_a / cost_b; intentionally asymmetric in its arguments.
double relative_cost_reduction(double cost_a, double cost_b);

// Two-sample Kolmogorov-Smirnov: D as the sup-distance between empirical
// CDFs, p from the asymptotic Kolmogorov series.
KsResult ks_two_sample(const std::vector<double>& xs, const std::vector<double>& ys);

// min(1, m * p).
double bonferroni(double p, long m);

// Fraction of positives among the top R ranks.
double r_precision(const std::vector<bool>& ranked_labels, long total_positives);

// Boundary rules, left-closed: prevalence [0,500) / [500,2000) / [2000,8000)
// / [8000,32000) / [32000,inf); difficulty [0,0.65) / [0.65,0.85) / [0.85,1].
PrevalenceBin prevalence_bin_for(long positive_count);
DifficultyBin difficulty_bin_for(double r_precision_score);

// Trains logistic regression on a random train_fraction split and scores the
// held-out remainder; the difficulty bin comes from held-out R-precision.
BinAssignment assign_bins(const Corpus& corpus, const std::string& category,
                          std::uint64_t split_seed, double train_fraction = 0.25);

// Paired workflow comparison over the same (category, seed) task list.
ComparisonResult compare_workflows(const std::vector<double>& costs_a,
                                   const std::vector<double>& costs_b,
                                   long correction_m, double level = 0.05);

}  // namespace tarlab
