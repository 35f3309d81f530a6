#pragma once

#include <span>
#include <vector>

#include "tarlab/corpus.hpp"

namespace tarlab {

struct TrainingExample {
  FeatureVector x;
  int y = 1;  // +1 or -1
};

// Dense weight vector plus unpenalized bias. Immutable once trained.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
};

struct TrainConfig {
  double l2_weight = 1.0;   // C in J = sum log(1+exp(-y f)) + (1/2C)||w||^2
  int max_epochs = 500;
  double tolerance = 1e-8;  // stop when objective improvement falls below
};

struct TrainResult {
  LinearModel model;
  std::vector<double> epoch_objectives;  // objective after each accepted step
};

// Objective and gradient at params = [w_0..w_{dim-1}, b]. The bias carries
// no penalty. Exposed so the training objective can be checked against
// finite differences independently of the optimizer.
double objective_and_gradient(const std::vector<double>& params,
                              std::span<const TrainingExample> examples,
                              const TrainConfig& config,
                              std::vector<double>* gradient);

// Full-batch L-BFGS with Armijo backtracking, cold start at zero.
// Deterministic; the result depends only on the multiset of examples.
// Throws std::runtime_error if only one class is present.
TrainResult train(std::vector<TrainingExample> examples, int dim,
                  const TrainConfig& config = {});

// sigma(w.x + b). Throws std::out_of_range for indices past the weight vector.
double score(const LinearModel& model, const FeatureVector& vec);

}  // namespace tarlab
