#include "tarlab/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace tarlab {

namespace {

double log1p_exp(double z) {
  // log(1 + e^z) without overflow
  if (z > 35.0) return z;
  if (z < -35.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double linear_score(const std::vector<double>& params, const FeatureVector& x) {
  double f = params.back();  // bias in the last slot
  for (const auto& [idx, value] : x.entries) f += params[idx] * value;
  return f;
}

}  // namespace

double objective_and_gradient(const std::vector<double>& params,
                              std::span<const TrainingExample> examples,
                              const TrainConfig& config,
                              std::vector<double>* gradient) {
  const std::size_t dim = params.size() - 1;
  if (gradient) gradient->assign(params.size(), 0.0);

  double objective = 0.0;
  for (const auto& ex : examples) {
    const double f = linear_score(params, ex.x);
    const double z = -static_cast<double>(ex.y) * f;
    objective += log1p_exp(z);
    if (gradient) {
      // d/df log(1+e^{-yf}) = -y * sigma(-yf)
      const double coeff = -static_cast<double>(ex.y) / (1.0 + std::exp(-z));
      for (const auto& [idx, value] : ex.x.entries) (*gradient)[idx] += coeff * value;
      (*gradient)[dim] += coeff;
    }
  }
  if (config.l2_weight > 0.0) {
    const double inv_c = 1.0 / config.l2_weight;
    double penalty = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      penalty += params[j] * params[j];
      if (gradient) (*gradient)[j] += inv_c * params[j];
    }
    objective += 0.5 * inv_c * penalty;
  }
  return objective;
}

TrainResult train(std::vector<TrainingExample> examples, int dim,
                  const TrainConfig& config) {
  if (config.l2_weight < 0.0) throw std::invalid_argument("train: l2_weight must be >= 0");
  if (config.tolerance <= 0.0) throw std::invalid_argument("train: tolerance must be > 0");

  bool has_pos = false, has_neg = false;
  for (const auto& ex : examples) {
    (ex.y > 0 ? has_pos : has_neg) = true;
    if (!ex.x.entries.empty() && ex.x.entries.back().first >= dim)
      throw std::invalid_argument("train: feature index out of range");
  }
  if (!has_pos || !has_neg)
    throw std::runtime_error("train: need at least one positive and one negative example");

  // Fix an internal canonical order so the result depends only on the
  // multiset of examples, not the order the caller supplied them in.
  std::sort(examples.begin(), examples.end(),
            [](const TrainingExample& a, const TrainingExample& b) {
              if (a.y != b.y) return a.y < b.y;
              return a.x.entries < b.x.entries;
            });

  const std::size_t n_params = static_cast<std::size_t>(dim) + 1;
  std::vector<double> params(n_params, 0.0);
  std::vector<double> grad;
  double objective = objective_and_gradient(params, examples, config, &grad);

  TrainResult result;
  result.epoch_objectives.push_back(objective);

  constexpr std::size_t kMemory = 10;
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;

  std::vector<double> direction(n_params), new_params(n_params), new_grad;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    // Two-loop recursion for the L-BFGS direction.
    direction = grad;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      alpha[i] = rho_hist[i] * dot(s_hist[i], direction);
      for (std::size_t j = 0; j < n_params; ++j) direction[j] -= alpha[i] * y_hist[i][j];
    }
    if (!s_hist.empty()) {
      const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
      for (auto& d : direction) d *= gamma;
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * dot(y_hist[i], direction);
      for (std::size_t j = 0; j < n_params; ++j) direction[j] += (alpha[i] - beta) * s_hist[i][j];
    }
    for (auto& d : direction) d = -d;

    double descent = dot(grad, direction);
    if (descent >= 0.0) {  // curvature breakdown; fall back to steepest descent
      for (std::size_t j = 0; j < n_params; ++j) direction[j] = -grad[j];
      descent = -dot(grad, grad);
    }
    if (descent == 0.0) break;

    // Armijo backtracking.
    double step = 1.0;
    double new_objective = objective;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t j = 0; j < n_params; ++j)
        new_params[j] = params[j] + step * direction[j];
      new_objective = objective_and_gradient(new_params, examples, config, &new_grad);
      if (new_objective <= objective + 1e-4 * step * descent) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    std::vector<double> s(n_params), y_diff(n_params);
    for (std::size_t j = 0; j < n_params; ++j) {
      s[j] = new_params[j] - params[j];
      y_diff[j] = new_grad[j] - grad[j];
    }
    const double sy = dot(s, y_diff);
    if (sy > 1e-12) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y_diff));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > kMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }

    const double improvement = objective - new_objective;
    params = new_params;
    grad = new_grad;
    objective = new_objective;
    result.epoch_objectives.push_back(objective);
    if (improvement < config.tolerance) break;
  }

  result.model.weights.assign(params.begin(), params.end() - 1);
  result.model.bias = params.back();
  return result;
}

double score(const LinearModel& model, const FeatureVector& vec) {
  double f = model.bias;
  for (const auto& [idx, value] : vec.entries) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= model.weights.size())
      throw std::out_of_range("score: feature index out of range");
    f += model.weights[idx] * value;
  }
  return 1.0 / (1.0 + std::exp(-f));
}

}  // namespace tarlab
