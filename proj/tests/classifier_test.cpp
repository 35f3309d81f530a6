#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <random>

#include "tarlab/classifier.hpp"

using namespace tarlab;

namespace {

FeatureVector fv(std::initializer_list<std::pair<int, double>> entries) {
  FeatureVector v;
  v.entries = entries;
  return v;
}

std::vector<TrainingExample> random_problem(std::mt19937_64& rng, int n, int dim) {
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::vector<TrainingExample> examples;
  for (int i = 0; i < n; ++i) {
    TrainingExample ex;
    ex.y = (i % 2 == 0) ? 1 : -1;
    for (int j = 0; j < dim; ++j) {
      if (rng() % 2) ex.x.entries.emplace_back(j, value(rng));
    }
    examples.push_back(std::move(ex));
  }
  return examples;
}

}  // namespace

TEST_CASE("score is a sigmoid of the linear form") {
  LinearModel model{{0.0, 0.0}, 0.0};
  CHECK(score(model, fv({{0, 0.3}, {1, 0.9}})) == doctest::Approx(0.5));

  model.weights = {1.0};
  CHECK(score(model, fv({{0, 0.625}})) == doctest::Approx(0.6513).epsilon(1e-4));

  model.weights = {100.0};
  CHECK(score(model, fv({{0, 1.0}})) > 0.999999);

  CHECK_THROWS_AS(score(model, fv({{5, 1.0}})), std::out_of_range);
}

TEST_CASE("objective at zero is n*log2 with the symmetric bias gradient") {
  std::vector<TrainingExample> examples = {
      {fv({{0, 0.5}}), 1}, {fv({{1, 0.2}}), 1}, {fv({{0, 0.9}}), -1}};
  TrainConfig config;
  std::vector<double> grad;
  const double j0 = objective_and_gradient({0.0, 0.0, 0.0}, examples, config, &grad);
  CHECK(j0 == doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-12));
  // grad_b = -(n_pos - n_neg)/2
  CHECK(grad[2] == doctest::Approx(-(2.0 - 1.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("doubling C halves the penalty contribution") {
  std::vector<TrainingExample> examples = {{fv({{0, 1.0}}), 1}, {fv({{0, -1.0}}), -1}};
  const std::vector<double> params = {0.8, 0.3};
  TrainConfig c1, c2;
  c1.l2_weight = 1.0;
  c2.l2_weight = 2.0;
  c1.l2_weight = 1.0;
  const double loss_only = [&] {
    TrainConfig no_penalty;
    no_penalty.l2_weight = 0.0;
    return objective_and_gradient(params, examples, no_penalty, nullptr);
  }();
  const double j1 = objective_and_gradient(params, examples, c1, nullptr);
  const double j2 = objective_and_gradient(params, examples, c2, nullptr);
  CHECK(j2 - loss_only == doctest::Approx((j1 - loss_only) / 2.0).epsilon(1e-12));
}

TEST_CASE("gradient matches central finite differences at random points") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> point(-0.5, 0.5);
  TrainConfig config;
  for (int trial = 0; trial < 20; ++trial) {
    const auto examples = random_problem(rng, 10, 5);
    std::vector<double> params(6);
    for (auto& p : params) p = point(rng);
    std::vector<double> grad;
    objective_and_gradient(params, examples, config, &grad);

    const double h = 1e-6;
    for (std::size_t j = 0; j < params.size(); ++j) {
      auto plus = params, minus = params;
      plus[j] += h;
      minus[j] -= h;
      const double fd = (objective_and_gradient(plus, examples, config, nullptr) -
                         objective_and_gradient(minus, examples, config, nullptr)) /
                        (2.0 * h);
      CHECK(std::abs(grad[j] - fd) / (1.0 + std::abs(grad[j])) <= 1e-5);
    }
  }
}

TEST_CASE("training separates 1-D separable data deterministically") {
  std::vector<TrainingExample> examples = {{fv({{0, 1.0}}), 1}, {fv({{0, -1.0}}), -1}};
  const TrainResult a = train(examples, 1);
  CHECK(score(a.model, fv({{0, 1.0}})) > 0.5);
  CHECK(score(a.model, fv({{0, -1.0}})) < 0.5);

  const TrainResult b = train(examples, 1);
  CHECK(a.model.weights == b.model.weights);
  CHECK(a.model.bias == b.model.bias);
}

TEST_CASE("training beats the zero model and never increases the objective") {
  std::mt19937_64 rng(7);
  const auto examples = random_problem(rng, 10, 5);
  const TrainResult result = train(examples, 5);
  CHECK(result.epoch_objectives.front() ==
        doctest::Approx(10.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(result.epoch_objectives.back() <= result.epoch_objectives.front());
  for (std::size_t i = 1; i < result.epoch_objectives.size(); ++i)
    CHECK(result.epoch_objectives[i] <= result.epoch_objectives[i - 1]);
}

TEST_CASE("the trained model depends only on the multiset of examples") {
  std::mt19937_64 rng(11);
  auto examples = random_problem(rng, 12, 4);
  const TrainResult a = train(examples, 4);
  std::shuffle(examples.begin(), examples.end(), rng);
  const TrainResult b = train(examples, 4);
  CHECK(a.model.weights == b.model.weights);
  CHECK(a.model.bias == b.model.bias);
}

TEST_CASE("single-class input is a training error") {
  std::vector<TrainingExample> examples = {{fv({{0, 1.0}}), 1}, {fv({{0, 0.5}}), 1}};
  CHECK_THROWS_AS(train(examples, 1), std::runtime_error);
}

TEST_CASE("full accuracy on a margin-1 separable cluster pair") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> noise(-0.4, 0.4);
  std::vector<TrainingExample> examples;
  for (int i = 0; i < 100; ++i) {
    const int y = (i % 2 == 0) ? 1 : -1;
    // cluster centers at +-1.5 on feature 0; margin >= 1 between clusters
    examples.push_back({fv({{0, 1.5 * y + noise(rng)}, {1, noise(rng)}}), y});
  }
  const TrainResult result = train(examples, 2);
  for (const auto& ex : examples) {
    const double p = score(result.model, ex.x);
    CHECK((ex.y > 0 ? p > 0.5 : p < 0.5));
  }
}
