#include "tarlab/costmodel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tarlab {

namespace {

void check_structure(const CostStructure& s) {
  const double values[] = {s.alpha_p, s.alpha_n, s.beta_p, s.beta_n};
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("cost structure values must be positive and finite");
  }
}

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> values;
  std::string cleaned;
  for (char c : text) {
    if (c == '(' || c == ')' || c == ' ') continue;
    cleaned.push_back(c);
  }
  std::stringstream ss(cleaned);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number in structure spec: " + item);
    }
    if (pos != item.size())
      throw std::invalid_argument("bad number in structure spec: " + item);
    values.push_back(v);
  }
  return values;
}

}  // namespace

CostStructure make_family(const FamilyParams& p) {
  CostStructure s;
  switch (p.family) {
    case CostFamily::kUniform:
      s = {1.0, 1.0, 1.0, 1.0};
      break;
    case CostFamily::kExpensiveTraining:
      s = {p.alpha, p.alpha, p.beta, p.beta};
      break;
    case CostFamily::kAdditivePositives:
      if (p.v < 0.0) throw std::invalid_argument("make_family: v must be >= 0");
      s = {p.alpha + p.v, p.alpha, p.beta + p.v, p.beta};
      break;
    case CostFamily::kMultiplicativePositives:
      if (p.u < 1.0) throw std::invalid_argument("make_family: u must be >= 1");
      s = {p.u * p.alpha, p.alpha, p.u * p.beta, p.beta};
      break;
    case CostFamily::kElitePhaseOne:
      if (!(p.alpha >= p.beta_p && p.beta_p > p.beta_n))
        throw std::invalid_argument("make_family: elite requires alpha >= beta_p > beta_n");
      s = {p.alpha, p.alpha, p.beta_p, p.beta_n};
      break;
    case CostFamily::kAxisExpensiveTraining:
      if (p.x < 0.0) throw std::invalid_argument("make_family: x must be >= 0");
      s = {1.0 + p.x, 1.0 + p.x, 1.0, 1.0};
      break;
    case CostFamily::kAxisAdditivePositives:
      if (p.x < 0.0) throw std::invalid_argument("make_family: x must be >= 0");
      s = {1.0 + p.x, 1.0, 1.0 + p.x, 1.0};
      break;
    case CostFamily::kAxisExpensivePhaseOnePositives:
      if (p.x < 0.0) throw std::invalid_argument("make_family: x must be >= 0");
      s = {1.0 + p.x, 1.0, 1.0, 1.0};
      break;
  }
  check_structure(s);
  return s;
}

CostStructure parse_structure_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    const auto values = parse_numbers(spec);
    if (values.size() != 4)
      throw std::invalid_argument("structure spec needs four values: " + spec);
    CostStructure s{values[0], values[1], values[2], values[3]};
    check_structure(s);
    return s;
  }

  const std::string name = spec.substr(0, colon);
  const auto args = parse_numbers(spec.substr(colon + 1));
  FamilyParams p;
  auto want = [&](std::size_t n) {
    if (args.size() != n)
      throw std::invalid_argument("family " + name + " expects " + std::to_string(n) +
                                  " arguments");
  };
  if (name == "uniform") {
    want(0);
    p.family = CostFamily::kUniform;
  } else if (name == "expensive_training") {
    want(2);
    p.family = CostFamily::kExpensiveTraining;
    p.alpha = args[0];
    p.beta = args[1];
  } else if (name == "additive_positives") {
    want(3);
    p.family = CostFamily::kAdditivePositives;
    p.alpha = args[0];
    p.beta = args[1];
    p.v = args[2];
  } else if (name == "multiplicative_positives") {
    want(3);
    p.family = CostFamily::kMultiplicativePositives;
    p.alpha = args[0];
    p.beta = args[1];
    p.u = args[2];
  } else if (name == "elite_phase_one") {
    want(3);
    p.family = CostFamily::kElitePhaseOne;
    p.alpha = args[0];
    p.beta_p = args[1];
    p.beta_n = args[2];
  } else if (name == "axis_expensive_training") {
    want(1);
    p.family = CostFamily::kAxisExpensiveTraining;
    p.x = args[0];
  } else if (name == "axis_additive_positives") {
    want(1);
    p.family = CostFamily::kAxisAdditivePositives;
    p.x = args[0];
  } else if (name == "axis_expensive_p1_positives") {
    want(1);
    p.family = CostFamily::kAxisExpensivePhaseOnePositives;
    p.x = args[0];
  } else {
    throw std::invalid_argument("unknown cost family: " + name);
  }
  return make_family(p);
}

CostBreakdown total_cost(const CostStructure& s, long cum_pos, long cum_reviewed,
                         long rho_t, long quota) {
  check_structure(s);
  if (cum_pos < 0 || cum_pos > cum_reviewed)
    throw std::invalid_argument("total_cost: need 0 <= Q_t <= N_t");
  if (cum_pos >= quota) {
    if (rho_t != 0) throw std::invalid_argument("total_cost: rho must be 0 once quota met");
  } else if (rho_t < quota - cum_pos) {
    throw std::invalid_argument("total_cost: rho below the remaining deficit");
  }

  CostBreakdown cost;
  cost.phase1_pos = s.alpha_p * static_cast<double>(cum_pos);
  cost.phase1_neg = s.alpha_n * static_cast<double>(cum_reviewed - cum_pos);
  if (cum_pos < quota) {
    cost.phase2_pos = s.beta_p * static_cast<double>(quota - cum_pos);
    cost.phase2_neg = s.beta_n * static_cast<double>(rho_t - quota + cum_pos);
  }
  return cost;
}

double cost_variable_form(const CostStructure& s, long cum_pos, long cum_reviewed,
                          long rho_t, long quota) {
  check_structure(s);
  const double q_t = static_cast<double>(cum_pos);
  const double n_t = static_cast<double>(cum_reviewed);
  if (cum_pos >= quota) {
    return (s.alpha_p - s.alpha_n) * q_t + s.alpha_n * n_t;
  }
  return (s.alpha_p - s.alpha_n - s.beta_p + s.beta_n) * q_t + s.alpha_n * n_t +
         s.beta_n * static_cast<double>(rho_t) +
         (s.beta_p - s.beta_n) * static_cast<double>(quota);
}

CostDynamics dynamics(const RunTrace& trace, const CostStructure& s,
                      double recall_target) {
  if (trace.records.empty()) throw std::invalid_argument("dynamics: empty trace");
  CostDynamics dyn;
  dyn.structure = s;
  dyn.quota = recall_quota(trace.total_positives, recall_target);
  for (const auto& record : trace.records) {
    const long rho_t = rho(record, dyn.quota);
    dyn.points.push_back(
        {record.t, total_cost(s, record.cum_pos, record.cum_reviewed, rho_t, dyn.quota)});
  }
  return dyn;
}

StoppingAnalysis optimal_stop(const CostDynamics& dyn) {
  if (dyn.points.empty()) throw std::invalid_argument("optimal_stop: empty dynamics");
  StoppingAnalysis analysis;
  analysis.optimal_t = dyn.points.front().t;
  analysis.min_cost = dyn.points.front().breakdown.total();
  for (const auto& point : dyn.points) {
    const double cost = point.breakdown.total();
    if (cost < analysis.min_cost) {  // ties keep the earliest iteration
      analysis.min_cost = cost;
      analysis.optimal_t = point.t;
    }
  }
  return analysis;
}

StoppingAnalysis acceptable_range(const CostDynamics& dyn, double tolerance) {
  if (tolerance < 0.0) throw std::invalid_argument("acceptable_range: tolerance must be >= 0");
  StoppingAnalysis analysis = optimal_stop(dyn);
  analysis.tolerance = tolerance;
  const double threshold = (1.0 + tolerance) * analysis.min_cost;
  for (const auto& point : dyn.points) {
    if (point.breakdown.total() <= threshold)
      analysis.acceptable_iterations.push_back(point.t);
  }
  analysis.truncated =
      !analysis.acceptable_iterations.empty() &&
      analysis.acceptable_iterations.back() == dyn.points.back().t;
  return analysis;
}

double one_phase_cost(const RunTrace& trace, const CostStructure& s,
                      double recall_target) {
  const long quota = recall_quota(trace.total_positives, recall_target);
  const long stop_t = one_phase_stop(trace, quota);
  for (const auto& record : trace.records) {
    if (record.t == stop_t)
      return total_cost(s, record.cum_pos, record.cum_reviewed, 0, quota).total();
  }
  throw std::runtime_error("one_phase_cost: stop iteration missing from trace");
}

}  // namespace tarlab
