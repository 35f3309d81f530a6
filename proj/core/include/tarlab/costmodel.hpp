#pragma once

#include <string>
#include <vector>

#include "tarlab/simulator.hpp"

namespace tarlab {

// Per-document review prices: (alpha_p, alpha_n) for phase one,
// (beta_p, beta_n) for phase two. All four strictly positive.
struct CostStructure {
  double alpha_p = 1.0;
  double alpha_n = 1.0;
  double beta_p = 1.0;
  double beta_n = 1.0;
};

struct CostBreakdown {
  double phase1_pos = 0.0;
  double phase1_neg = 0.0;
  double phase2_pos = 0.0;
  double phase2_neg = 0.0;
  double total() const { return phase1_pos + phase1_neg + phase2_pos + phase2_neg; }
};

struct CostPoint {
  long t = 0;
  CostBreakdown breakdown;
};

// Cost at every candidate stopping point of one trace, for one structure
// and one recall quota.
struct CostDynamics {
  std::vector<CostPoint> points;
  long quota = 0;
  CostStructure structure;
};

struct StoppingAnalysis {
  long optimal_t = 0;
  double min_cost = 0.0;
  double tolerance = 0.0;
  std::vector<long> acceptable_iterations;  // cost <= (1+tolerance)*min_cost
  // Set when the trace's last iteration is itself still acceptable, i.e.
  // the trace was not extended far enough to bound the acceptable set.
  bool truncated = false;

  long acceptable_count() const { return static_cast<long>(acceptable_iterations.size()); }
};

enum class CostFamily {
  kUniform,
  kExpensiveTraining,
  kAdditivePositives,
  kMultiplicativePositives,
  kElitePhaseOne,
  // Single-knob families: (1+x,1+x,1,1), (1+x,1,1+x,1), (1+x,1,1,1).
  kAxisExpensiveTraining,
  kAxisAdditivePositives,
  kAxisExpensivePhaseOnePositives,
};

struct FamilyParams {
  CostFamily family = CostFamily::kUniform;
  double alpha = 1.0;
  double beta = 1.0;
  double beta_p = 1.0;
  double beta_n = 1.0;
  double v = 0.0;  // additive surcharge, >= 0
  double u = 1.0;  // multiplicative surcharge, >= 1
  double x = 0.0;  // axis-family asymmetry, >= 0
};

CostStructure make_family(const FamilyParams& params);

// Accepts "ap,an,bp,bn" (parentheses optional) or "family:args", e.g.
// "expensive_training:10,1", "multiplicative_positives:10,1,2",
// "elite_phase_one:20,11,1", "axis_expensive_training:5".
CostStructure parse_structure_spec(const std::string& spec);

// Cost of stopping at a point with Q_t positives among N_t reviewed, given
// phase-two depth rho_t toward quota Q. Phase-two components are zero once
// Q_t >= Q.
CostBreakdown total_cost(const CostStructure& s, long cum_pos, long cum_reviewed,
                         long rho_t, long quota);

// Same quantity via the collected-terms form; must agree with total_cost.
double cost_variable_form(const CostStructure& s, long cum_pos, long cum_reviewed,
                          long rho_t, long quota);

CostDynamics dynamics(const RunTrace& trace, const CostStructure& s,
                      double recall_target);

StoppingAnalysis optimal_stop(const CostDynamics& dyn);
StoppingAnalysis acceptable_range(const CostDynamics& dyn, double tolerance);

// Cost of the pure one-phase review: total_cost at the first quota crossing.
double one_phase_cost(const RunTrace& trace, const CostStructure& s,
                      double recall_target);

}  // namespace tarlab
